#include "cpack/edo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace cpack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SeparatorHierarchy SeparatorHierarchy::build(const GeometricGraph& g, double c,
                                             int n0, double beta) {
  if (n0 < 1) throw std::invalid_argument("edo: n0 must be >= 1");
  if (!g.connected())
    throw std::invalid_argument("edo: graph must be connected");

  SeparatorHierarchy h;
  h.n_ = g.n();
  h.n0_ = n0;
  h.home_.assign(g.n(), -1);

  struct Task {
    std::vector<int> verts;
    int parent;
  };
  std::vector<Task> todo;
  {
    std::vector<int> all(g.n());
    for (int i = 0; i < g.n(); ++i) all[i] = i;
    todo.push_back({std::move(all), -1});
  }

  while (!todo.empty()) {
    Task task = std::move(todo.back());
    todo.pop_back();
    const int id = static_cast<int>(h.nodes_.size());
    h.nodes_.emplace_back();
    EdoNode& node = h.nodes_[id];
    node.parent = task.parent;
    node.verts = task.verts;  // sorted by construction
    if (task.parent >= 0) h.nodes_[task.parent].children.push_back(id);

    std::vector<int> to_global;
    GeometricGraph sub = g.induced(task.verts, &to_global);

    if (sub.n() <= n0) {
      node.leaf = true;
      node.leaf_table.assign(static_cast<std::size_t>(sub.n()) * sub.n(),
                             kInf);
      for (int s = 0; s < sub.n(); ++s) {
        auto r = dijkstra(sub, s);
        for (int v = 0; v < sub.n(); ++v)
          node.leaf_table[static_cast<std::size_t>(s) * sub.n() + v] =
              r.dist[v];
      }
      for (int v : to_global) h.home_[v] = id;
      continue;
    }

    auto comps = sub.components();
    if (comps.size() > 1) {
      // Separator removal left several components; group them into two
      // child subtrees balanced by size. No shortest path crosses
      // components, so an empty separator is sound here.
      std::sort(comps.begin(), comps.end(),
                [](const auto& a, const auto& b) {
                  return a.size() != b.size() ? a.size() > b.size()
                                              : a[0] < b[0];
                });
      std::vector<int> bin[2];
      std::size_t load[2] = {0, 0};
      for (const auto& comp : comps) {
        int pick = load[0] <= load[1] ? 0 : 1;
        load[pick] += comp.size();
        for (int v : comp) bin[pick].push_back(to_global[v]);
      }
      for (int side = 1; side >= 0; --side) {
        std::sort(bin[side].begin(), bin[side].end());
        todo.push_back({std::move(bin[side]), id});
      }
      continue;
    }

    auto res = build_separator(sub, c, beta);
    node.sep.reserve(res.C.size());
    for (int v : res.C) node.sep.push_back(to_global[v]);
    node.spt.resize(node.sep.size());
    for (std::size_t i = 0; i < node.sep.size(); ++i) {
      auto r = dijkstra(sub, res.C[i]);
      for (int v = 0; v < sub.n(); ++v)
        if (std::isfinite(r.dist[v]))
          node.spt[i].emplace(to_global[v], r.dist[v]);
    }
    for (int v : node.sep) h.home_[v] = id;

    for (const auto* part : {&res.B, &res.A}) {
      if (part->empty()) continue;
      std::vector<int> verts;
      verts.reserve(part->size());
      for (int v : *part) verts.push_back(to_global[v]);
      todo.push_back({std::move(verts), id});
    }
  }

  h.finalize();
  return h;
}

void SeparatorHierarchy::finalize() {
  std::vector<std::vector<int>> children(nodes_.size());
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
    children[i] = nodes_[i].children;
  lca_.build(children, root_);
}

EdoAnswer SeparatorHierarchy::query_full(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw std::invalid_argument("edo query: unknown vertex id");
  EdoAnswer ans;
  ans.distance = kInf;
  if (u == v) {
    ans.distance = 0.0;
    ans.level_node = home_[u];
    return ans;
  }
  const int s = lca_.lca(home_[u], home_[v]);
  for (int a = s; a >= 0; a = nodes_[a].parent) {
    const EdoNode& node = nodes_[a];
    if (node.leaf) {
      auto iu = std::lower_bound(node.verts.begin(), node.verts.end(), u);
      auto iv = std::lower_bound(node.verts.begin(), node.verts.end(), v);
      double d =
          node.leaf_table[(iu - node.verts.begin()) * node.verts.size() +
                          (iv - node.verts.begin())];
      ++ans.lookups;
      if (d < ans.distance) {
        ans.distance = d;
        ans.witness_sep_vertex = -1;
        ans.level_node = a;
      }
      continue;
    }
    for (std::size_t i = 0; i < node.sep.size(); ++i) {
      ++ans.lookups;
      auto du = node.spt[i].find(u);
      if (du == node.spt[i].end()) continue;
      auto dv = node.spt[i].find(v);
      if (dv == node.spt[i].end()) continue;
      double d = du->second + dv->second;
      if (d < ans.distance) {
        ans.distance = d;
        ans.witness_sep_vertex = node.sep[i];
        ans.level_node = a;
      }
    }
  }
  return ans;
}

EdoStats SeparatorHierarchy::stats() const {
  EdoStats st;
  st.node_count = static_cast<int>(nodes_.size());
  std::vector<int> depth(nodes_.size(), 0);
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    const EdoNode& node = nodes_[i];
    if (node.parent >= 0) depth[i] = depth[node.parent] + 1;
    st.height = std::max(st.height, depth[i]);
    for (const auto& m : node.spt) st.spt_entries += m.size();
    for (double d : node.leaf_table) st.spt_entries += std::isfinite(d);
  }
  return st;
}

std::string SeparatorHierarchy::dump() const {
  nlohmann::json j;
  j["format"] = "edo-v1";
  j["n"] = n_;
  j["n0"] = n0_;
  j["root"] = root_;
  j["home"] = home_;
  nlohmann::json nodes = nlohmann::json::array();
  for (const EdoNode& node : nodes_) {
    nlohmann::json nj;
    nj["children"] = node.children;
    if (node.leaf) {
      nj["verts"] = node.verts;
      nlohmann::json table = nlohmann::json::array();
      for (double d : node.leaf_table) {
        if (std::isfinite(d))
          table.push_back(d);
        else
          table.push_back(nullptr);
      }
      nj["table"] = std::move(table);
    } else if (!node.sep.empty()) {
      nj["sep"] = node.sep;
      nlohmann::json spt = nlohmann::json::array();
      for (const auto& m : node.spt) {
        std::vector<std::pair<int, double>> entries(m.begin(), m.end());
        std::sort(entries.begin(), entries.end());
        nlohmann::json rows = nlohmann::json::array();
        for (auto [id, d] : entries) rows.push_back({id, d});
        spt.push_back(std::move(rows));
      }
      nj["spt"] = std::move(spt);
    }
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  return j.dump();
}

DistFn dist_fn(const SeparatorHierarchy& h) {
  return memoize_dist([&h](int u, int v) { return h.query(u, v); });
}

SeparatorHierarchy SeparatorHierarchy::load(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "edo-v1")
    throw std::invalid_argument("edo load: unsupported format tag");
  SeparatorHierarchy h;
  h.n_ = j.at("n").get<int>();
  h.n0_ = j.at("n0").get<int>();
  h.root_ = j.at("root").get<int>();
  h.home_ = j.at("home").get<std::vector<int>>();
  for (const auto& nj : j.at("nodes")) {
    EdoNode node;
    node.children = nj.at("children").get<std::vector<int>>();
    if (nj.contains("verts")) {
      node.leaf = true;
      node.verts = nj.at("verts").get<std::vector<int>>();
      for (const auto& cell : nj.at("table"))
        node.leaf_table.push_back(cell.is_null() ? kInf : cell.get<double>());
    } else if (nj.contains("sep")) {
      node.sep = nj.at("sep").get<std::vector<int>>();
      for (const auto& rows : nj.at("spt")) {
        std::unordered_map<int, double> m;
        for (const auto& row : rows)
          m.emplace(row.at(0).get<int>(), row.at(1).get<double>());
        node.spt.push_back(std::move(m));
      }
    }
    h.nodes_.push_back(std::move(node));
  }
  for (int i = 0; i < static_cast<int>(h.nodes_.size()); ++i)
    for (int c : h.nodes_[i].children) h.nodes_[c].parent = i;
  h.finalize();
  return h;
}

}  // namespace cpack
