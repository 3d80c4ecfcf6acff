#include "cpack/treecover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cpack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double min_length(const std::vector<Dumbbell>& ds) {
  double m = kInf;
  for (const Dumbbell& d : ds) m = std::min(m, d.len);
  return m;
}

// Graph distance between two metric balls, clamped at zero.
double head_gap(double center_dist, double r1, double r2) {
  return std::max(0.0, center_dist - r1 - r2);
}

}  // namespace

std::vector<Dumbbell> make_dumbbells(const Wspd& w) {
  if (w.flavor != WspdFlavor::kGraph)
    throw std::invalid_argument(
        "make_dumbbells: needs a graph-distance decomposition");
  std::vector<Dumbbell> ds;
  ds.reserve(w.pairs.size());
  for (const WspdPair& p : w.pairs) {
    Dumbbell d;
    d.a = p.a;
    d.b = p.b;
    d.rep_a = p.rep_a;
    d.rep_b = p.rep_b;
    d.ra = p.dub_a;
    d.rb = p.dub_b;
    d.len = p.dist_lower;
    if (!(d.len > 0.0))
      throw std::logic_error("make_dumbbells: zero-length dumbbell");
    const double cap = d.len / (w.sigma + 1.0) * (1.0 + 1e-9);
    if (d.ra > cap || d.rb > cap)
      throw std::logic_error("make_dumbbells: head radius above len/(sigma+1)");
    ds.push_back(d);
  }
  return ds;
}

int length_group(std::vector<Dumbbell>& ds, double sigma) {
  if (!(sigma > 1.0)) throw std::invalid_argument("length_group: sigma > 1");
  const int period = static_cast<int>(std::ceil(std::log2(sigma))) + 1;
  if (ds.empty()) return period;
  const double lmin = min_length(ds);
  for (Dumbbell& d : ds) {
    d.bucket = std::max(0, std::ilogb(d.len / lmin));
    d.group = d.bucket % period;
  }
  return period;
}

EmptyRegionStats empty_region_partition(std::vector<Dumbbell>& ds,
                                        double gamma, const DistFn& dist) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("empty_region_partition: gamma > 0");
  EmptyRegionStats stats;
  if (ds.empty()) return stats;
  const double lmin = min_length(ds);

  std::map<std::pair<int, int>, std::vector<int>> classes;
  for (int i = 0; i < static_cast<int>(ds.size()); ++i)
    classes[{ds[i].group, ds[i].bucket}].push_back(i);

  auto gap = [&](const Dumbbell& x, const Dumbbell& y) {
    double g = kInf;
    for (int hx = 0; hx < 2; ++hx)
      for (int hy = 0; hy < 2; ++hy) {
        int rx = hx ? x.rep_b : x.rep_a;
        int ry = hy ? y.rep_b : y.rep_a;
        double rrx = hx ? x.rb : x.ra;
        double rry = hy ? y.rb : y.ra;
        g = std::min(g, head_gap(dist(rx, ry), rrx, rry));
      }
    return g;
  };

  for (auto& [key, members] : classes) {
    const double class_len = std::ldexp(lmin, key.second);
    const double threshold = 2.0 * gamma * class_len;
    std::vector<std::vector<int>> adj(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        if (gap(ds[members[i]], ds[members[j]]) <= threshold) {
          adj[i].push_back(static_cast<int>(j));
          adj[j].push_back(static_cast<int>(i));
        }
    for (std::size_t i = 0; i < members.size(); ++i) {
      stats.max_conflict_degree =
          std::max(stats.max_conflict_degree, static_cast<int>(adj[i].size()));
      std::vector<bool> used(adj[i].size() + 1, false);
      for (int j : adj[i]) {
        int c = ds[members[j]].color;
        if (c >= 0 && c < static_cast<int>(used.size())) used[c] = true;
      }
      int c = 0;
      while (used[c]) ++c;
      ds[members[i]].color = c;
      stats.max_colors = std::max(stats.max_colors, c + 1);
    }
  }
  return stats;
}

double DumbbellTree::path_length(int p, int q) const {
  int u = leaf_of_vertex[p];
  int v = leaf_of_vertex[q];
  if (u == v) return 0.0;
  int w = lca.lca(u, v);
  return nodes[u].pref + nodes[v].pref - 2.0 * nodes[w].pref;
}

void DumbbellTree::finalize() {
  for (auto& nd : nodes) nd.children.clear();
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].parent >= 0) nodes[nodes[i].parent].children.push_back(i);
  std::vector<int> order{root};
  nodes[root].pref = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : nodes[order[i]].children) {
      nodes[c].pref = nodes[nodes[c].parent].pref + nodes[c].up_len;
      order.push_back(c);
    }
  std::vector<std::vector<int>> children(nodes.size());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    children[i] = nodes[i].children;
  lca.build(children, root);
}

DumbbellTree build_dumbbell_tree(const std::vector<Dumbbell>& all,
                                 const std::vector<int>& subset,
                                 const GeometricGraph& g, const CCTree& t,
                                 double sigma, double gamma_p,
                                 const DistFn& dist) {
  DumbbellTree tree;
  using Kind = DumbbellTreeNode::Kind;

  double max_len = 0.0;
  for (const Dumbbell& d : all) max_len = std::max(max_len, d.len);
  const double d0_len = sigma * std::max(max_len, 1.0);
  const double tl = g.total_edge_length();
  const int rep0 = 0;

  auto add_node = [&tree](Kind kind, int rep) {
    tree.nodes.emplace_back();
    tree.nodes.back().kind = kind;
    tree.nodes.back().rep = rep;
    return static_cast<int>(tree.nodes.size()) - 1;
  };

  // Dummy top dumbbell: a whole-graph head and a placeholder copy.
  const int d0_node = add_node(Kind::kDumbbell, rep0);
  const int head0 = add_node(Kind::kHead, rep0);
  const int head0_copy = add_node(Kind::kHead, rep0);
  tree.nodes[head0].parent = d0_node;
  tree.nodes[head0_copy].parent = d0_node;
  tree.nodes[head0].cct_node = t.root;

  struct Heads {
    int node_a;
    int node_b;
  };
  std::vector<Heads> heads(subset.size());
  std::vector<int> dnode(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const Dumbbell& d = all[subset[i]];
    dnode[i] = add_node(Kind::kDumbbell, std::min(d.rep_a, d.rep_b));
    tree.nodes[dnode[i]].dumbbell = subset[i];
    heads[i].node_a = add_node(Kind::kHead, d.rep_a);
    heads[i].node_b = add_node(Kind::kHead, d.rep_b);
    tree.nodes[heads[i].node_a].parent = dnode[i];
    tree.nodes[heads[i].node_b].parent = dnode[i];
    tree.nodes[heads[i].node_a].cct_node = d.a;
    tree.nodes[heads[i].node_b].cct_node = d.b;
  }

  // Head gap from a head (rep, radius) of the probed dumbbell to each head
  // of candidate k in the subset, or to the dummy head.
  auto gap_to = [&](int rep, double radius, int k, int head_sel) {
    if (k < 0) return head_gap(dist(rep0, rep), tl, radius);
    const Dumbbell& c = all[subset[k]];
    int rc = head_sel ? c.rep_b : c.rep_a;
    double rr = head_sel ? c.rb : c.ra;
    return head_gap(dist(rc, rep), rr, radius);
  };

  for (std::size_t i = 0; i < subset.size(); ++i) {
    const Dumbbell& d = all[subset[i]];
    const double reach = gamma_p * d.len;
    // Unique minimum-length longer dumbbell with a head within reach.
    int best = -2;  // -1 encodes the dummy dumbbell
    double best_len = kInf;
    bool tie = false;
    for (int k = -1; k < static_cast<int>(subset.size()); ++k) {
      double klen = k < 0 ? d0_len : all[subset[k]].len;
      if (!(klen > d.len) || klen > best_len) continue;
      bool in_reach = false;
      for (int hs = 0; hs < (k < 0 ? 1 : 2) && !in_reach; ++hs) {
        in_reach = gap_to(d.rep_a, d.ra, k, hs) <= reach ||
                   gap_to(d.rep_b, d.rb, k, hs) <= reach;
      }
      if (!in_reach) continue;
      if (klen == best_len && k != best) {
        tie = true;
        continue;
      }
      best = k;
      best_len = klen;
      tie = false;
    }
    if (best == -2)
      throw std::logic_error("dumbbell tree: no parent found");
    if (tie)
      throw std::logic_error(
          "dumbbell tree: ambiguous minimum-length parent (numeric tie)");
    int parent_head;
    if (best < 0) {
      parent_head = head0;
    } else {
      // The closer qualifying head; ties go to head a.
      double ga = std::min(gap_to(d.rep_a, d.ra, best, 0),
                           gap_to(d.rep_b, d.rb, best, 0));
      double gb = std::min(gap_to(d.rep_a, d.ra, best, 1),
                           gap_to(d.rep_b, d.rb, best, 1));
      bool a_ok = ga <= reach, b_ok = gb <= reach;
      parent_head = (a_ok && (!b_ok || ga <= gb)) ? heads[best].node_a
                                                  : heads[best].node_b;
    }
    tree.nodes[dnode[i]].parent = parent_head;
  }

  // Leaf parents: walk up the connected tree from each vertex's leaf to
  // the deepest node whose set is a head here; prefer the shortest such
  // dumbbell when several share the head.
  std::map<int, std::pair<double, int>> head_of_cct;  // cct node -> (len, head node)
  head_of_cct[t.root] = {d0_len, head0};
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const Dumbbell& d = all[subset[i]];
    for (auto [cnode, hnode] :
         {std::pair{d.a, heads[i].node_a}, std::pair{d.b, heads[i].node_b}}) {
      auto it = head_of_cct.find(cnode);
      if (it == head_of_cct.end() || d.len < it->second.first)
        head_of_cct[cnode] = {d.len, hnode};
    }
  }
  tree.leaf_of_vertex.assign(g.n(), -1);
  for (int p = 0; p < g.n(); ++p) {
    int b = t.leaf_of_vertex[p];
    while (head_of_cct.find(b) == head_of_cct.end()) b = t.nodes[b].parent;
    int leaf = add_node(Kind::kLeaf, p);
    tree.nodes[leaf].parent = head_of_cct[b].second;
    tree.leaf_of_vertex[p] = leaf;
  }

  tree.root = d0_node;
  for (auto& nd : tree.nodes)
    if (nd.parent >= 0)
      nd.up_len =
          nd.rep == tree.nodes[nd.parent].rep
              ? 0.0
              : dist(nd.rep, tree.nodes[nd.parent].rep);
  tree.finalize();
  return tree;
}

double TreeCover::tree_path(std::size_t tree, int u, int v) const {
  return trees[tree].path_length(u, v);
}

double TreeCover::query(int u, int v) const {
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw std::invalid_argument("ado query: unknown vertex id");
  if (u == v) return 0.0;
  double best = kInf;
  for (const DumbbellTree& t : trees)
    best = std::min(best, t.path_length(u, v));
  return best;
}

TreeCover build_tree_cover(const GeometricGraph& g, double c, double epsilon,
                           const DistFn& dist, TreeCoverBuildInfo* info) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("tree cover: epsilon must be in (0,1)");
  TreeCover cover;
  cover.epsilon = epsilon;
  cover.sigma = 63.0 / epsilon;
  cover.gamma = 15.0 / cover.sigma;
  cover.n = g.n();
  const double sg = cover.sigma, gm = cover.gamma;
  if (!(sg >= 3.0 && sg * gm >= 2.0 * gm + (sg + 3.0) / (sg + 1.0) &&
        15.0 / sg <= gm && 15.0 / sg < sg / (sg + 2.0)))
    throw std::logic_error("tree cover: derived constants violate constraints");

  TreeCoverBuildInfo local;
  TreeCoverBuildInfo& bi = info ? *info : local;
  bi.cct = build_cct(g, c);
  bi.wspd = build_wspd(g, bi.cct, cover.sigma, WspdFlavor::kGraph, dist);
  bi.dumbbells = make_dumbbells(bi.wspd);
  bi.group_count = length_group(bi.dumbbells, cover.sigma);
  bi.empty_region = empty_region_partition(bi.dumbbells, cover.gamma, dist);

  if (bi.dumbbells.empty()) {
    bi.subsets.emplace_back();
    cover.trees.push_back(build_dumbbell_tree(bi.dumbbells, {}, g, bi.cct,
                                              cover.sigma, cover.gamma, dist));
    return cover;
  }

  std::vector<int> colors_in_group(bi.group_count, 0);
  for (const Dumbbell& d : bi.dumbbells)
    colors_in_group[d.group] = std::max(colors_in_group[d.group], d.color + 1);
  for (int grp = 0; grp < bi.group_count; ++grp) {
    for (int color = 0; color < std::max(1, colors_in_group[grp]); ++color) {
      std::vector<int> subset;
      for (int i = 0; i < static_cast<int>(bi.dumbbells.size()); ++i)
        if (bi.dumbbells[i].group == grp && bi.dumbbells[i].color == color)
          subset.push_back(i);
      cover.trees.push_back(build_dumbbell_tree(
          bi.dumbbells, subset, g, bi.cct, cover.sigma, cover.gamma, dist));
      bi.subsets.push_back(std::move(subset));
    }
  }
  return cover;
}

std::string dump_ado(const TreeCover& cover, const SeparatorHierarchy& edo) {
  nlohmann::json j;
  j["format"] = "ado-v1";
  j["epsilon"] = cover.epsilon;
  j["sigma"] = cover.sigma;
  j["gamma"] = cover.gamma;
  j["n"] = cover.n;
  j["edo"] = nlohmann::json::parse(edo.dump());
  nlohmann::json trees = nlohmann::json::array();
  for (const DumbbellTree& t : cover.trees) {
    nlohmann::json tj;
    std::vector<int> kind, rep, parent;
    std::vector<double> up;
    for (const auto& nd : t.nodes) {
      kind.push_back(static_cast<int>(nd.kind));
      rep.push_back(nd.rep);
      parent.push_back(nd.parent);
      up.push_back(nd.up_len);
    }
    tj["kind"] = kind;
    tj["rep"] = rep;
    tj["parent"] = parent;
    tj["up"] = up;
    tj["root"] = t.root;
    tj["leaf"] = t.leaf_of_vertex;
    trees.push_back(std::move(tj));
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

LoadedAdo load_ado(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ado-v1")
    throw std::invalid_argument("ado load: unsupported format tag");
  LoadedAdo out;
  out.cover.epsilon = j.at("epsilon").get<double>();
  out.cover.sigma = j.at("sigma").get<double>();
  out.cover.gamma = j.at("gamma").get<double>();
  out.cover.n = j.at("n").get<int>();
  out.edo = SeparatorHierarchy::load(j.at("edo").dump());
  for (const auto& tj : j.at("trees")) {
    DumbbellTree t;
    auto kind = tj.at("kind").get<std::vector<int>>();
    auto rep = tj.at("rep").get<std::vector<int>>();
    auto parent = tj.at("parent").get<std::vector<int>>();
    auto up = tj.at("up").get<std::vector<double>>();
    t.nodes.resize(kind.size());
    for (std::size_t i = 0; i < kind.size(); ++i) {
      t.nodes[i].kind = static_cast<DumbbellTreeNode::Kind>(kind[i]);
      t.nodes[i].rep = rep[i];
      t.nodes[i].parent = parent[i];
      t.nodes[i].up_len = up[i];
    }
    t.root = tj.at("root").get<int>();
    t.leaf_of_vertex = tj.at("leaf").get<std::vector<int>>();
    t.finalize();
    out.cover.trees.push_back(std::move(t));
  }
  return out;
}

}  // namespace cpack
