#include "cpack/cct.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cpack {

RelLengthIndex RelLengthIndex::build(const GeometricGraph& g) {
  RelLengthIndex idx;
  idx.pts_ = g.pts;
  idx.edges_ = g.edges;

  // Deterministic accumulation order for the deposit totals.
  std::map<std::pair<int, std::vector<std::int64_t>>, double> amounts;
  std::set<int> levels;
  for (int i = 0; i < g.m(); ++i) {
    const Edge& e = g.edges[i];
    const Point& a = g.pts[e.u];
    const Point& b = g.pts[e.v];
    const int lvl = canonical_level_of_edge(e.length);
    levels.insert(lvl);
    // The edge spans at most a few cells per axis at its own level.
    const std::int64_t maxc = (std::int64_t{1} << lvl) - 1;
    std::vector<std::int64_t> lo(g.dim()), hi(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
      double mn = std::min(a[k], b[k]);
      double mx = std::max(a[k], b[k]);
      lo[k] = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(std::floor(std::ldexp(mn, lvl))), 0, maxc);
      hi[k] = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(std::floor(std::ldexp(mx, lvl))), 0, maxc);
    }
    std::vector<std::int64_t> cell = lo;
    while (true) {
      Cube s{lvl, cell};
      double c = clip_length(a, b, s);
      if (c > 0.0) {
        amounts[{lvl, cell}] += c;
        idx.deposit_edges_[CubeKey{lvl, cell}].push_back(i);
      }
      int k = 0;
      while (k < g.dim() && cell[k] == hi[k]) cell[k] = lo[k], ++k;
      if (k == g.dim()) break;
      ++cell[k];
    }
  }
  idx.deposit_levels_.assign(levels.begin(), levels.end());

  for (const auto& [key, amount] : amounts) {
    auto [lvl, cell] = key;
    std::vector<std::int64_t> c = cell;
    for (int L = lvl; L >= 0; --L) {
      idx.subtree_[CubeKey{L, c}] += amount;
      for (auto& x : c) x >>= 1;
    }
  }
  return idx;
}

double RelLengthIndex::query(const Cube& s) const {
  double total = 0.0;
  if (auto it = subtree_.find(key_of(s)); it != subtree_.end())
    total += it->second;
  const double relevance = 2.0 * s.diam();
  for (int lvl : deposit_levels_) {
    if (lvl >= s.level) break;
    std::vector<std::int64_t> anc = s.cell;
    for (auto& x : anc) x >>= (s.level - lvl);
    auto it = deposit_edges_.find(CubeKey{lvl, anc});
    if (it == deposit_edges_.end()) continue;
    for (int ei : it->second) {
      const Edge& e = edges_[ei];
      if (e.length <= relevance)
        total += clip_length(pts_[e.u], pts_[e.v], s);
    }
  }
  return total;
}

double RelLengthIndex::dub_of_cell(const Cube& s) const {
  double total = query(s);
  for (const Cube& nb : canonical_neighbors(s)) total += query(nb);
  return total;
}

std::vector<std::vector<int>> CCTree::vertex_sets() const {
  std::vector<std::vector<int>> sets(nodes.size());
  std::vector<int> order;
  order.reserve(nodes.size());
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    order.push_back(x);
    for (int c : nodes[x].children) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    if (nodes[x].is_leaf()) {
      sets[x] = {nodes[x].leaf_vertex};
    } else {
      for (int c : nodes[x].children)
        sets[x].insert(sets[x].end(), sets[c].begin(), sets[c].end());
      std::sort(sets[x].begin(), sets[x].end());
    }
  }
  return sets;
}

namespace {

struct SweepCell {
  Cube cube;
  double dub_norm;
};

}  // namespace

CCTree build_cct(const GeometricGraph& g, double c, CctBuildStats* stats,
                 const CctOptions& opts) {
  if (!g.connected())
    throw std::invalid_argument("build_cct: graph must be connected");
  CctBuildStats local;
  CctBuildStats& st = stats ? *stats : local;

  if (opts.check_c_budget > 0) {
    double chat = estimate_packedness(g, opts.check_c_budget);
    if (c < chat) {
      std::ostringstream os;
      os << "declared c=" << c
         << " is below the estimated packedness lower bound " << chat;
      st.warnings.push_back(os.str());
    }
  }

  auto norm = normalize_to_unit_cube(g.pts);
  const double scale = norm.transform.scale;
  GeometricGraph gn;
  gn.pts = norm.points;
  for (const Edge& e : g.edges)
    gn.edges.push_back(Edge{e.u, e.v, euclidean(gn.pts[e.u], gn.pts[e.v])});

  auto q = build_compressed_quadtree(gn.pts);
  auto rel = RelLengthIndex::build(gn);

  CCTree t;
  t.scale = scale;
  t.leaf_of_vertex.resize(g.n());
  for (int v = 0; v < g.n(); ++v) {
    t.nodes.push_back(
        CctNode{q.nodes[q.leaf_of_point[v]].cube, v, 0.0, -1, {}, v});
    t.leaf_of_vertex[v] = v;
  }

  // Working contracted graph over surviving representative ids.
  std::vector<std::map<int, double>> adj(g.n());
  for (const Edge& e : gn.edges) {
    auto put = [&](int a, int b, double len) {
      auto [it, fresh] = adj[a].try_emplace(b, len);
      if (!fresh) it->second = std::min(it->second, len);
    };
    put(e.u, e.v, e.length);
    put(e.v, e.u, e.length);
  }
  std::vector<bool> alive(g.n(), true);
  std::vector<int> top = t.leaf_of_vertex;

  // Internal quadtree cells, deepest level first, lexicographic within.
  std::map<int, std::vector<SweepCell>, std::greater<>> by_level;
  for (const auto& nd : q.nodes) {
    if (nd.is_leaf()) continue;
    by_level[nd.cube.level].push_back(SweepCell{nd.cube, 0.0});
  }
  for (auto& [lvl, cells] : by_level) {
    (void)lvl;
    std::sort(cells.begin(), cells.end(),
              [](const SweepCell& a, const SweepCell& b) {
                return a.cube.cell < b.cube.cell;
              });
    for (auto& cell : cells) cell.dub_norm = rel.dub_of_cell(cell.cube);
  }

  auto snapshot = [&](int level) {
    HSnapshot snap;
    snap.level = level;
    for (int v = 0; v < g.n(); ++v)
      if (alive[v]) snap.vertices.push_back(v);
    for (int v : snap.vertices)
      for (auto [w, len] : adj[v])
        if (v < w) snap.edges.push_back(Edge{v, w, len / scale});
    st.snapshots.push_back(std::move(snap));
  };

  for (const auto& [level, cells] : by_level) {
    for (const SweepCell& sc : cells) {
      const Cube& cube = sc.cube;
      std::vector<int> in_cell;
      for (int v = 0; v < g.n(); ++v)
        if (alive[v] && cube.contains(gn.pts[v])) in_cell.push_back(v);

      std::set<int> done;
      int reps = 0;
      for (int seed : in_cell) {
        if (done.count(seed)) continue;
        ++reps;
        // Flood fill inside s+; only vertices inside the cell itself merge.
        std::vector<int> comp_in;
        {
          std::set<int> seen{seed};
          std::vector<int> stack{seed};
          while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (cube.contains(gn.pts[x])) comp_in.push_back(x);
            for (auto [y, len] : adj[x]) {
              (void)len;
              if (!seen.count(y) && cube.in_doubled(gn.pts[y])) {
                seen.insert(y);
                stack.push_back(y);
              }
            }
          }
        }
        std::sort(comp_in.begin(), comp_in.end());
        for (int x : comp_in) done.insert(x);
        if (comp_in.size() < 2) continue;  // no chains of singleton nodes

        const int p = comp_in.front();
        CctNode node;
        node.cube = cube;
        node.rep = p;
        node.dub = sc.dub_norm / scale;
        for (int x : comp_in) node.children.push_back(top[x]);
        // Contract comp_in into p: re-point cut edges to p with the
        // Euclidean length to p, drop internal and parallel edges.
        for (int x : comp_in) {
          if (x == p) continue;
          for (auto [y, len] : adj[x]) {
            (void)len;
            adj[y].erase(x);
            if (y == p ||
                std::binary_search(comp_in.begin(), comp_in.end(), y))
              continue;
            double nl = euclidean(gn.pts[p], gn.pts[y]);
            auto [it, fresh] = adj[p].try_emplace(y, nl);
            if (!fresh) it->second = std::min(it->second, nl);
            auto [it2, fresh2] = adj[y].try_emplace(p, nl);
            if (!fresh2) it2->second = std::min(it2->second, nl);
          }
          adj[x].clear();
          alive[x] = false;
        }
        int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back(std::move(node));
        for (int child : t.nodes[id].children) t.nodes[child].parent = id;
        top[p] = id;
      }
      st.reps_per_cell.emplace_back(cube, reps);
      st.max_reps_per_cell = std::max(st.max_reps_per_cell, reps);
      const double cap = 4.0 * c * std::sqrt(static_cast<double>(g.dim()));
      if (reps > cap) {
        std::ostringstream os;
        os << "cell at level " << cube.level << " produced " << reps
           << " representatives, above the expected 4*c*sqrt(d) = " << cap;
        st.warnings.push_back(os.str());
      }
    }
    if (opts.record_snapshots) snapshot(level);
  }

  int survivor = -1;
  for (int v = 0; v < g.n(); ++v) {
    if (!alive[v]) continue;
    if (survivor >= 0)
      throw std::logic_error(
          "build_cct: multiple survivors on connected input");
    survivor = v;
  }
  t.root = top[survivor];

  // The root must carry the unit cube even when every merge happened in a
  // deeper cell (possible for inputs that do not span the unit cube).
  Cube unit{0, std::vector<std::int64_t>(g.dim(), 0)};
  if (t.nodes[t.root].cube != unit && !t.nodes[t.root].is_leaf()) {
    CctNode wrap;
    wrap.cube = unit;
    wrap.rep = t.nodes[t.root].rep;
    wrap.dub = rel.dub_of_cell(unit) / scale;
    wrap.children = {t.root};
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back(std::move(wrap));
    t.nodes[t.root].parent = id;
    t.root = id;
  }
  return t;
}

CctReport verify_cct(const GeometricGraph& g, const DistMatrix& dm,
                     const CCTree& t, double c) {
  CctReport rep;
  auto sets = t.vertex_sets();
  auto complain = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  std::vector<bool> seen(g.n(), false);
  for (int v = 0; v < g.n(); ++v) {
    int leaf = t.leaf_of_vertex[v];
    if (leaf < 0 || t.nodes[leaf].leaf_vertex != v)
      complain("leaf mapping broken for vertex " + std::to_string(v));
    else
      seen[v] = true;
  }
  for (int v = 0; v < g.n(); ++v)
    if (!seen[v]) complain("vertex without leaf: " + std::to_string(v));

  for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i) {
    const auto& set = sets[i];
    const double diam_cap = c * t.cell_diam(i);
    double max_pair = 0.0;
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = a + 1; b < set.size(); ++b)
        max_pair = std::max(max_pair, dm(set[a], set[b]));
    if (max_pair > diam_cap * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "node " << i << ": pairwise distance " << max_pair
         << " exceeds c*diam = " << diam_cap;
      complain(os.str());
    }
    if (max_pair > t.nodes[i].dub * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "node " << i << ": dub " << t.nodes[i].dub
         << " is below the set diameter " << max_pair;
      complain(os.str());
    }
  }
  return rep;
}

}  // namespace cpack
