#include "cpack/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cpack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int GeometricGraph::add_vertex(Point p) {
  pts.push_back(std::move(p));
  return n() - 1;
}

void GeometricGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n() || v >= n())
    throw std::invalid_argument("add_edge: vertex id out of range");
  if (u == v) throw std::invalid_argument("add_edge: self-loop");
  for (const Edge& e : edges) {
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u))
      throw std::invalid_argument("add_edge: duplicate edge");
  }
  double len = euclidean(pts[u], pts[v]);
  if (!(len > 0.0))
    throw std::invalid_argument("add_edge: zero-length edge (coincident endpoints)");
  edges.push_back(Edge{u, v, len});
}

std::vector<std::vector<std::pair<int, double>>> GeometricGraph::adjacency()
    const {
  std::vector<std::vector<std::pair<int, double>>> adj(n());
  for (const Edge& e : edges) {
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
  }
  return adj;
}

double GeometricGraph::total_edge_length() const {
  double t = 0.0;
  for (const Edge& e : edges) t += e.length;
  return t;
}

std::vector<std::vector<int>> GeometricGraph::components() const {
  auto adj = adjacency();
  std::vector<int> comp(n(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n(); ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      out[id].push_back(x);
      for (auto [y, w] : adj[x]) {
        (void)w;
        if (comp[y] < 0) {
          comp[y] = id;
          stack.push_back(y);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

GeometricGraph GeometricGraph::induced(const std::vector<int>& verts,
                                       std::vector<int>* local_to_global) const {
  std::vector<int> sorted = verts;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> local(n(), -1);
  GeometricGraph sub;
  for (int v : sorted) {
    local[v] = sub.add_vertex(pts[v]);
  }
  for (const Edge& e : edges) {
    if (local[e.u] >= 0 && local[e.v] >= 0)
      sub.edges.push_back(Edge{std::min(local[e.u], local[e.v]),
                               std::max(local[e.u], local[e.v]), e.length});
  }
  if (local_to_global) *local_to_global = std::move(sorted);
  return sub;
}

DijkstraResult dijkstra(const GeometricGraph& g, int source) {
  if (source < 0 || source >= g.n())
    throw std::invalid_argument("dijkstra: source out of range");
  auto adj = g.adjacency();
  DijkstraResult r;
  r.dist.assign(g.n(), kInf);
  r.parent.assign(g.n(), -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  r.dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (d > r.dist[x]) continue;
    for (auto [y, w] : adj[x]) {
      double nd = d + w;
      if (nd < r.dist[y]) {
        r.dist[y] = nd;
        r.parent[y] = x;
        pq.emplace(nd, y);
      }
    }
  }
  return r;
}

DistMatrix all_pairs(const GeometricGraph& g) {
  if (g.n() > 2000)
    throw std::invalid_argument("all_pairs: guarded to n <= 2000");
  DistMatrix m;
  m.n = g.n();
  m.d.assign(static_cast<std::size_t>(g.n()) * g.n(), kInf);
  for (int s = 0; s < g.n(); ++s) {
    auto r = dijkstra(g, s);
    for (int v = 0; v < g.n(); ++v) m.at(s, v) = r.dist[v];
  }
  return m;
}

DistFn dist_fn(const DistMatrix& dm) {
  return [&dm](int u, int v) { return dm(u, v); };
}

DistFn memoize_dist(DistFn fn) {
  auto cache = std::make_shared<std::unordered_map<std::uint64_t, double>>();
  return [cache, fn = std::move(fn)](int u, int v) {
    if (u > v) std::swap(u, v);
    std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) |
                        static_cast<std::uint32_t>(v);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    double d = fn(u, v);
    cache->emplace(key, d);
    return d;
  };
}

namespace {

// Exact length of segment [a,b] inside the ball (center, r).
double clip_to_ball(const Point& a, const Point& b, const Point& center,
                    double r) {
  const std::size_t d = a.size();
  double aa = 0.0, ab = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double da = a[k] - center[k];
    double db = b[k] - a[k];
    aa += da * da;
    ab += da * db;
    bb += db * db;
  }
  if (bb == 0.0) return 0.0;
  // |a + t(b-a) - center|^2 <= r^2  <=>  bb t^2 + 2 ab t + aa - r^2 <= 0
  double disc = ab * ab - bb * (aa - r * r);
  if (disc <= 0.0) return 0.0;
  double sq = std::sqrt(disc);
  double t0 = std::max(0.0, (-ab - sq) / bb);
  double t1 = std::min(1.0, (-ab + sq) / bb);
  if (t0 >= t1) return 0.0;
  return (t1 - t0) * std::sqrt(bb);
}

}  // namespace

double estimate_packedness(const GeometricGraph& g, long sample_budget) {
  if (sample_budget < 1)
    throw std::invalid_argument("estimate_packedness: budget must be >= 1");
  if (g.m() == 0) return 0.0;

  std::vector<Point> centers = g.pts;
  for (const Edge& e : g.edges) {
    Point mid(g.dim());
    for (int k = 0; k < g.dim(); ++k)
      mid[k] = 0.5 * (g.pts[e.u][k] + g.pts[e.v][k]);
    centers.push_back(std::move(mid));
  }

  std::set<double> radii_set;
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v) {
      double d = euclidean(g.pts[u], g.pts[v]);
      if (d > 0.0) radii_set.insert(d);
    }
  for (const Edge& e : g.edges) radii_set.insert(0.5 * e.length);
  std::vector<double> radii(radii_set.begin(), radii_set.end());
  if (radii.empty()) return 0.0;

  const long total = static_cast<long>(centers.size()) *
                     static_cast<long>(radii.size());
  // Deterministic stride subsampling when over budget.
  long stride_c = 1, stride_r = 1;
  if (total > sample_budget) {
    double shrink = std::sqrt(static_cast<double>(total) / sample_budget);
    stride_c = std::max<long>(1, static_cast<long>(shrink));
    stride_r = std::max<long>(1, static_cast<long>(shrink));
  }

  double best = 0.0;
  for (std::size_t ci = 0; ci < centers.size(); ci += stride_c) {
    for (std::size_t ri = 0; ri < radii.size(); ri += stride_r) {
      double r = radii[ri];
      double len = 0.0;
      for (const Edge& e : g.edges)
        len += clip_to_ball(g.pts[e.u], g.pts[e.v], centers[ci], r);
      best = std::max(best, len / r);
    }
  }
  return best;
}

FamilyKind parse_family_kind(const std::string& name) {
  if (name == "path") return FamilyKind::kPath;
  if (name == "grid") return FamilyKind::kGrid;
  if (name == "star") return FamilyKind::kStar;
  if (name == "spiral") return FamilyKind::kSpiral;
  throw std::invalid_argument("unknown family kind: " + name);
}

Family generate_family(FamilyKind kind, int n, std::uint64_t seed) {
  (void)seed;  // families are fully deterministic; seed kept for the CLI surface
  if (n < 2) throw std::invalid_argument("generate_family: n must be >= 2");
  Family f;
  switch (kind) {
    case FamilyKind::kPath: {
      for (int i = 0; i < n; ++i)
        f.graph.add_vertex({static_cast<double>(i), 0.0});
      for (int i = 0; i + 1 < n; ++i) f.graph.add_edge(i, i + 1);
      f.c_bound = 2.0;
      break;
    }
    case FamilyKind::kGrid: {
      int side = std::max(2, static_cast<int>(std::llround(std::sqrt(n))));
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
          f.graph.add_vertex({static_cast<double>(x), static_cast<double>(y)});
      auto id = [side](int x, int y) { return y * side + x; };
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
          if (x + 1 < side) f.graph.add_edge(id(x, y), id(x + 1, y));
          if (y + 1 < side) f.graph.add_edge(id(x, y), id(x, y + 1));
        }
      // Stress family; packedness grows with the side length.
      f.c_bound = 4.0 * side;
      break;
    }
    case FamilyKind::kStar: {
      f.graph.add_vertex({0.0, 0.0});
      for (int j = 0; j < n; ++j) {
        double ang = 2.0 * std::numbers::pi * j / n;
        int tip = f.graph.add_vertex({std::cos(ang), std::sin(ang)});
        f.graph.add_edge(0, tip);
      }
      f.c_bound = std::max(2, n);
      break;
    }
    case FamilyKind::kSpiral: {
      // Archimedean polyline with a fixed number of turns, so the
      // packedness value stays bounded as n grows.
      const double turns = 3.0;
      const double theta_max = 2.0 * std::numbers::pi * turns;
      for (int i = 0; i < n; ++i) {
        double t = theta_max * (i + 1) / n;
        double r = t / theta_max;
        f.graph.add_vertex({r * std::cos(t), r * std::sin(t)});
      }
      for (int i = 0; i + 1 < n; ++i) f.graph.add_edge(i, i + 1);
      f.c_bound = 12.0;
      break;
    }
  }
  return f;
}

GraphParseError::GraphParseError(ParseError e) : err_(std::move(e)) {
  std::ostringstream os;
  os << "line " << err_.line << ": " << err_.message;
  text_ = os.str();
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw GraphParseError(ParseError{line, msg});
}

}  // namespace

GeometricGraph read_graph(std::istream& in) {
  GeometricGraph g;
  int dim = -1, nv = -1, ne = -1;
  int seen_v = 0, seen_e = 0;
  std::string line;
  int lineno = 0;
  std::vector<bool> have;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string tag;
    if (!(is >> tag)) continue;
    if (tag == "d") {
      std::string nk, mk;
      if (!(is >> dim >> nk >> nv >> mk >> ne) || nk != "n" || mk != "m")
        fail(lineno, "expected header 'd <dim> n <count> m <count>'");
      if (dim < 1) fail(lineno, "dimension must be >= 1");
      if (nv < 1) fail(lineno, "vertex count must be >= 1");
      if (ne < 0) fail(lineno, "edge count must be >= 0");
      g.pts.assign(nv, Point(dim, 0.0));
      have.assign(nv, false);
    } else if (tag == "v") {
      if (dim < 0) fail(lineno, "vertex line before header");
      int id;
      if (!(is >> id)) fail(lineno, "expected 'v <id> <coords...>'");
      if (id < 0 || id >= nv) fail(lineno, "vertex id out of range");
      if (have[id]) fail(lineno, "duplicate vertex id");
      Point p(dim);
      for (int k = 0; k < dim; ++k) {
        if (!(is >> p[k])) fail(lineno, "missing coordinate");
        if (!std::isfinite(p[k])) fail(lineno, "non-finite coordinate");
      }
      double extra;
      if (is >> extra) fail(lineno, "too many coordinates");
      g.pts[id] = std::move(p);
      have[id] = true;
      ++seen_v;
    } else if (tag == "e") {
      if (dim < 0) fail(lineno, "edge line before header");
      if (seen_v != nv) fail(lineno, "edge lines must follow all vertex lines");
      int u, v;
      if (!(is >> u >> v)) fail(lineno, "expected 'e <u> <v>'");
      try {
        g.add_edge(u, v);
      } catch (const std::invalid_argument& ex) {
        fail(lineno, ex.what());
      }
      ++seen_e;
    } else {
      fail(lineno, "unknown record '" + tag + "'");
    }
  }
  if (dim < 0) fail(lineno, "missing header");
  if (seen_v != nv) fail(lineno, "vertex count mismatch");
  if (seen_e != ne) fail(lineno, "edge count mismatch");
  return g;
}

GeometricGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphParseError(ParseError{0, "cannot open " + path});
  return read_graph(in);
}

void write_graph(std::ostream& out, const GeometricGraph& g) {
  out << "d " << g.dim() << " n " << g.n() << " m " << g.m() << "\n";
  out.precision(17);
  for (int i = 0; i < g.n(); ++i) {
    out << "v " << i;
    for (double x : g.pts[i]) out << ' ' << x;
    out << "\n";
  }
  for (const Edge& e : g.edges) out << "e " << e.u << ' ' << e.v << "\n";
}

}  // namespace cpack
