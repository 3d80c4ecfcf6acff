#include "cpack/wspd.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cpack {

namespace {

class Extractor {
 public:
  Extractor(const GeometricGraph& g, const CCTree& t, double sigma,
            WspdFlavor flavor, const DistFn& dist)
      : g_(g), t_(t), sigma_(sigma), flavor_(flavor), dist_(dist) {}

  Wspd run() {
    Wspd w;
    w.sigma = sigma_;
    w.flavor = flavor_;
    rec(t_.root, t_.root);
    w.pairs = std::move(pairs_);
    return w;
  }

 private:
  double rep_dist(int u, int v) const {
    int ru = t_.nodes[u].rep, rv = t_.nodes[v].rep;
    if (flavor_ == WspdFlavor::kEuclidean)
      return euclidean(g_.pts[ru], g_.pts[rv]);
    return dist_(ru, rv);
  }

  bool separated(int u, int v, double d) const {
    double da = t_.nodes[u].dub, db = t_.nodes[v].dub;
    return sigma_ * std::max(da, db) <= d - da - db;
  }

  // True when u is the node to split: larger dub, then larger cell side
  // (smaller level), then smaller rep id.
  bool split_first(int u, int v) const {
    const CctNode& a = t_.nodes[u];
    const CctNode& b = t_.nodes[v];
    if (a.dub != b.dub) return a.dub > b.dub;
    if (a.cube.level != b.cube.level) return a.cube.level < b.cube.level;
    return a.rep < b.rep;
  }

  void rec(int u, int v) {
    if (u == v) {
      const auto& ch = t_.nodes[u].children;
      if (ch.empty()) return;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        rec(ch[i], ch[i]);
        for (std::size_t j = i + 1; j < ch.size(); ++j) rec(ch[i], ch[j]);
      }
      return;
    }
    double d = rep_dist(u, v);
    if (separated(u, v, d)) {
      WspdPair p;
      p.a = u;
      p.b = v;
      p.rep_a = t_.nodes[u].rep;
      p.rep_b = t_.nodes[v].rep;
      p.dub_a = t_.nodes[u].dub;
      p.dub_b = t_.nodes[v].dub;
      p.dist_lower = d;
      if (p.rep_a > p.rep_b) {
        std::swap(p.a, p.b);
        std::swap(p.rep_a, p.rep_b);
        std::swap(p.dub_a, p.dub_b);
      }
      pairs_.push_back(p);
      return;
    }
    int s = split_first(u, v) ? u : v;
    int o = s == u ? v : u;
    if (t_.nodes[s].children.empty())
      throw std::logic_error("wspd: tried to split a leaf");
    for (int c : t_.nodes[s].children) rec(c, o);
  }

  const GeometricGraph& g_;
  const CCTree& t_;
  double sigma_;
  WspdFlavor flavor_;
  const DistFn& dist_;
  std::vector<WspdPair> pairs_;
};

}  // namespace

Wspd build_wspd(const GeometricGraph& g, const CCTree& t, double sigma,
                WspdFlavor flavor, const DistFn& dist) {
  if (!(sigma > 1.0)) throw std::invalid_argument("wspd: sigma must be > 1");
  if (flavor == WspdFlavor::kGraph && !dist)
    throw std::invalid_argument("wspd: graph flavor needs a distance oracle");
  return Extractor(g, t, sigma, flavor, dist).run();
}

WspdReport verify_wspd(const Wspd& w, const GeometricGraph& g, const CCTree& t,
                       const DistMatrix& dm, int max_n) {
  const int n = g.n();
  if (n > max_n)
    throw std::invalid_argument("verify_wspd: exhaustive check guarded to n <= " +
                                std::to_string(max_n));
  WspdReport rep;
  auto complain = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  auto sets = t.vertex_sets();
  std::vector<int> count(static_cast<std::size_t>(n) * n, 0);
  for (const WspdPair& p : w.pairs) {
    for (int x : sets[p.a])
      for (int y : sets[p.b]) {
        if (x == y) {
          complain("pair with overlapping sides at vertex " +
                   std::to_string(x));
          continue;
        }
        int lo = std::min(x, y), hi = std::max(x, y);
        ++count[static_cast<std::size_t>(lo) * n + hi];
      }
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      int c = count[static_cast<std::size_t>(x) * n + y];
      rep.covered_pairs += c > 0;
      if (c == 0) {
        std::ostringstream os;
        os << "pair (" << x << "," << y << ") uncovered";
        complain(os.str());
      } else if (c > 1) {
        std::ostringstream os;
        os << "pair (" << x << "," << y << ") covered " << c << " times";
        complain(os.str());
      }
    }

  // Separation re-check with true diameters (stronger than the dub-based
  // construction test, since dub upper-bounds the diameter).
  auto diam = [&](const std::vector<int>& set) {
    double d = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j)
        d = std::max(d, dm(set[i], set[j]));
    return d;
  };
  for (std::size_t i = 0; i < w.pairs.size(); ++i) {
    const WspdPair& p = w.pairs[i];
    double da = diam(sets[p.a]);
    double db = diam(sets[p.b]);
    double d = dm(p.rep_a, p.rep_b);
    if (w.sigma * std::max(da, db) > (d - da - db) * (1.0 + 1e-9) + 1e-12) {
      std::ostringstream os;
      os << "pair " << i << " (reps " << p.rep_a << "," << p.rep_b
         << ") fails sigma-separation with true diameters " << da << "," << db
         << " and distance " << d;
      complain(os.str());
    }
  }
  return rep;
}

}  // namespace cpack
