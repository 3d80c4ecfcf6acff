#include "cpack/separator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cpack {

double doubling_lambda(int dim) {
  if (dim == 2) return 7.0;
  return std::ldexp(1.0, static_cast<int>(std::ceil(1.6 * dim)));
}

KEnclosingBall k_enclosing_ball(const std::vector<Point>& pts, int k) {
  const int n = static_cast<int>(pts.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("k_enclosing_ball: k out of range");
  KEnclosingBall best;
  std::vector<double> d(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) d[q] = euclidean(pts[p], pts[q]);
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    double r = d[k - 1];
    if (best.center_id < 0 || r < best.radius) {
      best.center_id = p;
      best.radius = r;
    }
  }
  return best;
}

RingSeparator ring_separator(const GeometricGraph& g, double beta) {
  const int n = g.n();
  if (!(beta > 0.0 && beta <= 0.5))
    throw std::invalid_argument("ring_separator: beta must be in (0, 1/2]");
  if (n < 2) throw std::invalid_argument("ring_separator: need n >= 2");

  std::vector<double> betas;
  for (int halvings = 0;; ++halvings) {
    double b = std::ldexp(beta, -halvings);
    if (b < 1.0 / n) break;
    betas.push_back(b);
  }
  if (betas.empty() || betas.back() > 1.0 / n) betas.push_back(1.0 / n);

  int last_k = -1;
  for (double b : betas) {
    int k = static_cast<int>(std::ceil(b * n));
    if (k == last_k) continue;
    last_k = k;
    auto ball = k_enclosing_ball(g.pts, k);
    RingSeparator ring;
    ring.center_id = ball.center_id;
    ring.center = g.pts[ball.center_id];
    ring.radius = ball.radius;
    ring.beta_achieved = b;
    for (int v = 0; v < n; ++v) {
      double dv = euclidean(g.pts[v], ring.center);
      if (dv <= ring.radius)
        ring.inner_ids.push_back(v);
      else if (dv <= 2.0 * ring.radius)
        ring.middle_ids.push_back(v);
      else
        ring.outer_ids.push_back(v);
    }
    if (2 * (n - static_cast<int>(ring.outer_ids.size())) <= n) return ring;
  }
  throw std::runtime_error(
      "ring_separator: no beta >= 1/n bounds the doubled ball; "
      "metric anomaly (mass of coincident points?)");
}

namespace {

struct FlowNetwork {
  struct Arc {
    int to;
    long cap;
  };
  std::vector<Arc> arcs;  // arc i and i^1 are a residual pair
  std::vector<std::vector<int>> out;

  explicit FlowNetwork(int nodes) : out(nodes) {}

  void add(int from, int to, long cap) {
    out[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, cap});
    out[to].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0});
  }

  // Shortest augmenting paths; arc order is fixed, so the run (and the
  // resulting cut) is deterministic.
  long max_flow(int s, int t) {
    long total = 0;
    std::vector<int> pred_arc(out.size());
    while (true) {
      std::fill(pred_arc.begin(), pred_arc.end(), -1);
      std::deque<int> queue{s};
      pred_arc[s] = -2;
      while (!queue.empty() && pred_arc[t] == -1) {
        int x = queue.front();
        queue.pop_front();
        for (int ai : out[x]) {
          if (arcs[ai].cap > 0 && pred_arc[arcs[ai].to] == -1) {
            pred_arc[arcs[ai].to] = ai;
            queue.push_back(arcs[ai].to);
          }
        }
      }
      if (pred_arc[t] == -1) return total;
      long aug = std::numeric_limits<long>::max();
      for (int x = t; x != s;) {
        int ai = pred_arc[x];
        aug = std::min(aug, arcs[ai].cap);
        x = arcs[ai ^ 1].to;
      }
      for (int x = t; x != s;) {
        int ai = pred_arc[x];
        arcs[ai].cap -= aug;
        arcs[ai ^ 1].cap += aug;
        x = arcs[ai ^ 1].to;
      }
      total += aug;
    }
  }

  std::vector<bool> source_side(int s) const {
    std::vector<bool> seen(out.size(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int ai : out[x]) {
        if (arcs[ai].cap > 0 && !seen[arcs[ai].to]) {
          seen[arcs[ai].to] = true;
          queue.push_back(arcs[ai].to);
        }
      }
    }
    return seen;
  }
};

}  // namespace

SeparatorResult min_cut_separator(const GeometricGraph& g,
                                  const RingSeparator& ring, double c) {
  if (ring.inner_ids.empty() || ring.outer_ids.empty())
    throw std::invalid_argument("min_cut_separator: empty ring side");
  const int n = g.n();
  const int src = n, snk = n + 1;
  const long inf = static_cast<long>(n) * std::max(1, g.m()) + 1;

  FlowNetwork net(n + 2);
  for (const Edge& e : g.edges) {
    net.add(e.u, e.v, 1);
    net.add(e.v, e.u, 1);
  }
  for (int v : ring.inner_ids) net.add(src, v, inf);
  for (int v : ring.outer_ids) net.add(v, snk, inf);

  SeparatorResult res;
  res.beta_achieved = ring.beta_achieved;
  res.flow = net.max_flow(src, snk);
  res.c_exceeded = res.flow > 2.0 * c;

  auto side = net.source_side(src);
  std::set<int> cset;
  for (const Edge& e : g.edges) {
    if (side[e.u] != side[e.v]) {
      res.cut_edges.emplace_back(e.u, e.v);
      cset.insert(side[e.u] ? e.v : e.u);  // sink-side endpoint
    }
  }
  res.C.assign(cset.begin(), cset.end());
  for (int v = 0; v < n; ++v) {
    if (cset.count(v)) continue;
    (side[v] ? res.A : res.B).push_back(v);
  }
  return res;
}

SeparatorResult build_separator(const GeometricGraph& g, double c,
                                double beta) {
  if (g.n() < 2) throw std::invalid_argument("build_separator: need n >= 2");
  if (!g.connected())
    throw std::invalid_argument("build_separator: graph must be connected");
  return min_cut_separator(g, ring_separator(g, beta), c);
}

SeparatorReport verify_separator(const GeometricGraph& g,
                                 const SeparatorResult& r) {
  SeparatorReport rep;
  auto complain = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };

  std::vector<int> role(g.n(), -1);  // 0 = A, 1 = B, 2 = C
  auto mark = [&](const std::vector<int>& ids, int what) {
    for (int v : ids) {
      if (v < 0 || v >= g.n() || role[v] != -1)
        complain("vertex " + std::to_string(v) +
                 " missing or assigned to several of A/B/C");
      else
        role[v] = what;
    }
  };
  mark(r.A, 0);
  mark(r.B, 1);
  mark(r.C, 2);
  for (int v = 0; v < g.n(); ++v)
    if (role[v] == -1) complain("vertex " + std::to_string(v) + " unassigned");

  for (const Edge& e : g.edges) {
    if ((role[e.u] == 0 && role[e.v] == 1) ||
        (role[e.u] == 1 && role[e.v] == 0)) {
      std::ostringstream os;
      os << "edge (" << e.u << "," << e.v << ") joins A and B";
      complain(os.str());
    }
  }

  const double n = g.n();
  const double cs = static_cast<double>(r.C.size());
  if (static_cast<double>(r.A.size()) + cs + 1e-9 <
      std::ceil(r.beta_achieved * n)) {
    std::ostringstream os;
    os << "|A| = " << r.A.size()
       << " below beta*n - |C| = " << std::ceil(r.beta_achieved * n) - cs;
    complain(os.str());
  }
  if (static_cast<double>(r.B.size()) + cs + 1e-9 < n / 2.0) {
    std::ostringstream os;
    os << "|B| = " << r.B.size() << " below n/2 - |C| = " << n / 2.0 - cs;
    complain(os.str());
  }
  return rep;
}

}  // namespace cpack
