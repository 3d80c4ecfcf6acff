// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include "cpack/cli.hpp"
#include "cpack/edo.hpp"
#include "cpack/separator.hpp"
#include "cpack/treecover.hpp"
#include "cpack/wspd.hpp"
#include "oracles.hpp"

using namespace cpack;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct FamilySpec {
  FamilyKind kind;
  int n;
  const char* label;
};

// ---- criterion 1: exact-oracle answers equal the distance matrix ------

void criterion_1() {
  auto t0 = Clock::now();
  std::vector<FamilySpec> specs = {
      {FamilyKind::kPath, 100, "path-100"},   {FamilyKind::kPath, 300, "path-300"},
      {FamilyKind::kGrid, 36, "grid-6x6"},    {FamilyKind::kGrid, 81, "grid-9x9"},
      {FamilyKind::kGrid, 144, "grid-12x12"}, {FamilyKind::kStar, 30, "star-30"},
      {FamilyKind::kSpiral, 150, "spiral-150"},
      {FamilyKind::kSpiral, 300, "spiral-300"}};
  long bad = 0, total = 0;
  for (const auto& spec : specs) {
    auto fam = generate_family(spec.kind, spec.n, 0);
    auto dm = all_pairs(fam.graph);
    auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
    for (int u = 0; u < fam.graph.n(); ++u)
      for (int v = 0; v < fam.graph.n(); ++v) {
        ++total;
        double got = h.query(u, v);
        double want = dm(u, v);
        if (std::abs(got - want) > 1e-9 * want) ++bad;
      }
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << total << " queries, " << bad << " mismatches, "
     << static_cast<int>(secs) << "s";
  report(1, "exact oracle equals Dijkstra matrix on all families",
         bad == 0 && secs < 60.0, os.str());
}

// ---- criterion 2: decomposition coverage and true separation ----------

void criterion_2() {
  std::vector<FamilySpec> specs = {{FamilyKind::kPath, 120, "path-120"},
                                   {FamilyKind::kGrid, 100, "grid-10x10"},
                                   {FamilyKind::kStar, 20, "star-20"},
                                   {FamilyKind::kSpiral, 120, "spiral-120"}};
  long violations = 0;
  for (const auto& spec : specs) {
    auto fam = generate_family(spec.kind, spec.n, 0);
    auto dm = all_pairs(fam.graph);
    auto t = build_cct(fam.graph, fam.c_bound);
    for (double sigma : {2.0, 4.0, 8.0}) {
      auto w = build_wspd(fam.graph, t, sigma, WspdFlavor::kGraph, dist_fn(dm));
      auto rep = verify_wspd(w, fam.graph, t, dm);
      violations += rep.violations.size();
      if (!rep.ok)
        for (const auto& v : rep.violations) std::fprintf(stderr, "  %s\n", v.c_str());
    }
  }
  std::ostringstream os;
  os << violations << " violations across 4 families x 3 sigmas";
  report(2, "decomposition coverage exact, sigma-separation with true diameters",
         violations == 0, os.str());
}

// ---- criterion 3: linear pair count on the path family ----------------

void criterion_3() {
  double lo = 1e18, hi = 0.0;
  std::ostringstream os;
  for (int n : {64, 128, 256, 512}) {
    auto fam = generate_family(FamilyKind::kPath, n, 0);
    auto t = build_cct(fam.graph, fam.c_bound);
    auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
    auto w = build_wspd(fam.graph, t, 4.0, WspdFlavor::kGraph, dist_fn(h));
    double per_n = static_cast<double>(w.pairs.size()) / n;
    lo = std::min(lo, per_n);
    hi = std::max(hi, per_n);
    os << "n=" << n << ":" << w.pairs.size() << " ";
  }
  os << "pairs/n in [" << lo << "," << hi << "]";
  report(3, "pair count per vertex varies by < 2x on the path sweep",
         hi < 2.0 * lo, os.str());
}

// ---- criterion 4: separator guarantees --------------------------------

void criterion_4() {
  bool ok = true;
  std::ostringstream os;

  // (a), (c), (d) on the known-c families.
  std::vector<FamilySpec> specs = {{FamilyKind::kPath, 96, "path"},
                                   {FamilyKind::kStar, 12, "star"},
                                   {FamilyKind::kSpiral, 120, "spiral"},
                                   {FamilyKind::kGrid, 100, "grid"}};
  for (const auto& spec : specs) {
    auto fam = generate_family(spec.kind, spec.n, 0);
    auto res = build_separator(fam.graph, fam.c_bound);
    std::vector<int> role(fam.graph.n(), -1);
    for (int v : res.A) role[v] = 0;
    for (int v : res.B) role[v] = 1;
    long ab_edges = 0;
    for (const auto& e : fam.graph.edges)
      ab_edges += (role[e.u] == 0 && role[e.v] == 1) ||
                  (role[e.u] == 1 && role[e.v] == 0);
    double chat = std::max(fam.c_bound, 0.0);
    bool size_ok = res.C.size() <= 2.0 * chat + 1e-9;
    double balance = std::min(res.A.size(), res.B.size());
    bool balance_ok = balance >= res.beta_achieved * fam.graph.n() -
                                     static_cast<double>(res.C.size()) - 1e-9;
    if (ab_edges || !size_ok || !balance_ok) {
      ok = false;
      os << spec.label << "(ab=" << ab_edges << ",|C|=" << res.C.size()
         << ",bal=" << balance << ") ";
    }
  }

  // (b) flow equals the exhaustive minimum cut for n <= 14.
  long mismatches = 0;
  for (std::uint64_t seed : {3ULL, 8ULL, 17ULL, 29ULL, 42ULL}) {
    for (int n : {8, 11, 14}) {
      auto g = oracles::random_connected_graph(n, 0.3, seed);
      auto ring = ring_separator(g, 0.25);
      auto res = min_cut_separator(g, ring, 1000.0);
      long brute =
          oracles::brute_min_edge_cut(g, ring.inner_ids, ring.outer_ids);
      mismatches += res.flow != brute;
    }
  }
  if (mismatches) {
    ok = false;
    os << "flow/brute-cut mismatches=" << mismatches;
  }
  if (ok) os << "all families + 15 exhaustive cuts clean";
  report(4, "separator: no A-B edge, exact min cut, size and balance bounds",
         ok, os.str());
}

// ---- criterion 5: connected-tree validity ------------------------------

void criterion_5() {
  std::vector<FamilySpec> specs = {{FamilyKind::kPath, 120, "path-120"},
                                   {FamilyKind::kGrid, 100, "grid-10x10"},
                                   {FamilyKind::kStar, 24, "star-24"},
                                   {FamilyKind::kSpiral, 150, "spiral-150"}};
  long violations = 0;
  for (const auto& spec : specs) {
    auto fam = generate_family(spec.kind, spec.n, 0);
    auto dm = all_pairs(fam.graph);
    auto t = build_cct(fam.graph, fam.c_bound);
    auto rep = verify_cct(fam.graph, dm, t, fam.c_bound);
    violations += rep.violations.size();
    if (!rep.ok)
      for (const auto& v : rep.violations) std::fprintf(stderr, "  %s\n", v.c_str());
  }
  std::ostringstream os;
  os << violations << " violations";
  report(5, "pairwise distances within c*diam and dub above set diameters",
         violations == 0, os.str());
}

// ---- criterion 6: tree-cover distortion --------------------------------

void criterion_6() {
  auto t0 = Clock::now();
  std::vector<FamilySpec> specs = {{FamilyKind::kPath, 100, "path-100"},
                                   {FamilyKind::kGrid, 49, "grid-7x7"},
                                   {FamilyKind::kStar, 16, "star-16"},
                                   {FamilyKind::kSpiral, 80, "spiral-80"}};
  long bad = 0, total = 0;
  for (double eps : {0.5, 0.9}) {
    for (const auto& spec : specs) {
      auto fam = generate_family(spec.kind, spec.n, 0);
      auto dm = all_pairs(fam.graph);
      auto cover = build_tree_cover(fam.graph, fam.c_bound, eps, dist_fn(dm));
      for (int u = 0; u < fam.graph.n(); ++u)
        for (int v = u + 1; v < fam.graph.n(); ++v) {
          ++total;
          double want = dm(u, v);
          double got = cover.query(u, v);
          if (!(got >= want * (1 - 1e-9) && got <= (1 + eps) * want * (1 + 1e-9)))
            ++bad;
        }
      // Per-tree lower bound: every tree path is at least the distance.
      for (std::size_t ti = 0; ti < cover.trees.size(); ++ti)
        for (int u = 0; u < fam.graph.n(); ++u)
          for (int v = u + 1; v < fam.graph.n(); ++v)
            if (cover.tree_path(ti, u, v) < dm(u, v) * (1 - 1e-9)) ++bad;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << total << " pairs, " << bad << " out of band, " << static_cast<int>(secs)
     << "s";
  report(6, "tree-cover answers within [d_G, (1+eps) d_G], trees never short",
         bad == 0 && secs < 120.0, os.str());
}

// ---- criterion 7: tree count across the path sweep ---------------------

void criterion_7() {
  std::vector<std::size_t> counts;
  std::ostringstream os;
  for (int n : {64, 128, 256}) {
    auto fam = generate_family(FamilyKind::kPath, n, 0);
    auto dm = all_pairs(fam.graph);
    auto cover = build_tree_cover(fam.graph, fam.c_bound, 0.5, dist_fn(dm));
    counts.push_back(cover.trees.size());
    os << "n=" << n << ":" << cover.trees.size() << " ";
  }
  bool constant = counts[0] == counts[1] && counts[1] == counts[2];
  if (!constant)
    os << "(sigma = 63/eps = 126 saturates the decomposition to all vertex "
          "pairs at these sizes, so same-head dumbbells force one tree per "
          "clique color; the theoretical n-independent count only binds far "
          "beyond desk scale)";
  report(7, "tree count constant (+-0) across path sizes", constant, os.str());
}

// ---- criterion 8: oracle space scaling ---------------------------------

void criterion_8() {
  const double pinned_cap = 16.0;  // entries per n*log2(n), path family c=2
  bool ok = true;
  std::ostringstream os;
  for (int n : {64, 128, 256, 512}) {
    auto fam = generate_family(FamilyKind::kPath, n, 0);
    auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
    double ratio = static_cast<double>(h.stats().spt_entries) /
                   (n * std::log2(static_cast<double>(n)));
    ok &= ratio <= pinned_cap;
    os << "n=" << n << ":" << std::round(ratio * 100) / 100 << " ";
  }
  os << "cap " << pinned_cap;
  report(8, "stored distances per n*log2(n) bounded on the path sweep", ok,
         os.str());
}

// ---- criterion 9: determinism and round trips --------------------------

void criterion_9() {
  bool ok = true;
  std::ostringstream os;

  auto fam = generate_family(FamilyKind::kSpiral, 60, 0);
  auto h1 = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  auto h2 = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  std::string d1 = h1.dump(), d2 = h2.dump();
  if (d1 != d2) {
    ok = false;
    os << "edo rebuild differs ";
  }
  auto loaded = SeparatorHierarchy::load(d1);
  if (loaded.dump() != d1) {
    ok = false;
    os << "edo reload not byte-stable ";
  }
  char a[64], b[64];
  for (int u = 0; u < fam.graph.n() && ok; u += 3)
    for (int v = 0; v < fam.graph.n(); v += 7) {
      std::snprintf(a, sizeof a, "%.12g", h1.query(u, v));
      std::snprintf(b, sizeof b, "%.12g", loaded.query(u, v));
      if (std::string(a) != b) {
        ok = false;
        os << "query mismatch after reload ";
        break;
      }
    }

  auto grid = generate_family(FamilyKind::kGrid, 25, 0);
  auto gh = SeparatorHierarchy::build(grid.graph, grid.c_bound);
  auto cover1 = build_tree_cover(grid.graph, grid.c_bound, 0.5, dist_fn(gh));
  auto cover2 = build_tree_cover(grid.graph, grid.c_bound, 0.5, dist_fn(gh));
  std::string ad1 = dump_ado(cover1, gh), ad2 = dump_ado(cover2, gh);
  if (ad1 != ad2) {
    ok = false;
    os << "ado rebuild differs ";
  }
  auto lado = load_ado(ad1);
  if (dump_ado(lado.cover, lado.edo) != ad1) {
    ok = false;
    os << "ado reload not byte-stable ";
  }
  for (int u = 0; u < grid.graph.n() && ok; u += 2)
    for (int v = 0; v < grid.graph.n(); v += 5) {
      std::snprintf(a, sizeof a, "%.12g", cover1.query(u, v));
      std::snprintf(b, sizeof b, "%.12g", lado.cover.query(u, v));
      if (std::string(a) != b) {
        ok = false;
        os << "ado query mismatch after reload ";
        break;
      }
    }
  if (ok) os << "byte-identical rebuilds, bit-stable reload answers";
  report(9, "determinism and serialize/load round trips", ok, os.str());
}

// ---- criterion 10: mutation sensitivity ---------------------------------

void criterion_10() {
  int detected = 0, expected = 0;

  auto fam = generate_family(FamilyKind::kPath, 30, 0);
  auto dm = all_pairs(fam.graph);
  auto t = build_cct(fam.graph, fam.c_bound);
  auto w = build_wspd(fam.graph, t, 4.0, WspdFlavor::kGraph, dist_fn(dm));

  {  // deleted pair
    ++expected;
    auto broken = w;
    broken.pairs.erase(broken.pairs.begin() + 5);
    detected += !verify_wspd(broken, fam.graph, t, dm).ok;
  }
  {  // duplicated pair
    ++expected;
    auto broken = w;
    broken.pairs.push_back(broken.pairs.front());
    detected += !verify_wspd(broken, fam.graph, t, dm).ok;
  }
  {  // dub deflated below the true set diameter
    ++expected;
    auto broken = t;
    broken.nodes[broken.root].dub = 1e-6;
    detected += !verify_cct(fam.graph, dm, broken, fam.c_bound).ok;
  }
  {  // separator vertex moved into A, creating an A-B edge
    ++expected;
    auto sep = build_separator(fam.graph, fam.c_bound);
    sep.A.push_back(sep.C.back());
    sep.C.pop_back();
    detected += !verify_separator(fam.graph, sep).ok;
  }
  // The CLI selftest must flag the same three corruption kinds.
  for (const char* kind :
       {"wspd-drop-pair", "dub-deflate", "separator-ab-edge"}) {
    ++expected;
    std::ostringstream out, err;
    detected += cli::run({"selftest", "--inject", kind}, out, err) ==
                cli::kVerificationFailure;
  }

  std::ostringstream os;
  os << detected << "/" << expected << " corruptions detected";
  report(10, "seeded corruptions are always detected", detected == expected,
         os.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures)
    std::printf("%d criterion(s) failing\n", g_failures);
  else
    std::printf("all criteria passing\n");
  return g_failures;
}
