#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "cpack/edo.hpp"
#include "oracles.hpp"

using namespace cpack;

namespace {

void check_exact(const GeometricGraph& g, const SeparatorHierarchy& h) {
  auto dm = all_pairs(g);
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v)
      CHECK(h.query(u, v) == doctest::Approx(dm(u, v)).epsilon(1e-9));
}

std::string digits12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

TEST_CASE("query on a 3-path and the u == v case") {
  auto fam = generate_family(FamilyKind::kPath, 3, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  CHECK(h.query(0, 2) == doctest::Approx(2.0));
  CHECK(h.query(2, 0) == doctest::Approx(2.0));
  CHECK(h.query(1, 1) == 0.0);
  CHECK_THROWS_AS(h.query(0, 5), std::invalid_argument);
}

TEST_CASE("n0 >= n degenerates to a single leaf with exact answers") {
  auto fam = generate_family(FamilyKind::kSpiral, 12, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound, /*n0=*/64);
  CHECK(h.nodes().size() == 1);
  CHECK(h.nodes()[0].leaf);
  check_exact(fam.graph, h);
}

TEST_CASE("exactness on path, grid, star, spiral") {
  struct Case {
    FamilyKind kind;
    int n;
  };
  for (auto [kind, n] :
       {Case{FamilyKind::kPath, 70}, Case{FamilyKind::kGrid, 36},
        Case{FamilyKind::kStar, 15}, Case{FamilyKind::kSpiral, 60}}) {
    auto fam = generate_family(kind, n, 0);
    auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
    check_exact(fam.graph, h);
  }
}

TEST_CASE("exactness on random connected graphs") {
  for (std::uint64_t seed : {2ULL, 7ULL, 21ULL}) {
    auto g = oracles::random_connected_graph(40, 0.1, seed);
    auto h = SeparatorHierarchy::build(g, 50.0);
    check_exact(g, h);
  }
}

TEST_CASE("hierarchy on a 32-edge path: single-vertex separators, low height") {
  auto fam = generate_family(FamilyKind::kPath, 33, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  // The smallest-id tie-break pins the inner ball to the low end of each
  // piece, so every cut is one vertex.
  for (const auto& node : h.nodes())
    if (!node.leaf) CHECK(node.sep.size() == 1);
  auto st = h.stats();
  CHECK(st.height <= 4 * std::log2(33) + 3);
}

TEST_CASE("separators plus leaf subgraphs partition the vertex set") {
  auto fam = generate_family(FamilyKind::kGrid, 49, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  std::vector<int> owner(fam.graph.n(), -1);
  for (int i = 0; i < static_cast<int>(h.nodes().size()); ++i) {
    const auto& node = h.nodes()[i];
    if (node.leaf) {
      for (int v : node.verts) {
        CHECK(owner[v] == -1);
        owner[v] = i;
      }
    } else {
      for (int v : node.sep) {
        CHECK(owner[v] == -1);
        owner[v] = i;
      }
    }
  }
  for (int v = 0; v < fam.graph.n(); ++v) {
    CHECK(owner[v] >= 0);
    CHECK(h.home(v) == owner[v]);
  }
}

TEST_CASE("home nodes are ancestors-or-self of every containing subgraph") {
  auto fam = generate_family(FamilyKind::kSpiral, 40, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  for (int i = 0; i < static_cast<int>(h.nodes().size()); ++i) {
    for (int v : h.nodes()[i].verts) {
      // walk up from home(v); node i must be on that path
      bool found = false;
      for (int a = h.home(v); a >= 0; a = h.nodes()[a].parent) found |= a == i;
      CHECK(found);
    }
  }
}

TEST_CASE("query cost stays within sep-size times depth") {
  auto fam = generate_family(FamilyKind::kPath, 120, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  auto st = h.stats();
  int max_sep = 0;
  for (const auto& node : h.nodes())
    max_sep = std::max(max_sep, static_cast<int>(node.sep.size()));
  int cap = std::max(max_sep, h.n() <= 8 ? 1 : 8) * (st.height + 1) + 1;
  for (int u = 0; u < h.n(); u += 7)
    for (int v = 0; v < h.n(); v += 11)
      CHECK(h.query_full(u, v).lookups <= cap);
}

TEST_CASE("dump/load round trip preserves 12-digit query output") {
  auto fam = generate_family(FamilyKind::kGrid, 25, 0);
  auto h = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  auto text = h.dump();
  auto h2 = SeparatorHierarchy::load(text);
  for (int u = 0; u < h.n(); ++u)
    for (int v = 0; v < h.n(); ++v)
      CHECK(digits12(h.query(u, v)) == digits12(h2.query(u, v)));
  // Round trip is byte-stable and rebuilds are byte-identical.
  CHECK(h2.dump() == text);
  auto h3 = SeparatorHierarchy::build(fam.graph, fam.c_bound);
  CHECK(h3.dump() == text);
}

TEST_CASE("load rejects foreign format tags") {
  CHECK_THROWS_AS(SeparatorHierarchy::load("{\"format\":\"ado-v1\"}"),
                  std::invalid_argument);
}
