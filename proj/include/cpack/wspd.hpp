#pragma once

#include <string>
#include <vector>

#include "cpack/cct.hpp"
#include "cpack/graph.hpp"

namespace cpack {

enum class WspdFlavor { kEuclidean, kGraph };

struct WspdPair {
  int a = -1;  // CCTree node ids, ordered so rep_a < rep_b
  int b = -1;
  int rep_a = -1;
  int rep_b = -1;
  double dub_a = 0.0;
  double dub_b = 0.0;
  double dist_lower = 0.0;  // Euclidean or graph distance between the reps
};

struct Wspd {
  double sigma = 0.0;
  WspdFlavor flavor = WspdFlavor::kEuclidean;
  std::vector<WspdPair> pairs;
};

/// Recursive extraction from the c-connected tree: a candidate pair is
/// emitted once sigma * max(dub) <= dist - dub_a - dub_b holds for the
/// flavor's rep-distance; otherwise the node with the larger dub (ties:
/// larger cell, then smaller rep) splits into its children.
///
/// The Euclidean flavor lower-bounds the rep distance geometrically; the
/// graph flavor takes `dist` (an exact oracle or distance matrix adapter).
Wspd build_wspd(const GeometricGraph& g, const CCTree& t, double sigma,
                WspdFlavor flavor, const DistFn& dist = {});

struct WspdReport {
  bool ok = true;
  std::vector<std::string> violations;
  long covered_pairs = 0;
};

/// Exhaustive verification: every unordered vertex pair covered exactly
/// once, and every emitted pair sigma-separated when re-checked with true
/// set diameters from the distance matrix. Guarded to n <= max_n.
WspdReport verify_wspd(const Wspd& w, const GeometricGraph& g, const CCTree& t,
                       const DistMatrix& dm, int max_n = 500);

}  // namespace cpack
