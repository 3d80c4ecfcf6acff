#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cpack/geom.hpp"
#include "cpack/graph.hpp"

namespace cpack {

/// Queryable total-overlap-length index: for a canonical cube s, rel(s) is
/// the clipped length inside s of the edges relevant to s (the edges of
/// length at most 2*diam(s) that overlap s).
///
/// Each edge is deposited, pre-clipped, into the canonical cubes of its own
/// level (the largest cell side >= half the edge length). Deposit totals
/// are propagated to ancestor cells, so a query sums the aggregated
/// deposits at or below its level in one lookup; the few deposit levels
/// above the query level are re-scanned per edge, which keeps the result
/// exactly equal to a brute-force re-scan.
class RelLengthIndex {
 public:
  /// `g` must live in the unit cube (normalized coordinates).
  static RelLengthIndex build(const GeometricGraph& g);

  double query(const Cube& s) const;

  /// rel(s) + rel over the 3^d-1 canonical neighbor cubes; upper-bounds the
  /// diameter of any connected subgraph inside s+ touching s.
  double dub_of_cell(const Cube& s) const;

 private:
  std::vector<Point> pts_;
  std::vector<Edge> edges_;
  std::vector<int> deposit_levels_;  // sorted ascending
  std::unordered_map<CubeKey, double, CubeKeyHash> subtree_;
  std::unordered_map<CubeKey, std::vector<int>, CubeKeyHash> deposit_edges_;
};

struct CctNode {
  Cube cube;
  int rep = -1;          // smallest vertex id in the represented set
  double dub = 0.0;      // input units
  int parent = -1;
  std::vector<int> children;
  int leaf_vertex = -1;  // >= 0 iff leaf

  bool is_leaf() const { return leaf_vertex >= 0; }
};

/// Hierarchy of c-connected sets over quadtree cells. Leaves biject with
/// graph vertices; an internal node's set is connected inside the doubled
/// cube of its cell, with graph diameter at most dub. Geometry (cubes) is
/// in normalized coordinates; dub and diam accessors are in input units.
struct CCTree {
  std::vector<CctNode> nodes;
  int root = -1;
  double scale = 1.0;  // normalized length = input length * scale
  std::vector<int> leaf_of_vertex;

  int n_vertices() const { return static_cast<int>(leaf_of_vertex.size()); }
  double cell_diam(int node) const { return nodes[node].cube.diam() / scale; }

  /// Sorted vertex ids under each node.
  std::vector<std::vector<int>> vertex_sets() const;
};

struct HSnapshot {
  int level = 0;
  std::vector<int> vertices;  // surviving representative ids
  std::vector<Edge> edges;    // lengths in input units
};

struct CctBuildStats {
  // One entry per processed quadtree cell: number of representatives found.
  std::vector<std::pair<Cube, int>> reps_per_cell;
  int max_reps_per_cell = 0;
  std::vector<std::string> warnings;
  std::vector<HSnapshot> snapshots;  // filled only when requested
};

struct CctOptions {
  bool record_snapshots = false;
  // When > 0, run estimate_packedness with this budget and warn if the
  // declared c falls below the estimated lower bound.
  long check_c_budget = 0;
};

/// Level sweep over the compressed quadtree: per cell, flood-fill the
/// contracted graph inside the doubled cube, contract each component found
/// to its smallest-id representative, and emit one tree node per merge.
CCTree build_cct(const GeometricGraph& g, double c,
                 CctBuildStats* stats = nullptr, const CctOptions& opts = {});

struct CctReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Exhaustive validity check against a distance matrix: pairwise distances
/// within each node bounded by c * cell diameter, and dub at least the
/// represented set's diameter. Intended for small n.
CctReport verify_cct(const GeometricGraph& g, const DistMatrix& dm,
                     const CCTree& t, double c);

}  // namespace cpack
