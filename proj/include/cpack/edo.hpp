#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cpack/graph.hpp"
#include "cpack/lca.hpp"
#include "cpack/separator.hpp"

namespace cpack {

struct EdoNode {
  std::vector<int> verts;  // global ids; persisted only for leaves
  std::vector<int> sep;    // separator vertex ids (empty for leaves and
                           // component-split nodes)
  // Per separator vertex: distances within this node's subgraph; vertices
  // unreachable inside the subgraph are absent.
  std::vector<std::unordered_map<int, double>> spt;
  bool leaf = false;
  std::vector<double> leaf_table;  // |verts|^2 row-major, +inf unreachable
  int parent = -1;
  std::vector<int> children;
};

struct EdoAnswer {
  double distance = 0.0;
  int witness_sep_vertex = -1;  // -1 when resolved by a leaf table or u == v
  int level_node = -1;
  int lookups = 0;
};

struct EdoStats {
  long spt_entries = 0;  // finite stored distances, leaf tables included
  int height = 0;
  int node_count = 0;
};

/// Exact distance oracle: balanced decomposition by separators, a shortest
/// path tree per separator vertex within each subgraph, and LCA-driven
/// queries over the decomposition tree.
class SeparatorHierarchy {
 public:
  static SeparatorHierarchy build(const GeometricGraph& g, double c,
                                  int n0 = 8,
                                  double beta = kDefaultSeparatorBeta);

  double query(int u, int v) const { return query_full(u, v).distance; }
  EdoAnswer query_full(int u, int v) const;

  int n() const { return n_; }
  int root() const { return root_; }
  int home(int v) const { return home_[v]; }
  const std::vector<EdoNode>& nodes() const { return nodes_; }
  EdoStats stats() const;

  /// Versioned JSON dump ("edo-v1"); load round-trips exactly.
  std::string dump() const;
  static SeparatorHierarchy load(const std::string& text);

 private:
  void finalize();

  std::vector<EdoNode> nodes_;
  std::vector<int> home_;
  int root_ = 0;
  int n_ = 0;
  int n0_ = 8;
  EulerTourLca lca_;
};

/// Memoized adapter over the oracle; the hierarchy must outlive it.
DistFn dist_fn(const SeparatorHierarchy& h);

}  // namespace cpack
