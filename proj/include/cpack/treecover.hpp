#pragma once

#include <string>
#include <vector>

#include "cpack/cct.hpp"
#include "cpack/edo.hpp"
#include "cpack/graph.hpp"
#include "cpack/lca.hpp"
#include "cpack/wspd.hpp"

namespace cpack {

struct Dumbbell {
  int a = -1;  // CCTree node ids of the two heads
  int b = -1;
  int rep_a = -1;
  int rep_b = -1;
  double ra = 0.0;   // head radii (the nodes' dub values)
  double rb = 0.0;
  double len = 0.0;  // graph distance between the reps
  int bucket = -1;   // log2 length class, relative to the shortest dumbbell
  int group = -1;    // bucket mod (ceil(log2 sigma) + 1)
  int color = -1;    // empty-region color within the (group, bucket) class
};

/// One dumbbell per pair of a graph-flavor decomposition. Head radii obey
/// ra, rb <= len / (sigma + 1); violations throw.
std::vector<Dumbbell> make_dumbbells(const Wspd& w);

/// Assigns buckets and groups; returns the group count ceil(log2 sigma)+1.
/// Two same-group lengths l <= l' always satisfy l' <= 2l or l' >= sigma*l.
int length_group(std::vector<Dumbbell>& ds, double sigma);

struct EmptyRegionStats {
  int max_conflict_degree = 0;
  int max_colors = 0;
};

/// Greedy-colors each similar-length class so same-color dumbbells keep
/// all head-to-head graph distances above gamma * class length (conflict
/// threshold 2*gamma*l covers the within-class length spread).
EmptyRegionStats empty_region_partition(std::vector<Dumbbell>& ds,
                                        double gamma, const DistFn& dist);

struct DumbbellTreeNode {
  enum class Kind { kDumbbell, kHead, kLeaf };
  Kind kind = Kind::kLeaf;
  int rep = -1;
  int parent = -1;
  std::vector<int> children;
  double up_len = 0.0;  // graph distance from rep to the parent's rep
  double pref = 0.0;    // accumulated path length from the root
  int cct_node = -1;    // head nodes: the CCTree node they correspond to
  int dumbbell = -1;    // dumbbell nodes: index into the dumbbell list
};

struct DumbbellTree {
  std::vector<DumbbellTreeNode> nodes;
  int root = 0;
  std::vector<int> leaf_of_vertex;
  EulerTourLca lca;

  /// Sum of rep-to-rep graph distances along the tree path between the
  /// leaves of p and q; at least d_G(p,q) by the triangle inequality.
  double path_length(int p, int q) const;

  /// Recomputes children, prefix lengths and the LCA index from parents
  /// and up_len.
  void finalize();
};

/// Builds the tree for one dumbbell subset: a dummy top dumbbell spanning
/// the whole graph, each dumbbell under the head of its unique minimum
/// longer in-range dumbbell, and each vertex under the deepest head whose
/// set contains it.
DumbbellTree build_dumbbell_tree(const std::vector<Dumbbell>& all,
                                 const std::vector<int>& subset,
                                 const GeometricGraph& g, const CCTree& t,
                                 double sigma, double gamma_p,
                                 const DistFn& dist);

struct TreeCoverBuildInfo {
  CCTree cct;
  Wspd wspd;
  std::vector<Dumbbell> dumbbells;
  int group_count = 0;
  EmptyRegionStats empty_region;
  std::vector<std::vector<int>> subsets;  // dumbbell indices per tree
};

/// (1+epsilon)-distortion tree cover: min over trees of the leaf-to-leaf
/// path length is within [d_G, (1+epsilon) d_G].
struct TreeCover {
  double epsilon = 0.0;
  double sigma = 0.0;   // 63 / epsilon
  double gamma = 0.0;   // 15 / sigma, also used as gamma'
  int n = 0;
  std::vector<DumbbellTree> trees;

  double query(int u, int v) const;
  double tree_path(std::size_t tree, int u, int v) const;
};

TreeCover build_tree_cover(const GeometricGraph& g, double c, double epsilon,
                           const DistFn& dist,
                           TreeCoverBuildInfo* info = nullptr);

/// Versioned dump ("ado-v1"); embeds the exact oracle the cover was built
/// from so the artifact is self-contained.
std::string dump_ado(const TreeCover& cover, const SeparatorHierarchy& edo);

struct LoadedAdo {
  TreeCover cover;
  SeparatorHierarchy edo;
};

LoadedAdo load_ado(const std::string& text);

}  // namespace cpack
