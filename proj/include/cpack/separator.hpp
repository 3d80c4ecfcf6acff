#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpack/graph.hpp"

namespace cpack {

/// Doubling constant of R^d used in the balance guarantee: 7 in the plane,
/// 2^ceil(1.6 d) otherwise.
double doubling_lambda(int dim);

inline constexpr double kDefaultSeparatorBeta = 0.25;

struct KEnclosingBall {
  int center_id = -1;
  double radius = 0.0;
};

/// Smallest k-th nearest-neighbor radius over point-centered balls; a
/// 2-approximation of the optimal k-enclosing ball. Ties break to the
/// smallest center id.
KEnclosingBall k_enclosing_ball(const std::vector<Point>& pts, int k);

struct RingSeparator {
  int center_id = -1;
  Point center;
  double radius = 0.0;
  double beta_achieved = 0.0;
  std::vector<int> inner_ids;   // inside b(center, r)
  std::vector<int> middle_ids;  // in b(center, 2r) \ b(center, r)
  std::vector<int> outer_ids;   // outside b(center, 2r)
};

/// Ball pair with >= ceil(beta n) vertices inside the inner ball and at
/// most n/2 inside the doubled ball; halves beta until the outer bound
/// holds (down to 1/n, then throws).
RingSeparator ring_separator(const GeometricGraph& g, double beta);

struct SeparatorResult {
  std::vector<int> C;  // separator vertices
  std::vector<int> A;  // source-side partition
  std::vector<int> B;  // sink-side partition
  std::vector<std::pair<int, int>> cut_edges;
  long flow = 0;
  double beta_achieved = 0.0;
  bool c_exceeded = false;  // flow went above the 2c packing bound
};

/// Unit-capacity max-flow from the inner to the outer ball (Edmonds-Karp);
/// C takes the sink-side endpoint of every min-cut edge.
SeparatorResult min_cut_separator(const GeometricGraph& g,
                                  const RingSeparator& ring, double c);

SeparatorResult build_separator(const GeometricGraph& g, double c,
                                double beta = kDefaultSeparatorBeta);

struct SeparatorReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks partition sanity, the no-A-B-edge guarantee and the balance
/// bounds implied by the achieved beta.
SeparatorReport verify_separator(const GeometricGraph& g,
                                 const SeparatorResult& r);

}  // namespace cpack
