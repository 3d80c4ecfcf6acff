#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace cpack {

using Point = std::vector<double>;

double euclidean(const Point& a, const Point& b);

// Deepest grid level supported; int64 cell coordinates overflow beyond this.
inline constexpr int kMaxLevel = 60;

/// Uniform scale + translation mapping input coordinates into [0,1)^d:
/// x_norm = (x_raw - offset) * scale.
struct AffineTransform {
  double scale = 1.0;
  Point offset;

  Point apply(const Point& p) const;
  Point invert(const Point& p) const;
};

struct NormalizedPoints {
  std::vector<Point> points;
  AffineTransform transform;
};

/// Scales a point set into the unit cube, leaving a small padding so the
/// extreme coordinates stay strictly below 1. Pairwise distance ratios are
/// preserved (uniform scaling). A zero-spread set maps to the origin.
NormalizedPoints normalize_to_unit_cube(const std::vector<Point>& pts);

/// Axis-aligned canonical grid cell: side length 2^-level, half-open,
/// cell coordinates index the grid at that level inside the unit cube.
struct Cube {
  int level = 0;
  std::vector<std::int64_t> cell;

  int dim() const { return static_cast<int>(cell.size()); }
  double side() const;
  double diam() const;  // full diagonal, sqrt(d) * side
  double radius() const { return 0.5 * diam(); }
  double lo(int axis) const;
  double hi(int axis) const;
  Point center() const;

  bool contains(const Point& p) const;  // half-open on every axis
  // Membership in s+, the concentric cube of twice the diameter (side 2L).
  bool in_doubled(const Point& p) const;

  bool operator==(const Cube&) const = default;
};

std::vector<std::int64_t> cell_of_point(const Point& p, int level);
Cube cube_of_point(const Point& p, int level);

/// Same-level grid cells with coordinate offsets in {-1,0,1}^d minus the
/// origin, clipped to the unit cube. At most 3^d - 1 cells.
std::vector<Cube> canonical_neighbors(const Cube& s);

/// Largest level i >= 0 whose cell side 2^-i is at least edge_length / 2.
/// Throws std::invalid_argument for non-positive lengths.
int canonical_level_of_edge(double edge_length);

/// Length of the part of segment [a,b] inside cube s. Axes on which the
/// segment is constant use half-open membership, so a segment lying on a
/// shared cell face counts only for the +side cell.
double clip_length(const Point& a, const Point& b, const Cube& s);

struct QuadtreeNode {
  Cube cube;
  int parent = -1;
  std::vector<int> children;
  std::vector<int> point_ids;  // leaf only; all input points at one location

  bool is_leaf() const { return children.empty(); }
};

/// Compressed quadtree over a point set in [0,1)^d. Internal nodes other
/// than the root have at least two children; each leaf holds exactly one
/// distinct point location (duplicates collapse into its id list).
struct CompressedQuadtree {
  int dim = 0;
  int root = 0;
  std::vector<QuadtreeNode> nodes;
  std::vector<int> leaf_of_point;  // input point id -> leaf node index
};

CompressedQuadtree build_compressed_quadtree(const std::vector<Point>& pts);

struct CubeKey {
  int level = 0;
  std::vector<std::int64_t> cell;

  bool operator==(const CubeKey&) const = default;
};

struct CubeKeyHash {
  std::size_t operator()(const CubeKey& k) const {
    std::size_t h = std::hash<int>()(k.level);
    for (std::int64_t c : k.cell) {
      h ^= std::hash<std::int64_t>()(c) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

inline CubeKey key_of(const Cube& s) { return CubeKey{s.level, s.cell}; }

}  // namespace cpack
