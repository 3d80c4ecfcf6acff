#include "cpack/geom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cpack {

double euclidean(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

Point AffineTransform::apply(const Point& p) const {
  Point q(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) q[k] = (p[k] - offset[k]) * scale;
  return q;
}

Point AffineTransform::invert(const Point& p) const {
  Point q(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) q[k] = p[k] / scale + offset[k];
  return q;
}

NormalizedPoints normalize_to_unit_cube(const std::vector<Point>& pts) {
  if (pts.empty()) throw std::invalid_argument("normalize: empty point set");
  const std::size_t d = pts.front().size();
  if (d == 0) throw std::invalid_argument("normalize: zero-dimensional point");
  Point lo = pts.front();
  Point hi = pts.front();
  for (const Point& p : pts) {
    if (p.size() != d)
      throw std::invalid_argument("normalize: mixed dimensions");
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::isfinite(p[k]))
        throw std::invalid_argument("normalize: non-finite coordinate");
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  double side = 0.0;
  for (std::size_t k = 0; k < d; ++k) side = std::max(side, hi[k] - lo[k]);

  AffineTransform t;
  t.offset = lo;
  // Padding keeps the max-coordinate point strictly inside the unit cube.
  t.scale = side > 0.0 ? 1.0 / (side * (1.0 + 1e-6)) : 1.0;

  NormalizedPoints out;
  out.transform = t;
  out.points.reserve(pts.size());
  for (const Point& p : pts) out.points.push_back(t.apply(p));
  return out;
}

double Cube::side() const { return std::ldexp(1.0, -level); }

double Cube::diam() const {
  return std::sqrt(static_cast<double>(dim())) * side();
}

double Cube::lo(int axis) const {
  return std::ldexp(static_cast<double>(cell[axis]), -level);
}

double Cube::hi(int axis) const {
  return std::ldexp(static_cast<double>(cell[axis] + 1), -level);
}

Point Cube::center() const {
  Point c(dim());
  for (int k = 0; k < dim(); ++k)
    c[k] = std::ldexp(static_cast<double>(cell[k]) + 0.5, -level);
  return c;
}

bool Cube::contains(const Point& p) const {
  for (int k = 0; k < dim(); ++k) {
    if (!(p[k] >= lo(k) && p[k] < hi(k))) return false;
  }
  return true;
}

bool Cube::in_doubled(const Point& p) const {
  const double half = side();  // s+ has side 2L, so half-extent L
  for (int k = 0; k < dim(); ++k) {
    double c = std::ldexp(static_cast<double>(cell[k]) + 0.5, -level);
    if (std::abs(p[k] - c) > half) return false;
  }
  return true;
}

std::vector<std::int64_t> cell_of_point(const Point& p, int level) {
  std::vector<std::int64_t> c(p.size());
  const std::int64_t maxc = (std::int64_t{1} << level) - 1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto v = static_cast<std::int64_t>(std::floor(std::ldexp(p[k], level)));
    c[k] = std::clamp<std::int64_t>(v, 0, maxc);
  }
  return c;
}

Cube cube_of_point(const Point& p, int level) {
  return Cube{level, cell_of_point(p, level)};
}

std::vector<Cube> canonical_neighbors(const Cube& s) {
  const int d = s.dim();
  const std::int64_t maxc = (std::int64_t{1} << s.level) - 1;
  std::vector<Cube> out;
  std::vector<int> off(d, -1);
  while (true) {
    bool origin = true;
    for (int k = 0; k < d; ++k) origin &= off[k] == 0;
    if (!origin) {
      Cube nb{s.level, s.cell};
      bool ok = true;
      for (int k = 0; k < d; ++k) {
        nb.cell[k] += off[k];
        if (nb.cell[k] < 0 || nb.cell[k] > maxc) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(std::move(nb));
    }
    int k = 0;
    while (k < d && off[k] == 1) off[k++] = -1;
    if (k == d) break;
    ++off[k];
  }
  return out;
}

int canonical_level_of_edge(double edge_length) {
  if (!(edge_length > 0.0))
    throw std::invalid_argument("canonical level: edge length must be > 0");
  int i = std::max(0, static_cast<int>(std::floor(std::log2(2.0 / edge_length))));
  i = std::min(i, kMaxLevel);
  while (i > 0 && std::ldexp(1.0, -i) < 0.5 * edge_length) --i;
  while (i < kMaxLevel && std::ldexp(1.0, -(i + 1)) >= 0.5 * edge_length) ++i;
  return i;
}

double clip_length(const Point& a, const Point& b, const Cube& s) {
  double t0 = 0.0, t1 = 1.0;
  for (int k = 0; k < s.dim(); ++k) {
    const double lo = s.lo(k), hi = s.hi(k);
    const double d = b[k] - a[k];
    if (d == 0.0) {
      if (!(a[k] >= lo && a[k] < hi)) return 0.0;
    } else {
      double ta = (lo - a[k]) / d;
      double tb = (hi - a[k]) / d;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 >= t1) return 0.0;
    }
  }
  return (t1 - t0) * euclidean(a, b);
}

namespace {

struct Location {
  Point p;
  std::vector<int> ids;
};

// Distinct locations of the input points, sorted for determinism.
std::vector<Location> group_locations(const std::vector<Point>& pts) {
  std::map<Point, std::vector<int>> groups;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    groups[pts[i]].push_back(i);
  std::vector<Location> locs;
  locs.reserve(groups.size());
  for (auto& [p, ids] : groups) locs.push_back(Location{p, std::move(ids)});
  return locs;
}

class QuadtreeBuilder {
 public:
  QuadtreeBuilder(const std::vector<Location>& locs, int dim)
      : locs_(locs), dim_(dim) {}

  CompressedQuadtree take(std::size_t npoints) {
    CompressedQuadtree q;
    q.dim = dim_;
    q.root = 0;
    Cube unit{0, std::vector<std::int64_t>(dim_, 0)};

    std::vector<int> all(locs_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

    nodes_.push_back(QuadtreeNode{unit, -1, {}, {}});
    if (locs_.size() == 1) {
      nodes_[0].point_ids = locs_[0].ids;
    } else {
      Cube shrunk = shrink(unit, all);
      if (shrunk == unit) {
        split_into(0, all);
      } else {
        int child = new_node(shrunk, 0);
        split_into(child, all);
      }
    }

    q.nodes = std::move(nodes_);
    q.leaf_of_point.assign(npoints, -1);
    for (int i = 0; i < static_cast<int>(q.nodes.size()); ++i)
      for (int pid : q.nodes[i].point_ids) q.leaf_of_point[pid] = i;
    return q;
  }

 private:
  int new_node(const Cube& cube, int parent) {
    nodes_.push_back(QuadtreeNode{cube, parent, {}, {}});
    int id = static_cast<int>(nodes_.size()) - 1;
    nodes_[parent].children.push_back(id);
    return id;
  }

  // Deepest canonical cube below `from` containing all the given locations.
  Cube shrink(const Cube& from, const std::vector<int>& ids) const {
    Cube cur = from;
    while (cur.level < kMaxLevel) {
      auto cand = cell_of_point(locs_[ids[0]].p, cur.level + 1);
      bool same = true;
      for (std::size_t i = 1; i < ids.size() && same; ++i)
        same = cell_of_point(locs_[ids[i]].p, cur.level + 1) == cand;
      if (!same) break;
      cur = Cube{cur.level + 1, std::move(cand)};
    }
    return cur;
  }

  // `node` already holds the minimal cube for `ids`; partition and recurse.
  void split_into(int node, const std::vector<int>& ids) {
    const int lvl = nodes_[node].cube.level + 1;
    if (lvl > kMaxLevel)
      throw std::runtime_error("quadtree: point set needs depth > kMaxLevel");
    std::map<std::vector<std::int64_t>, std::vector<int>> parts;
    for (int i : ids) parts[cell_of_point(locs_[i].p, lvl)].push_back(i);
    for (auto& [cell, sub] : parts) {
      Cube c{lvl, cell};
      if (sub.size() == 1) {
        int leaf = new_node(c, node);
        nodes_[leaf].point_ids = locs_[sub[0]].ids;
      } else {
        Cube shrunk = shrink(c, sub);
        int child = new_node(shrunk, node);
        split_into(child, sub);
      }
    }
  }

  const std::vector<Location>& locs_;
  int dim_;
  std::vector<QuadtreeNode> nodes_;
};

}  // namespace

CompressedQuadtree build_compressed_quadtree(const std::vector<Point>& pts) {
  if (pts.empty()) throw std::invalid_argument("quadtree: empty point set");
  const int d = static_cast<int>(pts.front().size());
  for (const Point& p : pts) {
    if (static_cast<int>(p.size()) != d)
      throw std::invalid_argument("quadtree: mixed dimensions");
    for (double x : p)
      if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("quadtree: points must lie in [0,1)^d");
  }
  auto locs = group_locations(pts);
  return QuadtreeBuilder(locs, d).take(pts.size());
}

}  // namespace cpack
