#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpack/geom.hpp"

namespace cpack {

struct Edge {
  int u = 0;
  int v = 0;
  double length = 0.0;  // always the Euclidean distance of the endpoints
};

/// Undirected geometric graph: vertex id = index into `pts`, edges weighted
/// by the Euclidean length of their segment.
struct GeometricGraph {
  std::vector<Point> pts;
  std::vector<Edge> edges;

  int n() const { return static_cast<int>(pts.size()); }
  int m() const { return static_cast<int>(edges.size()); }
  int dim() const { return pts.empty() ? 0 : static_cast<int>(pts[0].size()); }

  int add_vertex(Point p);
  // Recomputes the length from coordinates; rejects self-loops, duplicate
  // pairs and zero-length edges.
  void add_edge(int u, int v);

  std::vector<std::vector<std::pair<int, double>>> adjacency() const;
  double total_edge_length() const;

  /// Connected components as sorted id lists, ordered by smallest member.
  std::vector<std::vector<int>> components() const;
  bool connected() const { return n() <= 1 || components().size() == 1; }

  /// Induced subgraph; `local_to_global` receives the sorted id mapping.
  GeometricGraph induced(const std::vector<int>& verts,
                         std::vector<int>* local_to_global = nullptr) const;
};

struct DijkstraResult {
  std::vector<double> dist;  // +inf for unreachable
  std::vector<int> parent;   // -1 for source and unreachable
};

DijkstraResult dijkstra(const GeometricGraph& g, int source);

/// Dense matrix of pairwise graph distances, row-indexed by vertex id.
struct DistMatrix {
  int n = 0;
  std::vector<double> d;  // row-major

  double operator()(int u, int v) const { return d[static_cast<std::size_t>(u) * n + v]; }
  double& at(int u, int v) { return d[static_cast<std::size_t>(u) * n + v]; }
};

/// Repeated Dijkstra; guarded to n <= 2000.
DistMatrix all_pairs(const GeometricGraph& g);

/// Pairwise vertex distance callback shared by the oracle builders.
using DistFn = std::function<double(int, int)>;

/// Adapter over a DistMatrix; the matrix must outlive the callback.
DistFn dist_fn(const DistMatrix& dm);

/// Wraps a callback with a symmetric hash-map cache.
DistFn memoize_dist(DistFn fn);

/// Sampled lower bound on the packedness value: max over candidate
/// (center, radius) pairs of clipped-edge-length-in-ball over radius.
/// Candidate centers are the vertices and edge midpoints; candidate radii
/// the pairwise vertex distances and half edge lengths. `sample_budget`
/// caps the number of evaluated pairs (deterministic striding).
double estimate_packedness(const GeometricGraph& g, long sample_budget);

enum class FamilyKind { kPath, kGrid, kStar, kSpiral };

FamilyKind parse_family_kind(const std::string& name);

struct Family {
  GeometricGraph graph;
  double c_bound = 0.0;  // analytic upper bound on the packedness value
};

/// Deterministic 2-d test families. `n` is the vertex count except for
/// star (ray count) and grid (rounded to the nearest full square).
Family generate_family(FamilyKind kind, int n, std::uint64_t seed);

// ---- graph file format -----------------------------------------------
//
// Line-oriented text. `#` starts a comment. Header `d <dim> n <count>
// m <count>`, then n lines `v <id> <x1> ... <xd>` (ids 0-based,
// consecutive), then m lines `e <u> <v>`.

struct ParseError {
  int line = 0;
  std::string message;
};

/// Throws GraphParseError (carrying line + message) on malformed input.
class GraphParseError : public std::exception {
 public:
  explicit GraphParseError(ParseError e);
  const char* what() const noexcept override { return text_.c_str(); }
  const ParseError& error() const { return err_; }

 private:
  ParseError err_;
  std::string text_;
};

GeometricGraph read_graph(std::istream& in);
GeometricGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const GeometricGraph& g);

}  // namespace cpack
