#pragma once

#include <utility>
#include <vector>

namespace cpack {

/// Constant-time LCA queries after linearithmic preprocessing: Euler tour
/// of the tree plus a sparse table minimizing depth over tour ranges.
class EulerTourLca {
 public:
  EulerTourLca() = default;

  void build(const std::vector<std::vector<int>>& children, int root) {
    const int n = static_cast<int>(children.size());
    depth_.assign(n, 0);
    first_.assign(n, -1);
    euler_.clear();
    euler_.reserve(2 * n);

    std::vector<int> order{root};
    order.reserve(n);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (int c : children[order[i]]) {
        depth_[c] = depth_[order[i]] + 1;
        order.push_back(c);
      }

    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    first_[root] = 0;
    euler_.push_back(root);
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      if (ci < children[v].size()) {
        int c = children[v][ci++];
        first_[c] = static_cast<int>(euler_.size());
        euler_.push_back(c);
        stack.emplace_back(c, 0);
      } else {
        stack.pop_back();
        if (!stack.empty()) euler_.push_back(stack.back().first);
      }
    }

    const int m = static_cast<int>(euler_.size());
    log2_.assign(m + 1, 0);
    for (int i = 2; i <= m; ++i) log2_[i] = log2_[i / 2] + 1;
    table_.assign(log2_[m] + 1, std::vector<int>(m));
    table_[0] = euler_;
    for (int j = 1; j < static_cast<int>(table_.size()); ++j)
      for (int i = 0; i + (1 << j) <= m; ++i) {
        int a = table_[j - 1][i];
        int b = table_[j - 1][i + (1 << (j - 1))];
        table_[j][i] = depth_[a] <= depth_[b] ? a : b;
      }
  }

  int lca(int u, int v) const {
    int a = first_[u], b = first_[v];
    if (a > b) std::swap(a, b);
    int j = log2_[b - a + 1];
    int x = table_[j][a];
    int y = table_[j][b - (1 << j) + 1];
    return depth_[x] <= depth_[y] ? x : y;
  }

  int depth(int v) const { return depth_[v]; }

 private:
  std::vector<int> euler_, first_, depth_, log2_;
  std::vector<std::vector<int>> table_;
};

}  // namespace cpack
