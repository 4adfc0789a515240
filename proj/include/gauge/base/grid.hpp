#pragma once

#include <span>
#include <vector>

#include "gauge/types.hpp"

namespace gauge::base {

/**
 * Periodic rectangular grid on a flat n-torus (n = 1..4). Nodes are numbered row-major, the
 * last axis running fastest.
 */
class BaseGrid
{
public:
  /// Throws DimensionError unless n ∈ {1,2,3,4}, shape has n entries ≥ 4 and dx > 0.
  static BaseGrid build(int n, std::vector<int> shape, double dx);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<int> & shape() const { return shape_; }
  double spacing() const { return dx_; }
  int num_nodes() const { return num_nodes_; }
  double extent(int axis) const { return dx_ * shape_.at(static_cast<std::size_t>(axis)); }

  std::vector<int> multi_index(int node) const;
  /// Indices are wrapped periodically.
  int node_at(std::span<const int> index) const;
  int neighbor(int node, int axis, int step) const;
  Vec position(int node) const;

private:
  BaseGrid(std::vector<int> shape, double dx);

  std::vector<int> shape_;
  std::vector<int> strides_;
  double dx_;
  int num_nodes_;
};

}  // namespace gauge::base
