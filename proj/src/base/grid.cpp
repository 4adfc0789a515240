#include "gauge/base/grid.hpp"

#include <string>

#include "gauge/errors.hpp"

namespace gauge::base {

BaseGrid BaseGrid::build(int n, std::vector<int> shape, double dx)
{
  if (n < 1 || n > 4) { throw DimensionError("base dimension must be 1..4, got " + std::to_string(n)); }
  if (static_cast<int>(shape.size()) != n) { throw DimensionError("grid shape must have one entry per axis"); }
  for (int s : shape) {
    if (s < 4) { throw DimensionError("every axis needs at least 4 nodes"); }
  }
  if (!(dx > 0.0)) { throw DimensionError("grid spacing must be positive"); }
  return BaseGrid(std::move(shape), dx);
}

BaseGrid::BaseGrid(std::vector<int> shape, double dx) : shape_(std::move(shape)), strides_(shape_.size()), dx_(dx)
{
  int stride = 1;
  for (int a = dim() - 1; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] = stride;
    stride *= shape_[static_cast<std::size_t>(a)];
  }
  num_nodes_ = stride;
}

std::vector<int> BaseGrid::multi_index(int node) const
{
  std::vector<int> idx(shape_.size());
  for (std::size_t a = 0; a < shape_.size(); ++a) { idx[a] = (node / strides_[a]) % shape_[a]; }
  return idx;
}

int BaseGrid::node_at(std::span<const int> index) const
{
  int node = 0;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    const int n = shape_[a];
    node += (((index[a] % n) + n) % n) * strides_[a];
  }
  return node;
}

int BaseGrid::neighbor(int node, int axis, int step) const
{
  auto idx = multi_index(node);
  idx[static_cast<std::size_t>(axis)] += step;
  return node_at(idx);
}

Vec BaseGrid::position(int node) const
{
  const auto idx = multi_index(node);
  Vec x(dim());
  for (int a = 0; a < dim(); ++a) { x(a) = dx_ * idx[static_cast<std::size_t>(a)]; }
  return x;
}

}  // namespace gauge::base
