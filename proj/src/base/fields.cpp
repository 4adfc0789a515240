#include "gauge/base/fields.hpp"

#include <Eigen/LU>

namespace gauge::base {

GroupField GroupField::inverse() const
{
  GroupField inv;
  inv.from_tag    = to_tag;
  inv.to_tag      = from_tag;
  inv.values      = values;
  inv.derivatives = derivatives;
  for (int c = 0; c < values.num_charts(); ++c) {
    for (std::size_t i = 0; i < values.values[static_cast<std::size_t>(c)].size(); ++i) {
      const int li = static_cast<int>(i);
      if (!values.ok(c, li)) { continue; }
      const Mat gi = values.at(c, li).inverse();
      inv.values.values[static_cast<std::size_t>(c)][i] = gi;
      if (!derivatives.ok(c, li)) { continue; }
      auto & d = inv.derivatives.values[static_cast<std::size_t>(c)][i];
      for (auto & dl : d) { dl = -gi * dl * gi; }
    }
  }
  return inv;
}

GroupField with_jets(const Atlas & atlas, ChartField<Mat> values, std::string from_tag, std::string to_tag)
{
  GroupField g;
  g.from_tag    = std::move(from_tag);
  g.to_tag      = std::move(to_tag);
  g.derivatives = ChartField<std::vector<Mat>>::shaped(atlas);
  g.derivatives.tag = values.tag;
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      if (!values.ok(c, i)) { continue; }
      if (auto d = gradient(atlas, values, c, i)) { g.derivatives.set(c, i, std::move(*d)); }
    }
  }
  g.values = std::move(values);
  return g;
}

GroupField identity_field(const Atlas & atlas, std::string from_tag, std::string to_tag)
{
  GroupField g;
  g.from_tag    = std::move(from_tag);
  g.to_tag      = std::move(to_tag);
  g.values      = ChartField<Mat>::shaped(atlas);
  g.derivatives = ChartField<std::vector<Mat>>::shaped(atlas);
  const Mat id  = atlas.model().identity();
  const std::vector<Mat> zero(static_cast<std::size_t>(atlas.grid().dim()), Mat::Zero(id.rows(), id.cols()));
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      g.values.set(c, i, id);
      g.derivatives.set(c, i, zero);
    }
  }
  return g;
}

std::vector<std::vector<Mat>> periodic_gradient(const BaseGrid & grid, const std::vector<Mat> & values)
{
  std::vector<std::vector<Mat>> out(values.size());
  const double h2 = 2.0 * grid.spacing();
  for (int node = 0; node < grid.num_nodes(); ++node) {
    for (int ax = 0; ax < grid.dim(); ++ax) {
      out[static_cast<std::size_t>(node)].push_back(
        (values[static_cast<std::size_t>(grid.neighbor(node, ax, 1))] - values[static_cast<std::size_t>(grid.neighbor(node, ax, -1))])
        / h2);
    }
  }
  return out;
}

}  // namespace gauge::base
