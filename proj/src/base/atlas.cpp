#include "gauge/base/atlas.hpp"

#include <algorithm>

#include <Eigen/LU>

#include "gauge/errors.hpp"

namespace gauge::base {

int Chart::box_offset(const BaseGrid & grid, int node, int axis) const
{
  const auto a   = static_cast<std::size_t>(axis);
  const int n    = grid.shape()[a];
  const int idx  = grid.multi_index(node)[a];
  return ((idx - box_start[a]) % n + n) % n;
}

std::vector<int> default_segments(const BaseGrid & grid, int halo)
{
  std::vector<int> seg(static_cast<std::size_t>(grid.dim()), 1);
  for (int a = 0; a < std::min(2, grid.dim()); ++a) {
    if (grid.shape()[static_cast<std::size_t>(a)] > 4 * halo) { seg[static_cast<std::size_t>(a)] = 2; }
  }
  return seg;
}

std::vector<Chart> box_cover(const BaseGrid & grid, const std::vector<int> & segments, int halo)
{
  const int n = grid.dim();
  if (static_cast<int>(segments.size()) != n) { throw DimensionError("one segment count per axis required"); }
  if (halo < 1) { throw DimensionError("chart halo must be at least 1"); }

  // per axis: list of (start, length) boxes
  std::vector<std::vector<std::pair<int, int>>> boxes(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const int len = grid.shape()[ua];
    const int s   = segments[ua];
    if (s < 1) { throw DimensionError("segment counts must be positive"); }
    if (s == 1) {
      boxes[ua].emplace_back(0, len);
      continue;
    }
    for (int k = 0; k < s; ++k) {
      const int lo = k * len / s;
      const int hi = (k + 1) * len / s;
      const int bl = hi - lo + 2 * halo;
      if (bl >= len) { throw DimensionError("axis too short for the requested segments"); }
      boxes[ua].emplace_back(lo - halo, bl);
    }
  }

  std::vector<Chart> charts;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    Chart c;
    c.local.assign(static_cast<std::size_t>(grid.num_nodes()), -1);
    for (int a = 0; a < n; ++a) {
      const auto ua  = static_cast<std::size_t>(a);
      const auto & b = boxes[ua][pick[ua]];
      const int len  = grid.shape()[ua];
      c.box_start.push_back((b.first % len + len) % len);
      c.box_length.push_back(b.second);
    }
    int count = 1;
    for (int len : c.box_length) { count *= len; }
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int k = 0; k < count; ++k) {
      int rem = k;
      for (int a = n - 1; a >= 0; --a) {
        const auto ua = static_cast<std::size_t>(a);
        idx[ua]       = c.box_start[ua] + rem % c.box_length[ua];
        rem /= c.box_length[ua];
      }
      const int node                          = grid.node_at(idx);
      c.local[static_cast<std::size_t>(node)] = c.size();
      c.nodes.push_back(node);
    }
    c.core.assign(c.nodes.size(), 1);
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      for (int ax = 0; ax < n && c.core[i]; ++ax) {
        for (int step : {-1, 1}) {
          if (!c.contains(grid.neighbor(c.nodes[i], ax, step))) { c.core[i] = 0; }
        }
      }
    }
    charts.push_back(std::move(c));

    std::size_t a = pick.size();
    bool done     = true;
    while (a > 0) {
      --a;
      if (++pick[a] < boxes[a].size()) { done = false; break; }
      pick[a] = 0;
    }
    if (done) { break; }
  }
  return charts;
}

std::vector<Chart> single_chart(const BaseGrid & grid)
{
  return box_cover(grid, std::vector<int>(static_cast<std::size_t>(grid.dim()), 1));
}

Atlas::Atlas(BaseGrid grid, const lie::GroupModel & model, std::string tag, std::vector<Chart> charts)
  : grid_(std::move(grid)), model_(&model), tag_(std::move(tag)), charts_(std::move(charts)), identity_(model.identity())
{
  if (charts_.empty()) { throw StructureError("atlas needs at least one chart"); }
  std::vector<char> covered(static_cast<std::size_t>(grid_.num_nodes()), 0);
  for (const auto & c : charts_) {
    if (static_cast<int>(c.local.size()) != grid_.num_nodes()) { throw StructureError("chart does not match grid"); }
    for (int node : c.nodes) { covered[static_cast<std::size_t>(node)] = 1; }
  }
  for (char v : covered) {
    if (!v) { throw StructureError("charts do not cover the grid"); }
  }
  // adjacent nodes must share a chart
  for (int node = 0; node < grid_.num_nodes(); ++node) {
    for (int ax = 0; ax < grid_.dim(); ++ax) {
      const int nb = grid_.neighbor(node, ax, 1);
      bool shared  = false;
      for (const auto & c : charts_) { shared = shared || (c.contains(node) && c.contains(nb)); }
      if (!shared) { throw StructureError("adjacent nodes share no chart"); }
    }
  }
  for (int a = 0; a < num_charts(); ++a) {
    for (int b = 0; b < num_charts(); ++b) {
      if (a == b || !overlaps(a, b)) { continue; }
      auto & slot = transitions_[{a, b}];
      slot.assign(static_cast<std::size_t>(chart(a).size()), Mat());
      for (int i = 0; i < chart(a).size(); ++i) {
        if (chart(b).contains(chart(a).nodes[static_cast<std::size_t>(i)])) { slot[static_cast<std::size_t>(i)] = identity_; }
      }
    }
  }
}

std::vector<int> Atlas::charts_at(int node) const
{
  std::vector<int> out;
  for (int c = 0; c < num_charts(); ++c) {
    if (chart(c).contains(node)) { out.push_back(c); }
  }
  return out;
}

bool Atlas::overlaps(int a, int b) const
{
  const auto & ca = chart(a);
  const auto & cb = chart(b);
  for (int node : ca.nodes) {
    if (cb.contains(node)) { return true; }
  }
  return false;
}

const Mat & Atlas::transition(int a, int b, int node) const
{
  if (!chart(a).contains(node) || !chart(b).contains(node)) { throw StructureError("node outside the chart overlap"); }
  if (a == b) { return identity_; }
  const auto it = transitions_.find({a, b});
  if (it == transitions_.end()) { throw StructureError("missing transition data"); }
  const Mat & m = it->second[static_cast<std::size_t>(chart(a).local_index(node))];
  if (m.size() == 0) { throw StructureError("missing transition data"); }
  return m;
}

void Atlas::set_transition(int a, int b, int node, Mat rho)
{
  if (a == b) { throw StructureError("ϱ_aa is fixed to the identity"); }
  if (!chart(a).contains(node) || !chart(b).contains(node)) { throw StructureError("node outside the chart overlap"); }
  if (rho.rows() != model_->matrix_size() || rho.cols() != model_->matrix_size()) {
    throw DimensionError("transition has wrong matrix size");
  }
  transitions_[{a, b}][static_cast<std::size_t>(chart(a).local_index(node))] = std::move(rho);
}

void Atlas::erase_transition(int a, int b, int node)
{
  const auto it = transitions_.find({a, b});
  if (it == transitions_.end() || !chart(a).contains(node)) { return; }
  it->second[static_cast<std::size_t>(chart(a).local_index(node))] = Mat();
}

Atlas atlas_from_chart_gauges(BaseGrid grid, const lie::GroupModel & model, std::string tag,
                              std::vector<Chart> charts, const std::vector<std::vector<Mat>> & gauges)
{
  Atlas atlas(std::move(grid), model, std::move(tag), std::move(charts));
  if (static_cast<int>(gauges.size()) != atlas.num_charts()) { throw DimensionError("one gauge per chart required"); }
  for (int a = 0; a < atlas.num_charts(); ++a) {
    for (int b = 0; b < atlas.num_charts(); ++b) {
      if (a == b) { continue; }
      const auto & ca = atlas.chart(a);
      const auto & cb = atlas.chart(b);
      for (int i = 0; i < ca.size(); ++i) {
        const int node = ca.nodes[static_cast<std::size_t>(i)];
        if (!cb.contains(node)) { continue; }
        const Mat & ga = gauges[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        const Mat & gb = gauges[static_cast<std::size_t>(b)][static_cast<std::size_t>(cb.local_index(node))];
        atlas.set_transition(a, b, node, ga.inverse() * gb);
      }
    }
  }
  return atlas;
}

double check_cocycle(const Atlas & atlas)
{
  double worst = 0.0;
  for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    for (int a : cs) {
      for (int b : cs) {
        const Mat & ab = atlas.transition(a, b, node);
        for (int c : cs) {
          worst = std::max(worst, max_abs(ab * atlas.transition(b, c, node) - atlas.transition(a, c, node)));
        }
      }
    }
  }
  return worst;
}

HValuedCheck is_H_valued(const Atlas & atlas, double tol)
{
  double worst = 0.0;
  for (int node = 0; node < atlas.grid().num_nodes(); ++node) {
    const auto cs = atlas.charts_at(node);
    for (int a : cs) {
      for (int b : cs) {
        if (a != b) { worst = std::max(worst, atlas.model().h_membership_residual(atlas.transition(a, b, node))); }
      }
    }
  }
  return {worst <= tol, worst};
}

}  // namespace gauge::base
