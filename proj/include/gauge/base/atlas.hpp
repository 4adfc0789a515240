#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gauge/base/grid.hpp"
#include "gauge/lie/group_model.hpp"

namespace gauge::base {

/**
 * Axis-aligned box of grid nodes (wrapping periodically). A node is in the chart's core when
 * all 2n nearest neighbours are in the chart, i.e. central differences can be taken there.
 */
struct Chart
{
  std::vector<int> box_start;
  std::vector<int> box_length;  ///< equal to the axis size for an uncut axis
  std::vector<int> nodes;
  std::vector<int> local;       ///< global node → local index, -1 outside
  std::vector<char> core;       ///< per local index

  int size() const { return static_cast<int>(nodes.size()); }
  bool contains(int node) const { return local[static_cast<std::size_t>(node)] >= 0; }
  int local_index(int node) const { return local[static_cast<std::size_t>(node)]; }
  /// Offset of the node from the box start along an axis, in [0, box_length).
  int box_offset(const BaseGrid & grid, int node, int axis) const;
};

/// Default number of segments per axis: two on the first two axes when long enough, else one.
std::vector<int> default_segments(const BaseGrid & grid, int halo = 2);

/**
 * Cover of the torus by overlapping boxes: each axis is cut into `segments` pieces, each piece
 * widened by `halo` nodes on both sides. Axes with one segment are not cut. With halo ≥ 2 every
 * node is in the core of the chart built from its own segment, and neighbouring charts share
 * at least 2·halo node layers.
 */
std::vector<Chart> box_cover(const BaseGrid & grid, const std::vector<int> & segments, int halo = 2);

/// Single chart covering the whole torus.
std::vector<Chart> single_chart(const BaseGrid & grid);

/**
 * Principal-bundle atlas: charts plus G-valued transition functions ϱ_αβ on overlaps, with
 * z_β = z_α ϱ_αβ. Field components transform as h_α = ϱ_αβ · h_β.
 */
class Atlas
{
public:
  /// All transitions set to the identity.
  Atlas(BaseGrid grid, const lie::GroupModel & model, std::string tag, std::vector<Chart> charts);

  const BaseGrid & grid() const { return grid_; }
  const lie::GroupModel & model() const { return *model_; }
  const std::string & tag() const { return tag_; }
  void set_tag(std::string tag) { tag_ = std::move(tag); }

  int num_charts() const { return static_cast<int>(charts_.size()); }
  const Chart & chart(int c) const { return charts_.at(static_cast<std::size_t>(c)); }
  const std::vector<Chart> & charts() const { return charts_; }
  std::vector<int> charts_at(int node) const;
  bool overlaps(int a, int b) const;

  /// ϱ_ab at a node of U_a ∩ U_b; identity for a == b. StructureError when missing.
  const Mat & transition(int a, int b, int node) const;
  void set_transition(int a, int b, int node, Mat rho);
  /// Removes the stored transition (used to exercise structure errors).
  void erase_transition(int a, int b, int node);

private:
  BaseGrid grid_;
  const lie::GroupModel * model_;
  std::string tag_;
  std::vector<Chart> charts_;
  std::map<std::pair<int, int>, std::vector<Mat>> transitions_;  // indexed by local index in chart a
  Mat identity_;
};

/// Atlas with ϱ_ab = g_a⁻¹ g_b from per-chart gauges g[a][local].
Atlas atlas_from_chart_gauges(BaseGrid grid, const lie::GroupModel & model, std::string tag,
                              std::vector<Chart> charts, const std::vector<std::vector<Mat>> & gauges);

/// max ‖ϱ_ab ϱ_bc − ϱ_ac‖ over all triple overlaps (including ϱ_aa = 1).
double check_cocycle(const Atlas & atlas);

struct HValuedCheck
{
  bool h_valued;
  double max_residual;
};

HValuedCheck is_H_valued(const Atlas & atlas, double tol);

}  // namespace gauge::base
