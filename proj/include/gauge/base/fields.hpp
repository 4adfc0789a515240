#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gauge/base/atlas.hpp"
#include "gauge/errors.hpp"

namespace gauge::base {

/**
 * Per-chart samples of a field at the chart's nodes, with a validity mask. Entries computed by
 * stencils are valid only at core nodes; everything else is valid wherever its inputs are.
 * The tag names the atlas whose frames the components refer to.
 */
template<typename T>
struct ChartField
{
  std::string tag;
  std::vector<std::vector<T>> values;
  std::vector<std::vector<char>> valid;

  static ChartField shaped(const Atlas & atlas)
  {
    ChartField f;
    f.tag = atlas.tag();
    for (const auto & c : atlas.charts()) {
      f.values.emplace_back(static_cast<std::size_t>(c.size()));
      f.valid.emplace_back(static_cast<std::size_t>(c.size()), 0);
    }
    return f;
  }

  int num_charts() const { return static_cast<int>(values.size()); }
  bool ok(int c, int i) const { return valid[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] != 0; }
  const T & at(int c, int i) const { return values[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]; }
  void set(int c, int i, T v)
  {
    values[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] = std::move(v);
    valid[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]  = 1;
  }
};

using HiggsField  = ChartField<Vec>;
using MatterField = ChartField<Vec>;

/// Throws StructureError when the field's tag differs from the atlas tag or its shape mismatches.
template<typename T>
void require_tag(const Atlas & atlas, const ChartField<T> & f, const char * what)
{
  if (f.tag != atlas.tag()) {
    throw StructureError(std::string(what) + " is in atlas '" + f.tag + "', expected '" + atlas.tag() + "'");
  }
  if (f.num_charts() != atlas.num_charts()) { throw StructureError(std::string(what) + " has wrong chart count"); }
}

/**
 * G-valued field with first derivatives. Derivatives are second-order central differences of
 * the values (core nodes only); the inverse field carries the algebraically exact jets
 * ∂(g⁻¹) = −g⁻¹ ∂g g⁻¹ so that a transform followed by its inverse is exact.
 *
 * Used for gauge changes (from_tag → to_tag) and for H-equivariant functions (from == to).
 */
struct GroupField
{
  std::string from_tag;
  std::string to_tag;
  ChartField<Mat> values;
  ChartField<std::vector<Mat>> derivatives;

  bool ok(int c, int i) const { return values.ok(c, i) && derivatives.ok(c, i); }
  GroupField inverse() const;
};

using EquivariantFunction = GroupField;

/// Central difference of a chart field at a core node, if both neighbours are valid.
template<typename T>
std::optional<T> central_difference(const Atlas & atlas, const ChartField<T> & f, int chart, int local, int axis)
{
  const auto & c = atlas.chart(chart);
  if (!c.core[static_cast<std::size_t>(local)]) { return std::nullopt; }
  const int node = c.nodes[static_cast<std::size_t>(local)];
  const int ip   = c.local_index(atlas.grid().neighbor(node, axis, 1));
  const int im   = c.local_index(atlas.grid().neighbor(node, axis, -1));
  if (!f.ok(chart, ip) || !f.ok(chart, im)) { return std::nullopt; }
  return T((f.at(chart, ip) - f.at(chart, im)) / (2.0 * atlas.grid().spacing()));
}

/// All n central differences at once (nullopt unless every axis is available).
template<typename T>
std::optional<std::vector<T>> gradient(const Atlas & atlas, const ChartField<T> & f, int chart, int local)
{
  std::vector<T> out;
  for (int ax = 0; ax < atlas.grid().dim(); ++ax) {
    auto d = central_difference(atlas, f, chart, local, ax);
    if (!d) { return std::nullopt; }
    out.push_back(std::move(*d));
  }
  return out;
}

/// Wraps chart values into a GroupField with central-difference jets.
GroupField with_jets(const Atlas & atlas, ChartField<Mat> values, std::string from_tag, std::string to_tag);

/// Identity function on every chart node, with zero jets.
GroupField identity_field(const Atlas & atlas, std::string from_tag, std::string to_tag);

/// Periodic central-difference gradient of a global per-node matrix function.
std::vector<std::vector<Mat>> periodic_gradient(const BaseGrid & grid, const std::vector<Mat> & values);

/// Samples a global per-node function into charts (all nodes valid).
template<typename T>
ChartField<T> restrict_global(const Atlas & atlas, const std::vector<T> & global)
{
  auto f = ChartField<T>::shaped(atlas);
  for (int c = 0; c < atlas.num_charts(); ++c) {
    const auto & ch = atlas.chart(c);
    for (int i = 0; i < ch.size(); ++i) { f.set(c, i, global[static_cast<std::size_t>(ch.nodes[static_cast<std::size_t>(i)])]); }
  }
  return f;
}

/// Maximum over all valid entries of ‖a − b‖ (entrywise max); fields must share shape.
template<typename T>
double max_difference(const ChartField<T> & a, const ChartField<T> & b)
{
  if (a.num_charts() != b.num_charts()) { throw DimensionError("fields have different chart counts"); }
  double worst = 0.0;
  for (int c = 0; c < a.num_charts(); ++c) {
    for (std::size_t i = 0; i < a.values[static_cast<std::size_t>(c)].size(); ++i) {
      const int li = static_cast<int>(i);
      if (a.ok(c, li) && b.ok(c, li)) { worst = std::max(worst, max_abs(a.at(c, li) - b.at(c, li))); }
    }
  }
  return worst;
}

/// Number of entries valid in both fields.
template<typename T, typename U>
int common_valid(const ChartField<T> & a, const ChartField<U> & b)
{
  int n = 0;
  for (int c = 0; c < a.num_charts(); ++c) {
    for (std::size_t i = 0; i < a.values[static_cast<std::size_t>(c)].size(); ++i) {
      n += (a.ok(c, static_cast<int>(i)) && b.ok(c, static_cast<int>(i))) ? 1 : 0;
    }
  }
  return n;
}

}  // namespace gauge::base
