#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gauge/base/fields.hpp"

namespace gauge::base {

/**
 * Field snapshot container: `<stem>.json` manifest plus `<stem>.bin` raw data.
 *
 * The data file holds, for each chart in order and each node of the chart table in order,
 * one rows × cols entry in row-major order as little-endian IEEE-754 float64. Entries that
 * are not valid are written as NaN.
 */
struct SnapshotManifest
{
  std::string kind;  ///< "higgs", "matter", "connection", ...
  std::string group;
  std::vector<int> shape;
  double dx = 0.0;
  std::string atlas_tag;
  std::vector<std::vector<int>> chart_nodes;
  int rows = 0;
  int cols = 0;
};

void write_snapshot(const std::filesystem::path & stem, const Atlas & atlas, const ChartField<Mat> & field,
                    const std::string & kind);
void write_snapshot(const std::filesystem::path & stem, const Atlas & atlas, const ChartField<Vec> & field,
                    const std::string & kind);

/// Reads a snapshot back; vector fields come back as rows × 1 matrices. Throws Error on malformed input.
ChartField<Mat> read_snapshot(const std::filesystem::path & stem, SnapshotManifest & manifest);

}  // namespace gauge::base
