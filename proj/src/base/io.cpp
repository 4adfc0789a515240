#include "gauge/base/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace gauge::base {

namespace {

constexpr const char * kFormat = "gauge-snapshot/1";

void put_f64(std::ostream & os, double v)
{
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  char buf[8];
  for (int k = 0; k < 8; ++k) { buf[k] = static_cast<char>((bits >> (8 * k)) & 0xffu); }
  os.write(buf, 8);
}

double get_f64(std::istream & is)
{
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char *>(buf), 8)) { throw Error("snapshot data file is truncated"); }
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) { bits |= static_cast<std::uint64_t>(buf[k]) << (8 * k); }
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::filesystem::path with_suffix(const std::filesystem::path & stem, const char * ext)
{
  return std::filesystem::path(stem.string() + ext);
}

void write_all(const std::filesystem::path & stem, const Atlas & atlas, const ChartField<Mat> & field,
               const std::string & kind, int rows, int cols)
{
  require_tag(atlas, field, "snapshot field");
  nlohmann::json m;
  m["format"]     = kFormat;
  m["kind"]       = kind;
  m["group"]      = atlas.model().name();
  m["grid"]       = {{"shape", atlas.grid().shape()}, {"dx", atlas.grid().spacing()}};
  m["atlas_tag"]  = atlas.tag();
  m["entry"]      = {{"rows", rows}, {"cols", cols}};
  m["dtype"]      = "float64";
  m["byte_order"] = "little";
  auto & charts   = m["charts"] = nlohmann::json::array();
  for (const auto & c : atlas.charts()) { charts.push_back({{"nodes", c.nodes}}); }

  std::ofstream js(with_suffix(stem, ".json"));
  js << m.dump(2) << '\n';
  std::ofstream bin(with_suffix(stem, ".bin"), std::ios::binary);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int c = 0; c < atlas.num_charts(); ++c) {
    for (int i = 0; i < atlas.chart(c).size(); ++i) {
      const bool ok = field.ok(c, i);
      for (int r = 0; r < rows; ++r) {
        for (int k = 0; k < cols; ++k) { put_f64(bin, ok ? field.at(c, i)(r, k) : nan); }
      }
    }
  }
  if (!js || !bin) { throw Error("failed to write snapshot " + stem.string()); }
}

}  // namespace

void write_snapshot(const std::filesystem::path & stem, const Atlas & atlas, const ChartField<Mat> & field,
                    const std::string & kind)
{
  int rows = 0, cols = 0;
  for (int c = 0; c < field.num_charts() && rows == 0; ++c) {
    for (std::size_t i = 0; i < field.values[static_cast<std::size_t>(c)].size(); ++i) {
      if (field.ok(c, static_cast<int>(i))) {
        rows = static_cast<int>(field.at(c, static_cast<int>(i)).rows());
        cols = static_cast<int>(field.at(c, static_cast<int>(i)).cols());
        break;
      }
    }
  }
  write_all(stem, atlas, field, kind, rows, cols);
}

void write_snapshot(const std::filesystem::path & stem, const Atlas & atlas, const ChartField<Vec> & field,
                    const std::string & kind)
{
  ChartField<Mat> m;
  m.tag   = field.tag;
  m.valid = field.valid;
  for (const auto & chart : field.values) {
    m.values.emplace_back();
    for (const auto & v : chart) { m.values.back().push_back(v); }
  }
  write_snapshot(stem, atlas, m, kind);
}

ChartField<Mat> read_snapshot(const std::filesystem::path & stem, SnapshotManifest & manifest)
{
  std::ifstream js(with_suffix(stem, ".json"));
  if (!js) { throw Error("cannot open snapshot manifest " + stem.string() + ".json"); }
  nlohmann::json m;
  try {
    js >> m;
    if (m.at("format") != kFormat) { throw Error("unknown snapshot format"); }
    manifest.kind      = m.at("kind").get<std::string>();
    manifest.group     = m.at("group").get<std::string>();
    manifest.shape     = m.at("grid").at("shape").get<std::vector<int>>();
    manifest.dx        = m.at("grid").at("dx").get<double>();
    manifest.atlas_tag = m.at("atlas_tag").get<std::string>();
    manifest.rows      = m.at("entry").at("rows").get<int>();
    manifest.cols      = m.at("entry").at("cols").get<int>();
    manifest.chart_nodes.clear();
    for (const auto & c : m.at("charts")) { manifest.chart_nodes.push_back(c.at("nodes").get<std::vector<int>>()); }
  } catch (const nlohmann::json::exception & e) {
    throw Error(std::string("malformed snapshot manifest: ") + e.what());
  }

  std::ifstream bin(with_suffix(stem, ".bin"), std::ios::binary);
  if (!bin) { throw Error("cannot open snapshot data " + stem.string() + ".bin"); }
  ChartField<Mat> f;
  f.tag = manifest.atlas_tag;
  for (const auto & nodes : manifest.chart_nodes) {
    f.values.emplace_back();
    f.valid.emplace_back();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Mat e(manifest.rows, manifest.cols);
      for (int r = 0; r < manifest.rows; ++r) {
        for (int k = 0; k < manifest.cols; ++k) { e(r, k) = get_f64(bin); }
      }
      const bool ok = manifest.rows * manifest.cols == 0 || !std::isnan(e(0, 0));
      f.values.back().push_back(std::move(e));
      f.valid.back().push_back(ok ? 1 : 0);
    }
  }
  if (bin.peek() != std::char_traits<char>::eof()) { throw Error("snapshot data file has trailing bytes"); }
  return f;
}

}  // namespace gauge::base
