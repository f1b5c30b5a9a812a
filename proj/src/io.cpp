#include "gfflab/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gfflab/errors.hpp"

namespace gfflab::io {

namespace {

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw PreconditionError("truncated binary field");
  return value;
}

std::vector<std::vector<double>> read_numeric_rows(const std::filesystem::path& path,
                                                   const char* schema, const char* header,
                                                   std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw MissingDataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != schema) {
    throw MissingDataError(path.string() + ": missing schema line '" + schema + "'");
  }
  if (!std::getline(in, line) || line != header) {
    throw MissingDataError(path.string() + ": unexpected header");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != columns) throw MissingDataError(path.string() + ": malformed row");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_green_csv(std::ostream& out, const GreenOperator& g) {
  const BoxSpec& box = g.box();
  const Eigen::MatrixXd m = g.to_dense();
  out << "x1,y1,x2,y2,g\n";
  const auto count = box.interior_count();
  for (std::size_t i = 0; i < count; ++i) {
    const Site a = box.interior_site(i);
    for (std::size_t j = 0; j < count; ++j) {
      const Site b = box.interior_site(j);
      out << a.x << ',' << a.y << ',' << b.x << ',' << b.y << ','
          << g12(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
    }
  }
}

void write_variance_csv(std::ostream& out, const Field& profile) {
  out << "x1,y1,x2,y2,g\n";
  const int n = profile.box().side();
  for (int x = 1; x < n; ++x) {
    for (int y = 1; y < n; ++y) {
      out << x << ',' << y << ',' << x << ',' << y << ',' << g12(profile(x, y)) << '\n';
    }
  }
}

void write_field_csv(std::ostream& out, const Field& field) {
  out << "x,y,value\n";
  const int n = field.box().side();
  for (int x = 0; x <= n; ++x) {
    for (int y = 0; y <= n; ++y) out << x << ',' << y << ',' << g17(field(x, y)) << '\n';
  }
}

void write_field_binary(std::ostream& out, const Field& field) {
  put_le<std::int32_t>(out, field.box().side());
  for (double v : field.values()) put_le<double>(out, v);
}

Field read_field_binary(std::istream& in) {
  const auto side = get_le<std::int32_t>(in);
  const BoxSpec box = BoxSpec::from_side(side);
  std::vector<double> values(box.site_count());
  for (double& v : values) v = get_le<double>(in);
  return Field(box, std::move(values));
}

void write_levels_csv(std::ostream& out, const Decomposition& d) {
  out << "level,x,y,value\n";
  const int n = d.box.side();
  for (std::size_t k = 0; k < d.levels.size(); ++k) {
    for (int x = 0; x <= n; ++x) {
      for (int y = 0; y <= n; ++y) {
        out << k + 1 << ',' << x << ',' << y << ',' << g17(d.levels[k](x, y)) << '\n';
      }
    }
  }
}

std::string format_extremes_row(const MaxStats& s) {
  std::ostringstream out;
  out << s.n << ',' << s.side << ',' << s.samples << ',' << g17(s.mean_max) << ','
      << g17(s.se_mean) << ',' << g17(s.var_max) << ',' << g17(s.dh_gap) << ',' << g17(s.dh_se);
  for (double q : s.quantiles) out << ',' << g17(q);
  return out.str();
}

std::vector<MaxStats> read_extremes_csv(const std::filesystem::path& path) {
  std::vector<MaxStats> out;
  for (const auto& r : read_numeric_rows(path, kExtremesSchema, kExtremesHeader, 13)) {
    MaxStats s;
    s.n = static_cast<int>(r[0]);
    s.side = static_cast<int>(r[1]);
    s.samples = static_cast<std::size_t>(r[2]);
    s.mean_max = r[3];
    s.se_mean = r[4];
    s.var_max = r[5];
    s.dh_gap = r[6];
    s.dh_se = r[7];
    for (std::size_t q = 0; q < 5; ++q) s.quantiles[q] = r[8 + q];
    out.push_back(s);
  }
  return out;
}

void write_brw_csv(std::ostream& out, const std::vector<BrwGeneration>& rows) {
  out << kBrwSchema << '\n' << kBrwHeader << '\n';
  for (const auto& r : rows) {
    out << r.generation << ',' << g17(r.mean) << ',' << g17(r.median) << ',' << g17(r.q10) << ','
        << g17(r.q90) << ',' << g17(r.dh_gap) << '\n';
  }
}

std::vector<BrwGeneration> read_brw_csv(const std::filesystem::path& path) {
  std::vector<BrwGeneration> out;
  for (const auto& r : read_numeric_rows(path, kBrwSchema, kBrwHeader, 6)) {
    out.push_back({static_cast<int>(r[0]), r[1], r[2], r[3], r[4], r[5]});
  }
  return out;
}

void write_cdf_csv(std::ostream& out, const CdfGrid& cdf) {
  out << "x,F\n";
  for (std::size_t i = 0; i < cdf.size(); ++i) out << g17(cdf.x(i)) << ',' << g17(cdf.values()[i]) << '\n';
}

}  // namespace gfflab::io
