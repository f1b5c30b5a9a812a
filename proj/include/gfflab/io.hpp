#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfflab/box.hpp"
#include "gfflab/brw.hpp"
#include "gfflab/extremes.hpp"
#include "gfflab/green.hpp"
#include "gfflab/hierarchy.hpp"

namespace gfflab::io {

inline constexpr const char* kExtremesSchema = "# gfflab-extremes schema=1";
inline constexpr const char* kBrwSchema = "# gfflab-brw schema=1";
inline constexpr const char* kExtremesHeader =
    "n,N,samples,mean_max,se_mean,var_max,dh_gap,dh_se,q10,q25,q50,q75,q90";
inline constexpr const char* kBrwHeader = "generation,mean,median,q10,q90,dh_gap";

/// `x1,y1,x2,y2,g` over all interior pairs, 12 significant digits.
void write_green_csv(std::ostream& out, const GreenOperator& g);
/// Same header with x1 = x2, y1 = y2.
void write_variance_csv(std::ostream& out, const Field& profile);

/// `x,y,value` over all sites in storage order.
void write_field_csv(std::ostream& out, const Field& field);
/// int32 N (little endian) followed by (N+1)^2 little-endian doubles.
void write_field_binary(std::ostream& out, const Field& field);
Field read_field_binary(std::istream& in);

/// `level,x,y,value`.
void write_levels_csv(std::ostream& out, const Decomposition& d);

std::string format_extremes_row(const MaxStats& s);
/// Reads rows below the schema line; throws MissingDataError on a bad file.
std::vector<MaxStats> read_extremes_csv(const std::filesystem::path& path);

void write_brw_csv(std::ostream& out, const std::vector<BrwGeneration>& rows);
std::vector<BrwGeneration> read_brw_csv(const std::filesystem::path& path);
/// `x,F` over grid nodes.
void write_cdf_csv(std::ostream& out, const CdfGrid& cdf);

}  // namespace gfflab::io
