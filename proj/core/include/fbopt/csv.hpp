#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fbopt/trajectory.hpp"

namespace fbopt {

/// iter,u1..up,y1..yn,V,residual,max_violation,mu1..mul
std::string csv_header(int input_dim, int output_dim, int output_rows);

/// Header plus one line per row; doubles use 17 significant digits.
std::string to_csv(const TrajectoryLog& log);

/// Throws Io when the file cannot be written.
void write_csv(const TrajectoryLog& log, const std::filesystem::path& path);

/// Inverse of to_csv. Dimensions come from the header; status is not stored.
TrajectoryLog parse_csv(std::string_view text);

TrajectoryLog read_csv(const std::filesystem::path& path);

}  // namespace fbopt
