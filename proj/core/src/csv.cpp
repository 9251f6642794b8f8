#include "fbopt/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace fbopt {

namespace {

void append_double(std::string& out, double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(),
                                       buffer.data() + buffer.size(), value,
                                       std::chars_format::general, 17);
  out.append(buffer.data(), ptr);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) {
      return fields;
    }
    line.remove_prefix(comma + 1);
  }
}

double parse_field(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::Parse, "bad CSV number '" + std::string(field) + "'");
  }
  return value;
}

int count_prefix(const std::vector<std::string_view>& header, size_t& pos,
                 std::string_view prefix) {
  int count = 0;
  while (pos < header.size() && header[pos].substr(0, prefix.size()) == prefix &&
         header[pos].size() > prefix.size() &&
         header[pos] == std::string(prefix) + std::to_string(count + 1)) {
    ++count;
    ++pos;
  }
  return count;
}

}  // namespace

std::string csv_header(int input_dim, int output_dim, int output_rows) {
  std::string header = "iter";
  for (int i = 1; i <= input_dim; ++i) {
    header += ",u" + std::to_string(i);
  }
  for (int i = 1; i <= output_dim; ++i) {
    header += ",y" + std::to_string(i);
  }
  header += ",V,residual,max_violation";
  for (int i = 1; i <= output_rows; ++i) {
    header += ",mu" + std::to_string(i);
  }
  return header;
}

std::string to_csv(const TrajectoryLog& log) {
  std::string out = csv_header(log.input_dim, log.output_dim, log.output_rows);
  out += '\n';
  for (const TrajectoryRow& row : log.rows) {
    out += std::to_string(row.iter);
    for (Eigen::Index i = 0; i < row.u.size(); ++i) {
      out += ',';
      append_double(out, row.u(i));
    }
    for (Eigen::Index i = 0; i < row.y.size(); ++i) {
      out += ',';
      append_double(out, row.y(i));
    }
    for (double value : {row.value, row.residual, row.max_violation}) {
      out += ',';
      append_double(out, value);
    }
    for (Eigen::Index i = 0; i < row.mu.size(); ++i) {
      out += ',';
      append_double(out, row.mu(i));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  }
  const std::string text = to_csv(log);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "write to " + path.string() + " failed");
  }
}

TrajectoryLog parse_csv(std::string_view text) {
  auto next_line = [&text]() {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size()
                                                         : newline + 1);
    return line;
  };

  const std::vector<std::string_view> header = split(next_line());
  size_t pos = 0;
  if (header.empty() || header[pos++] != "iter") {
    throw Error(ErrorCode::Parse, "CSV header must start with 'iter'");
  }
  TrajectoryLog log;
  log.input_dim = count_prefix(header, pos, "u");
  log.output_dim = count_prefix(header, pos, "y");
  if (pos + 3 > header.size() || header[pos] != "V" ||
      header[pos + 1] != "residual" || header[pos + 2] != "max_violation") {
    throw Error(ErrorCode::Parse, "unexpected CSV header layout");
  }
  pos += 3;
  log.output_rows = count_prefix(header, pos, "mu");
  if (pos != header.size()) {
    throw Error(ErrorCode::Parse, "unexpected trailing CSV columns");
  }

  const size_t width = header.size();
  while (!text.empty()) {
    const std::string_view line = next_line();
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string_view> fields = split(line);
    if (fields.size() != width) {
      throw Error(ErrorCode::Parse, "CSV row has wrong number of fields");
    }
    TrajectoryRow row;
    int iter = 0;
    const auto [ptr, ec] = std::from_chars(
        fields[0].data(), fields[0].data() + fields[0].size(), iter);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
      throw Error(ErrorCode::Parse, "bad iteration index");
    }
    row.iter = iter;
    size_t f = 1;
    row.u.resize(log.input_dim);
    for (int i = 0; i < log.input_dim; ++i) {
      row.u(i) = parse_field(fields[f++]);
    }
    row.y.resize(log.output_dim);
    for (int i = 0; i < log.output_dim; ++i) {
      row.y(i) = parse_field(fields[f++]);
    }
    row.value = parse_field(fields[f++]);
    row.residual = parse_field(fields[f++]);
    row.max_violation = parse_field(fields[f++]);
    row.mu.resize(log.output_rows);
    for (int i = 0; i < log.output_rows; ++i) {
      row.mu(i) = parse_field(fields[f++]);
    }
    log.rows.push_back(std::move(row));
  }
  return log;
}

TrajectoryLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace fbopt
