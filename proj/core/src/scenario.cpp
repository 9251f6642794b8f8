#include "fbopt/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fbopt/sampling.hpp"

namespace fbopt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::Parse, "invalid number '" + std::string(text) +
                                      "' for key '" + std::string(key) + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view key) {
  text = trim(text);
  Int value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::Parse, "invalid integer '" + std::string(text) +
                                      "' for key '" + std::string(key) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, std::string_view key) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    values.push_back(parse_double(text.substr(0, comma), key));
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  return values;
}

/// Calls visit(key, value) for every `key = value` line.
template <typename Visitor>
void for_each_entry(std::string_view text, Visitor&& visit) {
  int line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size()
                                                         : newline + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    visit(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Projected ? "projected" : "saddle";
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig config;
  for_each_entry(text, [&](std::string_view key, std::string_view value) {
    if (key == "problem" || key == "problem_name") {
      config.problem_name = std::string(value);
    } else if (key == "scheme") {
      if (value == "projected") {
        config.scheme = Scheme::Projected;
      } else if (value == "saddle") {
        config.scheme = Scheme::Saddle;
      } else {
        throw Error(ErrorCode::Parse,
                    "unknown scheme '" + std::string(value) + "'");
      }
    } else if (key == "alpha") {
      config.alpha = parse_double(value, key);
    } else if (key == "gamma") {
      config.gamma = parse_double(value, key);
    } else if (key == "rho") {
      config.rho = parse_double(value, key);
    } else if (key == "u0") {
      const std::vector<double> values = parse_list(value, key);
      config.u0 = Eigen::Map<const Vector>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
    } else if (key == "u0_grid") {
      config.u0_grid = parse_integer<int>(value, key);
    } else if (key == "max_iters") {
      config.max_iters = parse_integer<int>(value, key);
    } else if (key == "stationarity_tol") {
      config.stationarity_tol = parse_double(value, key);
    } else if (key == "seed") {
      config.seed = parse_integer<std::uint64_t>(value, key);
    } else if (key == "xi") {
      config.xi = parse_double(value, key);
    } else if (key == "output_dir") {
      config.output_dir = std::string(value);
    } else {
      throw Error(ErrorCode::Parse, "unknown key '" + std::string(key) + "'");
    }
  });
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path));
}

void validate_scenario(const ScenarioConfig& config,
                       const ProblemSpec& problem) {
  if (!(config.alpha > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  }
  if (config.max_iters < 0) {
    throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 0");
  }
  if (!(config.stationarity_tol >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "stationarity_tol must be >= 0");
  }
  const bool saddle = config.scheme == Scheme::Saddle;
  if (saddle != config.gamma.has_value() || saddle != config.rho.has_value()) {
    throw Error(ErrorCode::InvalidArgument,
                "gamma and rho must be given exactly for scheme = saddle");
  }
  if (saddle && (!(*config.gamma > 0.0) || !(*config.rho >= 0.0))) {
    throw Error(ErrorCode::InvalidArgument,
                "gamma must be positive and rho non-negative");
  }
  if (config.xi && !(*config.xi > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "xi must be positive");
  }
  if (config.u0.size() == 0 && config.u0_grid <= 0) {
    throw Error(ErrorCode::InvalidArgument, "u0 or u0_grid is required");
  }
  if (config.u0.size() > 0 && config.u0_grid > 0) {
    throw Error(ErrorCode::InvalidArgument,
                "u0 and u0_grid are mutually exclusive");
  }
  if (config.u0.size() > 0) {
    require_size(config.u0.size(), problem.input_dim(), "u0");
    if (!problem.input_set.contains(config.u0, kActiveTol)) {
      throw Error(ErrorCode::NotFeasible, "u0 lies outside U");
    }
  }
}

std::vector<Vector> initial_conditions(const ScenarioConfig& config,
                                       const ProblemSpec& problem) {
  if (config.u0_grid > 0) {
    Sampler grid;
    grid.kind = Sampler::Kind::Grid;
    grid.points_per_dim = config.u0_grid;
    return sample_points(problem.input_set, grid);
  }
  return {config.u0};
}

ParameterGrid parse_grid(std::string_view text) {
  ParameterGrid grid;
  for_each_entry(text, [&](std::string_view key, std::string_view value) {
    if (key != "alpha" && key != "gamma" && key != "rho" &&
        key != "stationarity_tol") {
      throw Error(ErrorCode::Parse,
                  "grid key '" + std::string(key) + "' is not sweepable");
    }
    grid.emplace_back(std::string(key), parse_list(value, key));
  });
  return grid;
}

ParameterGrid load_grid(const std::filesystem::path& path) {
  return parse_grid(read_file(path));
}

std::vector<ScenarioConfig> expand_grid(const ScenarioConfig& base,
                                        const ParameterGrid& grid) {
  if (grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "parameter grid is empty");
  }
  std::vector<ScenarioConfig> configs{base};
  for (const auto& [key, values] : grid) {
    if (values.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid entry '" + key + "' has no values");
    }
    std::vector<ScenarioConfig> next;
    next.reserve(configs.size() * values.size());
    for (const ScenarioConfig& config : configs) {
      for (double value : values) {
        ScenarioConfig c = config;
        if (key == "alpha") {
          c.alpha = value;
        } else if (key == "gamma") {
          c.gamma = value;
        } else if (key == "rho") {
          c.rho = value;
        } else {
          c.stationarity_tol = value;
        }
        next.push_back(std::move(c));
      }
    }
    configs = std::move(next);
  }
  return configs;
}

}  // namespace fbopt
