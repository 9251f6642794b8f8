#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace fbopt {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

/// Failure categories surfaced by the library.
enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  Infeasible,
  NotPositiveDefinite,
  MaxIterations,
  LinearizedSetEmpty,
  NotFeasible,
  UnknownProblem,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_{code} {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Throws DimensionMismatch when `actual != expected`.
inline void require_size(Eigen::Index actual, Eigen::Index expected,
                         std::string_view what) {
  if (actual != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has size " + std::to_string(actual) +
                    ", expected " + std::to_string(expected));
  }
}

/// Default absolute tolerance for deciding constraint activity.
inline constexpr double kActiveTol = 1e-9;

}  // namespace fbopt
