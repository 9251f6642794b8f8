#include "fbopt/qp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace fbopt {

namespace {

constexpr double kActiveRelTol = 1e-9;

void validate(const QpProblem& qp) {
  const auto p = qp.Q.rows();
  require_size(qp.Q.cols(), p, "QP Hessian columns");
  require_size(qp.c.size(), p, "QP linear term");
  require_size(qp.M.cols(), p, "QP constraint columns");
  require_size(qp.r.size(), qp.M.rows(), "QP right-hand side");
  if (!qp.Q.allFinite() || !qp.c.allFinite() || !qp.M.allFinite() ||
      !qp.r.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "QP data must be finite");
  }
  const double asym = (qp.Q - qp.Q.transpose()).cwiseAbs().maxCoeff();
  if (p > 0 && asym > 1e-12 * std::max(1.0, qp.Q.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotPositiveDefinite, "QP Hessian is not symmetric");
  }
}

Eigen::LLT<Matrix> factorize(const Matrix& Q) {
  Eigen::LLT<Matrix> llt(Q);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "QP Hessian is not positive definite");
  }
  // LLT only reads the lower triangle and accepts tiny negative pivots as
  // long as they are not exactly zero; check the diagonal of the factor.
  const Matrix L = llt.matrixL();
  if (Q.rows() > 0 && (L.diagonal().array() <= 0.0).any()) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "QP Hessian is not positive definite");
  }
  return llt;
}

struct ActiveSetResult {
  Vector x;
  Vector multipliers;
  int iterations = 0;
};

/**
 * Primal active-set iteration from a feasible x with an empty working set.
 *
 * Each iteration solves the equality-constrained subproblem on the working set
 * by the range-space method, with p also closing any residual gap on the
 * working rows so that M_W (x + p) = r_W:
 *
 *   S = M_W Q⁻¹ M_Wᵀ,  λ = −S⁻¹ (M_W Q⁻¹ g + r_W − M_W x),  p = −Q⁻¹(g + M_Wᵀλ)
 */
ActiveSetResult primal_active_set(const Matrix& Q, const Eigen::LLT<Matrix>& llt,
                                  const Vector& c, const Matrix& M,
                                  const Vector& r, Vector x, int max_iterations) {
  const auto m = M.rows();
  std::vector<int> working;
  std::vector<char> in_working(static_cast<size_t>(m), 0);
  Vector lambda;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const Vector g = Q * x + c;
    const Vector qg = llt.solve(g);
    Vector p;
    if (working.empty()) {
      lambda.resize(0);
      p = -qg;
    } else {
      const Matrix Mw = select_rows(M, working);
      const Matrix Z = llt.solve(Mw.transpose());
      const Matrix S = Mw * Z;
      Vector gap(static_cast<Eigen::Index>(working.size()));
      for (size_t k = 0; k < working.size(); ++k) {
        gap(static_cast<Eigen::Index>(k)) = r(working[k]) - M.row(working[k]).dot(x);
      }
      lambda = S.ldlt().solve(-(Mw * qg) - gap);
      p = -(qg + Z * lambda);
    }

    const double step_tol = 1e-11 * (1.0 + x.lpNorm<Eigen::Infinity>());
    if (p.size() == 0 || p.lpNorm<Eigen::Infinity>() <= step_tol) {
      // Stationary on the working set; drop the most negative multiplier.
      x += p;
      const double dual_tol =
          1e-12 * (1.0 + (lambda.size() ? lambda.lpNorm<Eigen::Infinity>()
                                        : 0.0));
      int leave = -1;
      double most_negative = -dual_tol;
      int leave_row = std::numeric_limits<int>::max();
      for (size_t k = 0; k < working.size(); ++k) {
        const double value = lambda(static_cast<Eigen::Index>(k));
        const int row = working[k];
        if (value < most_negative ||
            (value == most_negative && leave >= 0 && row < leave_row)) {
          most_negative = value;
          leave = static_cast<int>(k);
          leave_row = row;
        }
      }
      if (leave < 0) {
        ActiveSetResult result;
        result.x = std::move(x);
        result.multipliers = Vector::Zero(m);
        for (size_t k = 0; k < working.size(); ++k) {
          result.multipliers(working[k]) =
              lambda(static_cast<Eigen::Index>(k));
        }
        result.iterations = iter + 1;
        return result;
      }
      in_working[static_cast<size_t>(working[static_cast<size_t>(leave)])] = 0;
      working.erase(working.begin() + leave);
      continue;
    }

    // Ratio test; strict comparison in ascending row order keeps the lowest
    // index among ties.
    double step = 1.0;
    int blocking = -1;
    const double p_norm = p.norm();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in_working[static_cast<size_t>(i)]) {
        continue;
      }
      const double mp = M.row(i).dot(p);
      if (mp <= 1e-14 * M.row(i).norm() * p_norm) {
        continue;
      }
      const double ratio = std::max(0.0, (r(i) - M.row(i).dot(x)) / mp);
      if (ratio < step) {
        step = ratio;
        blocking = static_cast<int>(i);
      }
    }
    x += step * p;
    if (blocking >= 0) {
      working.push_back(blocking);
      in_working[static_cast<size_t>(blocking)] = 1;
    }
  }
  throw Error(ErrorCode::MaxIterations,
              "active-set method did not terminate in " +
                  std::to_string(max_iterations) + " iterations");
}

std::vector<int> active_rows(const QpProblem& qp, const Vector& w,
                             double scale) {
  std::vector<int> active;
  for (int i = 0; i < qp.rows(); ++i) {
    if (std::abs(qp.M.row(i).dot(w) - qp.r(i)) <= kActiveRelTol * scale) {
      active.push_back(i);
    }
  }
  return active;
}

void finalize(const QpProblem& qp, QpSolution& solution, double scale) {
  solution.active = active_rows(qp, solution.w, scale);
  if (!solution.active.empty()) {
    const Matrix rows = select_rows(qp.M, solution.active);
    solution.rank_deficient_active_set =
        row_rank(rows) < static_cast<int>(solution.active.size());
  }
  solution.kkt_residual = kkt_residual(qp, solution.w, solution.multipliers);
}

}  // namespace

double QpProblem::objective(const Vector& w) const {
  return 0.5 * w.dot(Q * w) + c.dot(w);
}

double qp_scale(const QpProblem& qp) {
  return 1.0 + qp.c.norm() + qp.r.norm();
}

Matrix select_rows(const Matrix& M, const std::vector<int>& indices) {
  Matrix out(static_cast<Eigen::Index>(indices.size()), M.cols());
  for (size_t k = 0; k < indices.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = M.row(indices[k]);
  }
  return out;
}

int row_rank(const Matrix& rows, double rel_tol) {
  if (rows.rows() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Matrix> svd(rows);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) {
    return 0;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) {
      ++rank;
    }
  }
  return rank;
}

QpSolution solve_qp(const QpProblem& qp, const QpOptions& options) {
  validate(qp);
  const int p = qp.dim();
  const int m = qp.rows();
  const int max_iterations = options.max_iterations > 0
                                 ? options.max_iterations
                                 : 10 * (p + m) + 50;
  const double scale = qp_scale(qp);
  const double feas_tol = 1e-12 * scale;
  const auto llt = factorize(qp.Q);

  Vector start = Vector::Zero(p);
  int phase1_iterations = 0;

  if (m > 0 && qp.r.minCoeff() < -feas_tol) {
    // Elastic phase 1 on z = (w, t):
    //   minimize ½wᵀQw + cᵀw + ½t² + Kt  s.t.  Mw − t ≤ r,  −t ≤ 0
    // For K above the ℓ1 norm of the optimal multipliers the minimizer has
    // t = 0; otherwise K grows until it reaches its cap.
    Matrix Qe = Matrix::Zero(p + 1, p + 1);
    Qe.topLeftCorner(p, p) = qp.Q;
    Qe(p, p) = 1.0;
    const auto llt_e = factorize(Qe);

    Matrix Me = Matrix::Zero(m + 1, p + 1);
    Me.topLeftCorner(m, p) = qp.M;
    Me.col(p).head(m).setConstant(-1.0);
    Me(m, p) = -1.0;
    Vector re = Vector::Zero(m + 1);
    re.head(m) = qp.r;

    Vector z = Vector::Zero(p + 1);
    z(p) = std::max(0.0, -qp.r.minCoeff());

    const double K_max = 1e10 * scale;
    bool feasible = false;
    for (double K = 1e2 * scale; K <= K_max; K *= 1e2) {
      Vector ce = Vector::Zero(p + 1);
      ce.head(p) = qp.c;
      ce(p) = K;
      auto result = primal_active_set(Qe, llt_e, ce, Me, re, z,
                                      max_iterations + 10);
      phase1_iterations += result.iterations;
      z = std::move(result.x);
      if (z(p) <= feas_tol) {
        feasible = true;
        break;
      }
    }
    if (!feasible) {
      throw Error(ErrorCode::Infeasible,
                  "no w satisfies Mw <= r (residual infeasibility " +
                      std::to_string(z(p)) + ")");
    }
    start = z.head(p);
  }

  auto result =
      primal_active_set(qp.Q, llt, qp.c, qp.M, qp.r, start, max_iterations);

  QpSolution solution;
  solution.w = std::move(result.x);
  solution.multipliers = std::move(result.multipliers);
  solution.iterations = phase1_iterations + result.iterations;
  finalize(qp, solution, scale);
  return solution;
}

QpSolution enumerate_oracle(const QpProblem& qp) {
  validate(qp);
  const int p = qp.dim();
  const int m = qp.rows();
  if (m > 20) {
    throw Error(ErrorCode::InvalidArgument,
                "enumerate_oracle is limited to 20 rows");
  }
  const double scale = qp_scale(qp);
  factorize(qp.Q);

  struct Candidate {
    Vector w;
    Vector multipliers;
    double objective;
    bool rank_deficient;
  };
  std::optional<Candidate> best;
  int evaluated = 0;

  const std::uint32_t subsets = std::uint32_t{1} << m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const int k = std::popcount(mask);
    if (k > p) {
      continue;
    }
    std::vector<int> rows;
    for (int i = 0; i < m; ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        rows.push_back(i);
      }
    }
    const Matrix Ms = select_rows(qp.M, rows);

    // [Q  Msᵀ] [w]   [−c ]
    // [Ms  0 ] [λ] = [ r_S]
    Matrix kkt = Matrix::Zero(p + k, p + k);
    kkt.topLeftCorner(p, p) = qp.Q;
    kkt.topRightCorner(p, k) = Ms.transpose();
    kkt.bottomLeftCorner(k, p) = Ms;
    Vector rhs(p + k);
    rhs.head(p) = -qp.c;
    for (int j = 0; j < k; ++j) {
      rhs(p + j) = qp.r(rows[static_cast<size_t>(j)]);
    }

    const bool deficient = row_rank(Ms) < k;
    Vector sol;
    if (deficient) {
      sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    } else {
      sol = kkt.fullPivLu().solve(rhs);
    }
    ++evaluated;

    const Vector w = sol.head(p);
    const Vector lambda = sol.tail(k);
    if (m > 0 && ((qp.M * w - qp.r).array() > kActiveRelTol * scale).any()) {
      continue;
    }
    if (deficient) {
      // A least-squares solve may not satisfy the subset equations.
      if ((Ms * w - rhs.tail(k)).norm() > kActiveRelTol * scale) {
        continue;
      }
    }
    const double dual_tol =
        1e-10 * (1.0 + (k ? lambda.lpNorm<Eigen::Infinity>() : 0.0));
    if (k > 0 && (lambda.array() < -dual_tol).any()) {
      continue;
    }

    Candidate candidate{w, Vector::Zero(m), qp.objective(w), deficient};
    for (int j = 0; j < k; ++j) {
      candidate.multipliers(rows[static_cast<size_t>(j)]) = lambda(j);
    }
    if (!best) {
      best = std::move(candidate);
      continue;
    }
    const double tie = 1e-12 * (1.0 + std::abs(best->objective));
    if (candidate.objective < best->objective - tie ||
        (std::abs(candidate.objective - best->objective) <= tie &&
         best->rank_deficient && !candidate.rank_deficient)) {
      best = std::move(candidate);
    }
  }

  if (!best) {
    throw Error(ErrorCode::Infeasible,
                "no KKT candidate among active subsets");
  }
  QpSolution solution;
  solution.w = std::move(best->w);
  solution.multipliers = std::move(best->multipliers);
  solution.iterations = evaluated;
  finalize(qp, solution, scale);
  solution.rank_deficient_active_set =
      solution.rank_deficient_active_set || best->rank_deficient;
  return solution;
}

double kkt_residual(const QpProblem& qp, const Vector& w,
                    const Vector& multipliers) {
  require_size(w.size(), qp.dim(), "primal point");
  require_size(multipliers.size(), qp.rows(), "multipliers");
  double residual = (qp.Q * w + qp.c).norm();
  if (qp.rows() == 0) {
    return residual;
  }
  residual = (qp.Q * w + qp.c + qp.M.transpose() * multipliers).norm();
  const Vector slack = qp.M * w - qp.r;
  residual += multipliers.cwiseProduct(slack).cwiseAbs().sum();
  residual += slack.cwiseMax(0.0).norm();
  residual += (-multipliers).cwiseMax(0.0).norm();
  return residual;
}

}  // namespace fbopt
