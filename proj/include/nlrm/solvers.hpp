#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/linalg.hpp"
#include "nlrm/projections.hpp"
#include "nlrm/solver_types.hpp"

namespace nlrm {

enum class ProjectionMethod { kTangent, kAlternating };

inline const char* method_name(ProjectionMethod m) {
  return m == ProjectionMethod::kTangent ? "tap" : "ap";
}

namespace detail {

inline void check_solver_input(const DenseMatrix& a, const SolverConfig& cfg,
                               std::vector<std::string>& warnings) {
  cfg.validate();
  if (!a.all_finite()) {
    throw NumericError("solver input contains non-finite entries");
  }
  if (cfg.rank > std::min(a.rows(), a.cols())) {
    throw ShapeError("rank " + std::to_string(cfg.rank) + " exceeds min dimension of " +
                     shape_string(a));
  }
  if (frobenius_norm(a) == 0.0) {
    throw DomainError("solver input has zero norm");
  }
  if (a.min_entry() < 0.0) {
    warnings.emplace_back("input has negative entries; proceeding");
  }
}

inline bool rank_collapsed(const SvdTriplet& x, Index m, Index n) {
  if (x.s.empty() || x.s.front() == 0.0) {
    return true;
  }
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m, n)) *
                     x.s.front();
  return x.s.back() <= tol;
}

/**
 * Shared driver. Iteration 1 is X_1 = pi_1(A); afterwards `step(x, y)`
 * produces X_{k+1} from (X_k, Y_k). The run stops as soon as an iterate is
 * entrywise nonnegative (it is then a fixed point of both maps), when the
 * relative change of the error drops below the tolerance, or on the
 * iteration/time budget.
 */
template <typename Step>
ApproximationResult run_projections(const DenseMatrix& a, const SolverConfig& cfg, Step&& step,
                                    const IterateObserver& observer) {
  ApproximationResult result;
  check_solver_input(a, cfg, result.warnings);
  const double norm_a = frobenius_norm(a);

  Stopwatch clock;
  double previous_error = 0.0;
  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    clock.start();
    result.x = k == 1 ? project_fixed_rank(a, cfg.rank) : step(result.x, result.y);
    const DenseMatrix x_dense = reconstruct(result.x);
    result.y = project_nonnegative(x_dense);
    const double error = frobenius_distance(a, x_dense) / norm_a;
    const double min_entry = x_dense.min_entry();
    clock.stop();

    result.trace.push({k, error, clock.seconds(), min_entry});
    result.rel_error_x = error;
    if (observer) {
      observer({k, result.x, x_dense, result.y});
    }

    if (min_entry >= 0.0 || (k > 1 && relative_change_below(error, previous_error,
                                                            cfg.rel_change_tol))) {
      result.converged = true;
      break;
    }
    if (cfg.time_limit && clock.seconds() >= *cfg.time_limit) {
      break;
    }
    previous_error = error;
  }

  result.rel_error_y = frobenius_distance(a, result.y) / norm_a;
  result.degenerate_rank = rank_collapsed(result.x, a.rows(), a.cols());
  if (result.degenerate_rank) {
    result.warnings.emplace_back("final iterate has fewer than r nonzero singular values");
  }
  return result;
}

}  // namespace detail

/// Alternating projections: X_{k+1} = pi_1(Y_k) by a full thin SVD of the
/// dense Y_k, Y_{k+1} = pi_2(X_{k+1}).
inline ApproximationResult ap_solve(const DenseMatrix& a, const SolverConfig& cfg,
                                    const IterateObserver& observer = {}) {
  const Index r = cfg.rank;
  return detail::run_projections(
      a, cfg, [r](const SvdTriplet&, const DenseMatrix& y) { return project_fixed_rank(y, r); },
      observer);
}

/// Tangent-space alternating projections: after the initial truncated SVD of
/// A every step projects Y_k onto the tangent space at X_k in factored form
/// and retracts with an SVD of the small core.
inline ApproximationResult tap_solve(const DenseMatrix& a, const SolverConfig& cfg,
                                     const IterateObserver& observer = {}) {
  const Index r = cfg.rank;
  return detail::run_projections(
      a, cfg,
      [r](const SvdTriplet& x, const DenseMatrix& y) {
        return retract_to_rank(tangent_project_structured(TangentFrame::from(x), y), r);
      },
      observer);
}

inline ApproximationResult solve(ProjectionMethod method, const DenseMatrix& a,
                                 const SolverConfig& cfg, const IterateObserver& observer = {}) {
  return method == ProjectionMethod::kTangent ? tap_solve(a, cfg, observer)
                                              : ap_solve(a, cfg, observer);
}

}  // namespace nlrm
