#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/linalg.hpp"
#include "nlrm/random.hpp"
#include "nlrm/solver_types.hpp"

namespace nlrm {

/// Factor pair of a nonnegative factorization A ~ B C.
struct NmfResult {
  DenseMatrix b;  // m x r
  DenseMatrix c;  // r x n
  IterationTrace trace;
  double rel_error = 0.0;
  bool converged = false;
};

enum class NmfMethod { kMultiplicative, kHals };

inline const char* method_name(NmfMethod m) {
  return m == NmfMethod::kMultiplicative ? "mu" : "hals";
}

/// Guard added to every update denominator.
inline constexpr double kNmfEpsilon = 1e-12;

namespace detail {

inline void check_nmf_input(const DenseMatrix& a, const SolverConfig& cfg) {
  if (cfg.rank < 1) {
    throw ConfigError("rank must be >= 1");
  }
  if (!(cfg.rel_change_tol > 0.0)) {
    throw ConfigError("rel_change_tol must be > 0");
  }
  if (!cfg.seed) {
    throw ConfigError("NMF initialization needs a seed");
  }
  if (!a.all_finite()) {
    throw NumericError("NMF input contains non-finite entries");
  }
  if (a.min_entry() < 0.0) {
    throw DomainError("NMF input must be nonnegative");
  }
  if (frobenius_norm(a) == 0.0) {
    throw DomainError("NMF input has zero norm");
  }
}

/// Uniform(0,1) factors; B fills stream 1 and C stream 2 in row-major order.
inline std::pair<DenseMatrix, DenseMatrix> nmf_initial_factors(Index m, Index n, Index r,
                                                               std::uint64_t seed) {
  DenseMatrix b(m, r);
  DenseMatrix c(r, n);
  const CounterRng rng_b(seed, 1);
  const CounterRng rng_c(seed, 2);
  for (std::size_t i = 0; i < b.data().size(); ++i) {
    b.data()[i] = rng_b.uniform_at(i);
  }
  for (std::size_t i = 0; i < c.data().size(); ++i) {
    c.data()[i] = rng_c.uniform_at(i);
  }
  return {std::move(b), std::move(c)};
}

// C <- C .* (B^T A) ./ (B^T B C + eps), then the symmetric update of B.
inline void mu_update(const DenseMatrix& a, DenseMatrix& b, DenseMatrix& c) {
  {
    const DenseMatrix numer = matmul_tn(b, a);
    const DenseMatrix denom = matmul(matmul_tn(b, b), c);
    c.eigen().array() *= numer.eigen().array() / (denom.eigen().array() + kNmfEpsilon);
  }
  const DenseMatrix numer = matmul_nt(a, c);
  const DenseMatrix denom = matmul(b, matmul_nt(c, c));
  b.eigen().array() *= numer.eigen().array() / (denom.eigen().array() + kNmfEpsilon);
}

// One sweep of rank-one block updates over the rows of C, then the columns of B.
inline void hals_update(const DenseMatrix& a, DenseMatrix& b, DenseMatrix& c) {
  const Index r = b.cols();
  {
    const DenseMatrix p = matmul_tn(b, a);  // r x n
    const DenseMatrix g = matmul_tn(b, b);  // r x r
    auto& ce = c.eigen();
    for (Index k = 0; k < r; ++k) {
      const Eigen::RowVectorXd residual = p.eigen().row(k) - g.eigen().row(k) * ce;
      ce.row(k) = (ce.row(k) + residual / (g(k, k) + kNmfEpsilon)).cwiseMax(0.0);
    }
  }
  const DenseMatrix p = matmul_nt(a, c);  // m x r
  const DenseMatrix g = matmul_nt(c, c);  // r x r
  auto& be = b.eigen();
  for (Index k = 0; k < r; ++k) {
    const Eigen::VectorXd residual = p.eigen().col(k) - be * g.eigen().col(k);
    be.col(k) = (be.col(k) + residual / (g(k, k) + kNmfEpsilon)).cwiseMax(0.0);
  }
}

template <typename Update>
NmfResult run_nmf(const DenseMatrix& a, const SolverConfig& cfg, Update&& update) {
  check_nmf_input(a, cfg);
  const double norm_a = frobenius_norm(a);
  auto [b, c] = nmf_initial_factors(a.rows(), a.cols(), cfg.rank, *cfg.seed);
  NmfResult result{std::move(b), std::move(c), {}, 0.0, false};

  Stopwatch clock;
  double previous_error = frobenius_distance(a, matmul(result.b, result.c)) / norm_a;
  result.rel_error = previous_error;
  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    clock.start();
    update(a, result.b, result.c);
    const DenseMatrix bc = matmul(result.b, result.c);
    const double error = frobenius_distance(a, bc) / norm_a;
    clock.stop();

    result.trace.push({k, error, clock.seconds(), bc.min_entry()});
    result.rel_error = error;
    if (relative_change_below(error, previous_error, cfg.rel_change_tol)) {
      result.converged = true;
      break;
    }
    if (cfg.time_limit && clock.seconds() >= *cfg.time_limit) {
      break;
    }
    previous_error = error;
  }
  return result;
}

}  // namespace detail

/**
 * Multiplicative updates for min ||A - B C||_F^2 over B, C >= 0 from a
 * uniform(0,1) start drawn from cfg.seed. max_iter = 0 returns the starting
 * factors.
 */
inline NmfResult nmf_mu_solve(const DenseMatrix& a, const SolverConfig& cfg) {
  return detail::run_nmf(a, cfg, detail::mu_update);
}

/// Hierarchical alternating least squares; same contract as nmf_mu_solve.
inline NmfResult nmf_hals_solve(const DenseMatrix& a, const SolverConfig& cfg) {
  return detail::run_nmf(a, cfg, detail::hals_update);
}

inline NmfResult nmf_solve(NmfMethod method, const DenseMatrix& a, const SolverConfig& cfg) {
  return method == NmfMethod::kMultiplicative ? nmf_mu_solve(a, cfg) : nmf_hals_solve(a, cfg);
}

/// Seed of restart i derived from a base seed.
inline std::uint64_t restart_seed(std::uint64_t base, std::size_t restart) {
  return CounterRng(base, 0xA5A5).at(restart);
}

struct NmfRestarts {
  std::vector<double> rel_errors;
  std::vector<double> seconds;
  NmfResult best;
};

/// Runs `restarts` independent starts and keeps the lowest-error one.
inline NmfRestarts nmf_best_of(NmfMethod method, const DenseMatrix& a, SolverConfig cfg,
                               std::size_t restarts) {
  if (restarts < 1) {
    throw ConfigError("restarts must be >= 1");
  }
  if (!cfg.seed) {
    throw ConfigError("NMF initialization needs a seed");
  }
  const std::uint64_t base = *cfg.seed;
  NmfRestarts out;
  for (std::size_t i = 0; i < restarts; ++i) {
    cfg.seed = restart_seed(base, i);
    NmfResult run = nmf_solve(method, a, cfg);
    out.rel_errors.push_back(run.rel_error);
    out.seconds.push_back(run.trace.empty() ? 0.0 : run.trace.back().seconds);
    if (i == 0 || run.rel_error < out.best.rel_error) {
      out.best = std::move(run);
    }
  }
  return out;
}

}  // namespace nlrm
