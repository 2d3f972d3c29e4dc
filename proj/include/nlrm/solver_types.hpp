#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/linalg.hpp"

namespace nlrm {

struct SolverConfig {
  Index rank = 1;
  std::size_t max_iter = 1000;
  /// Stop when |e_k - e_{k-1}| / max(e_k, eps) falls below this.
  double rel_change_tol = 1e-6;
  std::optional<double> time_limit;  // seconds
  std::optional<std::uint64_t> seed;

  void validate() const {
    if (rank < 1) {
      throw ConfigError("rank must be >= 1");
    }
    if (max_iter < 1) {
      throw ConfigError("max_iter must be >= 1");
    }
    if (!(rel_change_tol > 0.0)) {
      throw ConfigError("rel_change_tol must be > 0");
    }
    if (time_limit && !(*time_limit > 0.0)) {
      throw ConfigError("time_limit must be > 0");
    }
  }
};

struct IterationRecord {
  std::size_t iteration;
  double rel_error;
  double seconds;  // cumulative
  double min_entry;
};

struct IterationTrace {
  std::vector<IterationRecord> records;

  bool empty() const noexcept { return records.empty(); }
  std::size_t size() const noexcept { return records.size(); }
  const IterationRecord& back() const { return records.back(); }

  /// Appends after checking that indices increase and errors are nonnegative.
  void push(const IterationRecord& rec) {
    if (!records.empty() && rec.iteration <= records.back().iteration) {
      throw DomainError("IterationTrace: iteration indices must increase");
    }
    if (!(rec.rel_error >= 0.0)) {
      throw DomainError("IterationTrace: relative error must be nonnegative");
    }
    records.push_back(rec);
  }
};

struct ApproximationResult {
  SvdTriplet x;     // final rank-r iterate
  DenseMatrix y;    // its nonnegative projection
  double rel_error_x = 0.0;
  double rel_error_y = 0.0;
  IterationTrace trace;
  bool converged = false;
  /// The final iterate's trailing singular values collapsed (rank < r).
  bool degenerate_rank = false;
  std::vector<std::string> warnings;

  std::size_t iterations() const noexcept { return trace.size(); }
  double seconds() const { return trace.empty() ? 0.0 : trace.back().seconds; }
};

/// ||a - x||_F / ||a||_F.
inline double relative_error(const DenseMatrix& a, const DenseMatrix& x_reconstruction) {
  if (a.rows() != x_reconstruction.rows() || a.cols() != x_reconstruction.cols()) {
    throw ShapeError("relative_error: shapes " + shape_string(a) + " and " +
                     shape_string(x_reconstruction) + " differ");
  }
  const double norm_a = frobenius_norm(a);
  if (norm_a == 0.0) {
    throw DomainError("relative_error: reference matrix has zero norm");
  }
  return frobenius_distance(a, x_reconstruction) / norm_a;
}

/// Read-only view of one iterate handed to solver observers.
struct IterateView {
  std::size_t iteration;
  const SvdTriplet& x;
  const DenseMatrix& x_dense;
  const DenseMatrix& y;
};

using IterateObserver = std::function<void(const IterateView&)>;

namespace detail {

class Stopwatch {
 public:
  void start() { begin_ = Clock::now(); }
  void stop() { total_ += std::chrono::duration<double>(Clock::now() - begin_).count(); }
  double seconds() const noexcept { return total_; }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point begin_{};
  double total_ = 0.0;
};

inline bool relative_change_below(double current, double previous, double tol) {
  const double denom = std::max(current, std::numeric_limits<double>::epsilon());
  return std::abs(current - previous) / denom < tol;
}

}  // namespace detail
}  // namespace nlrm
