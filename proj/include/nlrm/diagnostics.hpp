#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nlrm/errors.hpp"
#include "nlrm/solver_types.hpp"

namespace nlrm {

struct RateEstimate {
  double c_hat;      // estimated contraction factor per iteration
  double r_squared;  // fit quality of the log-linear model
  std::size_t points;
};

/// Differences at or below this are treated as converged and dropped.
inline constexpr double kRateFloor = 1e-15;

/**
 * Empirical linear-convergence rate of an error trace.
 *
 * Uses the final error as a proxy for the limit: d_k = |e_k - e_last|.
 * Records with d_k <= kRateFloor are dropped, the last `tail_fraction` of the
 * remaining ones are kept, and log(d_k) is fitted against k by least
 * squares; c_hat = exp(slope).
 */
inline RateEstimate contraction_rate_estimate(const IterationTrace& trace, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("tail_fraction must lie in (0, 1]");
  }
  if (trace.size() < 10) {
    throw InsufficientDataError("rate estimate needs at least 10 trace records, got " +
                                std::to_string(trace.size()));
  }

  const double last = trace.back().rel_error;
  std::vector<double> ks;
  std::vector<double> logs;
  for (const auto& rec : trace.records) {
    const double d = std::abs(rec.rel_error - last);
    if (d > kRateFloor) {
      ks.push_back(static_cast<double>(rec.iteration));
      logs.push_back(std::log(d));
    }
  }
  const auto keep = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(ks.size())));
  if (keep < 3) {
    throw InsufficientDataError("fewer than 3 usable points after filtering");
  }
  const std::size_t first = ks.size() - keep;

  double mean_k = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = first; i < ks.size(); ++i) {
    mean_k += ks[i];
    mean_y += logs[i];
  }
  mean_k /= static_cast<double>(keep);
  mean_y /= static_cast<double>(keep);

  double skk = 0.0;
  double sky = 0.0;
  double syy = 0.0;
  for (std::size_t i = first; i < ks.size(); ++i) {
    skk += (ks[i] - mean_k) * (ks[i] - mean_k);
    sky += (ks[i] - mean_k) * (logs[i] - mean_y);
    syy += (logs[i] - mean_y) * (logs[i] - mean_y);
  }
  const double slope = sky / skk;
  const double ss_res = syy - slope * sky;
  const double r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return {std::exp(slope), r2, keep};
}

}  // namespace nlrm
