#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "nlrm/datagen.hpp"
#include "nlrm/matrix_io.hpp"
#include "nlrm/nmf.hpp"
#include "nlrm/result_json.hpp"
#include "nlrm/solvers.hpp"

namespace nlrm {

inline const std::vector<std::string>& bench_methods() {
  static const std::vector<std::string> methods{"tap", "ap", "mu", "hals"};
  return methods;
}

struct BenchSize {
  Index n;
  std::vector<Index> ranks;
};

/// Grid of square uniform matrices. Each (size, rank, method) is one cell.
struct BenchGrid {
  std::vector<BenchSize> sizes;
  std::vector<std::string> methods = bench_methods();
  std::size_t trials = 1;     // matrices per size (seeds seed, seed + 1, ...)
  std::size_t restarts = 10;  // NMF starts per matrix
  std::uint64_t seed = 1;
  SolverConfig projection;    // rank is overwritten per cell
  SolverConfig nmf;           // rank and seed are overwritten per run
  std::size_t threads = 1;

  std::size_t cell_count() const {
    std::size_t count = 0;
    for (const auto& s : sizes) {
      count += s.ranks.size() * methods.size();
    }
    return count;
  }
};

/// Sizes {200, 400, 800} scaled by `scale`, ranks n/20, n/10, n/5.
inline std::vector<BenchSize> table1_sizes(double scale = 1.0) {
  if (!(scale > 0.0)) {
    throw ConfigError("scale must be > 0");
  }
  std::vector<BenchSize> out;
  for (Index base : {200, 400, 800}) {
    const auto n = static_cast<Index>(std::llround(static_cast<double>(base) * scale));
    if (n < 20) {
      throw ConfigError("scale too small: n = " + std::to_string(n));
    }
    out.push_back({n, {n / 20, n / 10, n / 5}});
  }
  return out;
}

struct BenchCell {
  std::string family = "uniform";
  Index m = 0;
  Index n = 0;
  Index rank = 0;
  std::string method;
  std::size_t trials = 0;
  std::size_t runs = 0;  // trials x restarts for NMF, trials otherwise
  double mean_rel_error = 0.0;
  double min_rel_error = 0.0;
  double max_rel_error = 0.0;
  double median_seconds = 0.0;
  double mean_seconds = 0.0;
  double mean_iterations = 0.0;
  bool ok = false;
  std::string error;
};

struct BenchReport {
  std::vector<BenchCell> cells;

  const BenchCell* find(Index n, Index rank, const std::string& method) const {
    for (const auto& c : cells) {
      if (c.n == n && c.rank == rank && c.method == method) {
        return &c;
      }
    }
    return nullptr;
  }

  bool all_failed() const {
    return std::none_of(cells.begin(), cells.end(), [](const BenchCell& c) { return c.ok; });
  }
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

inline void summarize(BenchCell& cell, const std::vector<double>& errors,
                      const std::vector<double>& seconds, const std::vector<double>& iterations) {
  cell.runs = errors.size();
  cell.mean_rel_error = std::accumulate(errors.begin(), errors.end(), 0.0) /
                        static_cast<double>(errors.size());
  const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
  cell.min_rel_error = *lo;
  cell.max_rel_error = *hi;
  cell.median_seconds = median(seconds);
  cell.mean_seconds = std::accumulate(seconds.begin(), seconds.end(), 0.0) /
                      static_cast<double>(seconds.size());
  cell.mean_iterations = std::accumulate(iterations.begin(), iterations.end(), 0.0) /
                         static_cast<double>(iterations.size());
  // Keep min <= mean <= max under rounding of the mean.
  cell.mean_rel_error = std::clamp(cell.mean_rel_error, cell.min_rel_error, cell.max_rel_error);
}

inline BenchCell run_cell(const BenchGrid& grid, Index n, Index rank, const std::string& method) {
  BenchCell cell;
  cell.m = n;
  cell.n = n;
  cell.rank = rank;
  cell.method = method;
  cell.trials = grid.trials;

  std::vector<double> errors;
  std::vector<double> seconds;
  std::vector<double> iterations;
  for (std::size_t t = 0; t < grid.trials; ++t) {
    const DenseMatrix a = gen_uniform(n, n, grid.seed + t);
    if (method == "tap" || method == "ap") {
      SolverConfig cfg = grid.projection;
      cfg.rank = rank;
      const auto result = solve(method == "tap" ? ProjectionMethod::kTangent
                                                : ProjectionMethod::kAlternating,
                                a, cfg);
      errors.push_back(result.rel_error_x);
      seconds.push_back(result.seconds());
      iterations.push_back(static_cast<double>(result.iterations()));
    } else if (method == "mu" || method == "hals") {
      SolverConfig cfg = grid.nmf;
      cfg.rank = rank;
      const NmfMethod nmf_method = method == "mu" ? NmfMethod::kMultiplicative : NmfMethod::kHals;
      for (std::size_t i = 0; i < grid.restarts; ++i) {
        cfg.seed = restart_seed(grid.seed + t, i);
        const NmfResult run = nmf_solve(nmf_method, a, cfg);
        errors.push_back(run.rel_error);
        seconds.push_back(run.trace.empty() ? 0.0 : run.trace.back().seconds);
        iterations.push_back(static_cast<double>(run.trace.size()));
      }
    } else {
      throw ConfigError("unknown method '" + method + "'");
    }
  }
  summarize(cell, errors, seconds, iterations);
  cell.ok = true;
  return cell;
}

}  // namespace detail

/// Worker count from NLRM_THREADS, capped at the hardware concurrency.
inline std::size_t bench_threads_from_env() {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NLRM_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1) {
      return std::min<std::size_t>(hw, static_cast<std::size_t>(requested));
    }
  }
  return hw;
}

/**
 * Runs every cell of the grid. Cells are independent and may execute on
 * grid.threads workers; the report order and every non-timing field are the
 * same as a serial run. A failing cell is recorded with ok = false.
 */
inline BenchReport run_bench(const BenchGrid& grid) {
  if (grid.trials < 1 || grid.restarts < 1) {
    throw ConfigError("trials and restarts must be >= 1");
  }
  struct Job {
    Index n;
    Index rank;
    std::string method;
  };
  std::vector<Job> jobs;
  for (const auto& size : grid.sizes) {
    for (Index rank : size.ranks) {
      for (const auto& method : grid.methods) {
        jobs.push_back({size.n, rank, method});
      }
    }
  }

  BenchReport report;
  report.cells.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      try {
        report.cells[i] = detail::run_cell(grid, job.n, job.rank, job.method);
      } catch (const std::exception& e) {
        BenchCell failed;
        failed.m = failed.n = job.n;
        failed.rank = job.rank;
        failed.method = job.method;
        failed.trials = grid.trials;
        failed.error = e.what();
        report.cells[i] = std::move(failed);
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(grid.threads, 1, std::max<std::size_t>(1, jobs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  return report;
}

inline nlohmann::json bench_to_json(const BenchReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cell = {{"family", c.family},
                           {"m", c.m},
                           {"n", c.n},
                           {"rank", c.rank},
                           {"method", c.method},
                           {"trials", c.trials},
                           {"runs", c.runs},
                           {"ok", c.ok}};
    if (c.ok) {
      cell["mean_rel_error"] = c.mean_rel_error;
      cell["rel_error_range"] = {c.min_rel_error, c.max_rel_error};
      cell["median_seconds"] = c.median_seconds;
      cell["mean_seconds"] = c.mean_seconds;
      cell["mean_iterations"] = c.mean_iterations;
    } else {
      cell["error"] = c.error;
    }
    cells.push_back(std::move(cell));
  }
  return {{"schema", kResultSchema}, {"cells", std::move(cells)}};
}

/// Long format, one row per cell.
inline std::string bench_to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "family,m,n,rank,method,trials,runs,mean_rel_error,min_rel_error,max_rel_error,"
         "median_seconds,mean_seconds,mean_iterations,status\n";
  for (const auto& c : report.cells) {
    out << c.family << ',' << c.m << ',' << c.n << ',' << c.rank << ',' << c.method << ','
        << c.trials << ',' << c.runs << ',' << detail::format_real(c.mean_rel_error) << ','
        << detail::format_real(c.min_rel_error) << ',' << detail::format_real(c.max_rel_error)
        << ',' << detail::format_real(c.median_seconds) << ','
        << detail::format_real(c.mean_seconds) << ',' << detail::format_real(c.mean_iterations)
        << ',' << (c.ok ? "ok" : "failed") << '\n';
  }
  return out.str();
}

}  // namespace nlrm
