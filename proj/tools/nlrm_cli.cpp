// nlrm command-line tool: approx, bench, gen, diag.
//
// Exit codes: 0 success, 2 usage or input error, 3 numeric failure.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlrm/nlrm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct ApproxOptions {
  std::string input;
  std::string method = "tap";
  long long rank = 0;
  double tol = 1e-6;
  std::size_t max_iter = 1000;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  std::optional<double> time_limit;
  std::string output;
  std::string trace;
  bool omit_timing = false;
  bool verbose = false;
};

struct BenchOptions {
  std::string suite;
  double scale = 1.0;
  std::vector<long long> sizes;
  std::vector<long long> ranks;
  std::vector<std::string> methods = nlrm::bench_methods();
  std::size_t trials = 1;
  std::size_t restarts = 10;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::size_t max_iter = 1000;
  std::size_t nmf_max_iter = 1000;
  std::optional<double> nmf_time_limit;
  std::string output;
  std::string csv;
};

struct GenOptions {
  std::string family;
  long long m = 0;
  long long n = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  std::string cloud = "blobs";
  std::size_t per_cluster = 50;
  std::string points_file;
  std::string out;
};

struct DiagOptions {
  std::string trace;
  double tail_fraction = 0.5;
};

// FNV-1a over the little-endian IEEE-754 bytes of the row-major values.
std::string checksum(const nlrm::DenseMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : m.data()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xFFU;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_json(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw nlrm::ConfigError("cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
}

int run_approx(const ApproxOptions& opt) {
  const nlrm::DenseMatrix a = nlrm::read_matrix(opt.input);
  nlrm::SolverConfig cfg;
  cfg.rank = static_cast<nlrm::Index>(opt.rank);
  cfg.max_iter = opt.max_iter;
  cfg.rel_change_tol = opt.tol;
  cfg.time_limit = opt.time_limit;
  cfg.seed = opt.seed;

  nlohmann::json doc;
  nlrm::DenseMatrix approximation;
  if (opt.method == "tap" || opt.method == "ap") {
    nlrm::IterateObserver observer;
    if (opt.verbose) {
      observer = [](const nlrm::IterateView& view) {
        std::cerr << "iter " << view.iteration << " min_entry " << view.x_dense.min_entry()
                  << '\n';
      };
    }
    const auto method = opt.method == "tap" ? nlrm::ProjectionMethod::kTangent
                                            : nlrm::ProjectionMethod::kAlternating;
    const nlrm::ApproximationResult result = nlrm::solve(method, a, cfg, observer);
    for (const auto& w : result.warnings) {
      std::cerr << "warning: " << w << '\n';
    }
    doc = nlrm::result_to_json(opt.method, cfg.rank, result, !opt.omit_timing);
    approximation = result.y;
  } else {
    const auto method =
        opt.method == "mu" ? nlrm::NmfMethod::kMultiplicative : nlrm::NmfMethod::kHals;
    const nlrm::NmfRestarts runs = nlrm::nmf_best_of(method, a, cfg, opt.restarts);
    doc = nlrm::result_to_json(opt.method, cfg.rank, runs.best, !opt.omit_timing);
    approximation = nlrm::matmul(runs.best.b, runs.best.c);
  }

  if (!opt.output.empty()) {
    nlrm::write_matrix(approximation, opt.output);
  }
  if (!opt.trace.empty()) {
    write_json(doc, opt.trace);
  }
  std::printf("method=%s rank=%lld rel_error=%.10g iters=%zu seconds=%.6f\n", opt.method.c_str(),
              opt.rank, doc["rel_error_x"].get<double>(), doc["iters"].get<std::size_t>(),
              doc["seconds"].get<double>());
  return kExitOk;
}

int run_bench(const BenchOptions& opt) {
  nlrm::BenchGrid grid;
  if (!opt.suite.empty()) {
    grid.sizes = nlrm::table1_sizes(opt.scale);
  } else {
    if (opt.sizes.empty() || opt.ranks.empty()) {
      throw nlrm::ConfigError("give --suite table1 or both --sizes and --ranks");
    }
    for (long long n : opt.sizes) {
      nlrm::BenchSize size{static_cast<nlrm::Index>(n), {}};
      for (long long r : opt.ranks) {
        size.ranks.push_back(static_cast<nlrm::Index>(r));
      }
      grid.sizes.push_back(size);
    }
  }
  grid.methods = opt.methods;
  grid.trials = opt.trials;
  grid.restarts = opt.restarts;
  grid.seed = opt.seed;
  grid.projection.rel_change_tol = opt.tol;
  grid.projection.max_iter = opt.max_iter;
  grid.nmf.rel_change_tol = opt.tol;
  grid.nmf.max_iter = opt.nmf_max_iter;
  grid.nmf.time_limit = opt.nmf_time_limit;
  grid.threads = nlrm::bench_threads_from_env();

  const nlrm::BenchReport report = nlrm::run_bench(grid);
  for (const auto& c : report.cells) {
    if (c.ok) {
      std::printf("%4lld x %-4lld r=%-4lld %-5s mean=%.4f range=[%.4f, %.4f] median_s=%.3f\n",
                  static_cast<long long>(c.m), static_cast<long long>(c.n),
                  static_cast<long long>(c.rank), c.method.c_str(), c.mean_rel_error,
                  c.min_rel_error, c.max_rel_error, c.median_seconds);
    } else {
      std::printf("%4lld x %-4lld r=%-4lld %-5s FAILED: %s\n", static_cast<long long>(c.m),
                  static_cast<long long>(c.n), static_cast<long long>(c.rank), c.method.c_str(),
                  c.error.c_str());
    }
  }
  if (!opt.output.empty()) {
    write_json(nlrm::bench_to_json(report), opt.output);
  }
  if (!opt.csv.empty()) {
    std::ofstream out(opt.csv);
    out << nlrm::bench_to_csv(report);
  }
  return report.all_failed() ? kExitNumeric : kExitOk;
}

std::vector<nlrm::Point2> read_points(const std::string& path) {
  const nlrm::DenseMatrix m = nlrm::read_matrix(path);
  if (m.cols() != 2) {
    throw nlrm::ParseError(0, "points file must have two columns");
  }
  std::vector<nlrm::Point2> points;
  for (nlrm::Index i = 0; i < m.rows(); ++i) {
    points.push_back({m(i, 0), m(i, 1)});
  }
  return points;
}

int run_gen(const GenOptions& opt) {
  nlrm::DenseMatrix out;
  if (opt.family == "uniform") {
    out = nlrm::gen_uniform(opt.m, opt.n, opt.seed);
  } else if (opt.family == "separable_case1") {
    out = nlrm::gen_separable_case1(opt.sigma, opt.seed).a;
  } else if (opt.family == "orthogonal_decomposable") {
    out = nlrm::gen_orthogonal_decomposable(opt.sigma, opt.seed);
  } else {
    if (!opt.points_file.empty()) {
      out = nlrm::gen_graph_similarity(read_points(opt.points_file));
    } else {
      const auto cloud = opt.cloud == "rings"   ? nlrm::PointCloud::kRings
                         : opt.cloud == "moons" ? nlrm::PointCloud::kMoons
                                                : nlrm::PointCloud::kBlobs;
      out = nlrm::gen_graph_similarity(nlrm::gen_point_cloud(cloud, opt.per_cluster, opt.seed));
    }
  }
  nlrm::write_matrix(out, opt.out);
  std::printf("rows=%lld cols=%lld checksum=%s\n", static_cast<long long>(out.rows()),
              static_cast<long long>(out.cols()), checksum(out).c_str());
  return kExitOk;
}

int run_diag(const DiagOptions& opt) {
  std::ifstream in(opt.trace);
  if (!in) {
    throw nlrm::ParseError(0, "cannot open '" + opt.trace + "'");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw nlrm::ParseError(0, std::string("malformed trace JSON: ") + e.what());
  }
  const nlrm::IterationTrace trace = nlrm::trace_from_json(doc);
  if (trace.empty()) {
    throw nlrm::ParseError(0, "trace is empty");
  }
  const nlrm::RateEstimate rate = nlrm::contraction_rate_estimate(trace, opt.tail_fraction);
  std::printf("c_hat=%.10g r_squared=%.6f points=%zu iterations=%zu final_rel_error=%.10g", rate.c_hat,
              rate.r_squared, rate.points, trace.size(), trace.back().rel_error);
  if (doc.is_object() && doc.contains("rel_error_y") && doc["rel_error_y"].is_number()) {
    std::printf(" rel_error_y=%.10g", doc["rel_error_y"].get<double>());
  }
  std::printf("\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegative low-rank matrix approximation"};
  app.require_subcommand(1);

  ApproxOptions approx;
  auto* approx_cmd = app.add_subcommand("approx", "Approximate a matrix file");
  approx_cmd->add_option("input", approx.input, "Input matrix (.csv or .mtx)")
      ->required()
      ->check(CLI::ExistingFile);
  approx_cmd->add_option("--method", approx.method, "tap | ap | mu | hals")
      ->check(CLI::IsMember({"tap", "ap", "mu", "hals"}));
  approx_cmd->add_option("--rank", approx.rank, "Target rank")->required()->check(
      CLI::PositiveNumber);
  approx_cmd->add_option("--tol", approx.tol, "Relative-change stopping tolerance")
      ->check(CLI::PositiveNumber);
  approx_cmd->add_option("--max-iter", approx.max_iter, "Iteration cap");
  approx_cmd->add_option("--seed", approx.seed, "Seed for NMF initialization");
  approx_cmd->add_option("--restarts", approx.restarts, "NMF restarts (best is kept)")
      ->check(CLI::PositiveNumber);
  approx_cmd->add_option("--time-limit", approx.time_limit, "Seconds")->check(CLI::PositiveNumber);
  approx_cmd->add_option("--output", approx.output, "Write the nonnegative approximation here");
  approx_cmd->add_option("--trace", approx.trace, "Write the JSON result with its trace here");
  approx_cmd->add_flag("--omit-timing", approx.omit_timing, "Write zero for all timing fields");
  approx_cmd->add_flag("--verbose", approx.verbose, "Per-iteration log on stderr");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a synthetic benchmark grid");
  bench_cmd->add_option("--suite", bench.suite, "Predefined grid")->check(CLI::IsMember({"table1"}));
  bench_cmd->add_option("--scale", bench.scale, "Shrink factor for suite sizes")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--sizes", bench.sizes, "Square sizes")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--ranks", bench.ranks, "Ranks used for every size")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--methods", bench.methods, "Subset of tap ap mu hals")
      ->check(CLI::IsMember({"tap", "ap", "mu", "hals"}));
  bench_cmd->add_option("--trials", bench.trials, "Matrices per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--restarts", bench.restarts, "NMF starts per matrix")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--tol", bench.tol, "Stopping tolerance")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-iter", bench.max_iter, "TAP/AP iteration cap");
  bench_cmd->add_option("--nmf-max-iter", bench.nmf_max_iter, "NMF iteration cap");
  bench_cmd->add_option("--nmf-time-limit", bench.nmf_time_limit, "NMF seconds per run")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--output", bench.output, "Report JSON path");
  bench_cmd->add_option("--csv", bench.csv, "Plot-ready CSV path");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic matrix");
  gen_cmd->add_option("--family", gen.family, "Dataset family")
      ->required()
      ->check(CLI::IsMember(
          {"uniform", "separable_case1", "orthogonal_decomposable", "graph_similarity"}));
  gen_cmd->add_option("--m", gen.m, "Rows (uniform)");
  gen_cmd->add_option("--n", gen.n, "Columns (uniform)");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--sigma", gen.sigma, "Noise level")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--cloud", gen.cloud, "blobs | rings | moons (graph_similarity)")
      ->check(CLI::IsMember({"blobs", "rings", "moons"}));
  gen_cmd->add_option("--per-cluster", gen.per_cluster, "Points per cluster (graph_similarity)");
  gen_cmd->add_option("--points-file", gen.points_file, "Two-column point file (graph_similarity)")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Output path (.csv or .mtx)")->required();

  DiagOptions diag;
  auto* diag_cmd = app.add_subcommand("diag", "Estimate the linear convergence rate of a trace");
  diag_cmd->add_option("--trace", diag.trace, "Result or trace JSON")->required();
  diag_cmd->add_option("--tail-fraction", diag.tail_fraction, "Fraction of usable points to fit")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (approx_cmd->parsed()) {
      return run_approx(approx);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench);
    }
    if (gen_cmd->parsed()) {
      return run_gen(gen);
    }
    return run_diag(diag);
  } catch (const nlrm::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
