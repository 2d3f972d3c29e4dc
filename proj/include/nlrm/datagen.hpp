#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/random.hpp"

namespace nlrm {

// Synthetic datasets. Every generator is a pure function of its arguments;
// random draws come from CounterRng with a fixed stream id per factor.

namespace streams {
inline constexpr std::uint64_t kUniform = 0;
inline constexpr std::uint64_t kSeparableB = 11;
inline constexpr std::uint64_t kOrthogonalB = 21;
inline constexpr std::uint64_t kOrthogonalC = 22;
inline constexpr std::uint64_t kOrthogonalNoise = 23;
inline constexpr std::uint64_t kPointCloud = 31;
}  // namespace streams

/// m x n matrix of i.i.d. uniform [0, 1) entries, drawn in row-major order.
inline DenseMatrix gen_uniform(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw ShapeError("gen_uniform: dimensions must be positive");
  }
  DenseMatrix out(m, n);
  const CounterRng rng(seed, streams::kUniform);
  auto data = out.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = rng.uniform_at(i);
  }
  return out;
}

struct SeparableData {
  DenseMatrix a;  // 200 x 210
  DenseMatrix b;  // 200 x 20
  DenseMatrix c;  // 20 x 210, [I_20, H']
};

inline constexpr Index kSeparableRows = 200;
inline constexpr Index kSeparableRank = 20;
inline constexpr Index kSeparableCols = kSeparableRank + kSeparableRank * (kSeparableRank - 1) / 2;

/**
 * Separable matrix A = B C + N.
 *
 * B is 200 x 20 uniform. C = [I_20, H'] where H' holds every column with two
 * entries equal to 0.5, ordered lexicographically over index pairs (i < j).
 * The first 20 columns carry no noise; every later column i is pushed away
 * from the mean column w of B by sigma * (m_i - w), with m_i the noiseless
 * midpoint column (B C)_i.
 */
inline SeparableData gen_separable_case1(double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw DomainError("gen_separable_case1: sigma must be >= 0");
  }
  DenseMatrix b(kSeparableRows, kSeparableRank);
  const CounterRng rng(seed, streams::kSeparableB);
  for (std::size_t i = 0; i < b.data().size(); ++i) {
    b.data()[i] = rng.uniform_at(i);
  }

  DenseMatrix c(kSeparableRank, kSeparableCols);
  for (Index i = 0; i < kSeparableRank; ++i) {
    c(i, i) = 1.0;
  }
  Index col = kSeparableRank;
  for (Index i = 0; i < kSeparableRank; ++i) {
    for (Index j = i + 1; j < kSeparableRank; ++j) {
      c(i, col) = 0.5;
      c(j, col) = 0.5;
      ++col;
    }
  }

  DenseMatrix a(kSeparableRows, kSeparableCols);
  a.eigen().noalias() = b.eigen() * c.eigen();
  if (sigma > 0.0) {
    const Eigen::VectorXd mean_col = b.eigen().rowwise().mean();
    for (Index j = kSeparableRank; j < kSeparableCols; ++j) {
      const Eigen::VectorXd mid = a.eigen().col(j);
      a.eigen().col(j) = mid + sigma * (mid - mean_col);
    }
  }
  return {std::move(a), std::move(b), std::move(c)};
}

inline constexpr Index kOrthogonalRows = 100;
inline constexpr Index kOrthogonalRank = 10;
inline constexpr Index kOrthogonalCols = 30;

/**
 * 100 x 10 nonnegative B with orthonormal columns: column k is supported on
 * rows [10k, 10k + 10) with uniform(0.5, 1.5) entries scaled to unit norm.
 */
inline DenseMatrix orthogonal_nonnegative_basis(std::uint64_t seed) {
  constexpr Index block = kOrthogonalRows / kOrthogonalRank;
  DenseMatrix b(kOrthogonalRows, kOrthogonalRank);
  const CounterRng rng(seed, streams::kOrthogonalB);
  std::uint64_t counter = 0;
  for (Index k = 0; k < kOrthogonalRank; ++k) {
    for (Index i = 0; i < block; ++i) {
      b(k * block + i, k) = 0.5 + rng.uniform_at(counter++);
    }
    b.eigen().col(k).normalize();
  }
  return b;
}

/// B C + sigma * U(0,1) noise, with B from orthogonal_nonnegative_basis and C
/// a 10 x 30 uniform matrix.
inline DenseMatrix gen_orthogonal_decomposable(double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw DomainError("gen_orthogonal_decomposable: sigma must be >= 0");
  }
  const DenseMatrix b = orthogonal_nonnegative_basis(seed);
  DenseMatrix c(kOrthogonalRank, kOrthogonalCols);
  const CounterRng rng_c(seed, streams::kOrthogonalC);
  for (std::size_t i = 0; i < c.data().size(); ++i) {
    c.data()[i] = rng_c.uniform_at(i);
  }
  DenseMatrix a(kOrthogonalRows, kOrthogonalCols);
  a.eigen().noalias() = b.eigen() * c.eigen();
  if (sigma > 0.0) {
    const CounterRng rng_n(seed, streams::kOrthogonalNoise);
    auto data = a.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i] += sigma * rng_n.uniform_at(i);
    }
  }
  return a;
}

using Point2 = std::array<double, 2>;

/// Neighbor whose distance sets the local scale of each point.
inline constexpr std::size_t kSimilarityNeighbor = 9;

/**
 * Self-tuning similarity graph: A_ii = 0 and A_ij = exp(-D_ij / (s_i s_j))
 * with D_ij the squared distance and s_i the distance from point i to its
 * 9th nearest neighbor.
 */
inline DenseMatrix gen_graph_similarity(const std::vector<Point2>& points) {
  const std::size_t n = points.size();
  if (n < kSimilarityNeighbor + 1) {
    throw DomainError("gen_graph_similarity: need at least " +
                      std::to_string(kSimilarityNeighbor + 1) + " points, got " +
                      std::to_string(n));
  }
  std::vector<double> dist2(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = points[i][0] - points[j][0];
      const double dy = points[i][1] - points[j][1];
      dist2[i * n + j] = dist2[j * n + i] = dx * dx + dy * dy;
    }
  }

  std::vector<double> scale(n);
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        others.push_back(dist2[i * n + j]);
      }
    }
    std::nth_element(others.begin(), others.begin() + (kSimilarityNeighbor - 1), others.end());
    scale[i] = std::sqrt(others[kSimilarityNeighbor - 1]);
  }

  const auto dim = static_cast<Index>(n);
  DenseMatrix a(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist2[i * n + j];
      const double s = scale[i] * scale[j];
      double value;
      if (d == 0.0) {
        value = 1.0;
      } else if (s == 0.0) {
        value = 0.0;
      } else {
        value = std::exp(-d / s);
      }
      a(static_cast<Index>(i), static_cast<Index>(j)) = value;
      a(static_cast<Index>(j), static_cast<Index>(i)) = value;
    }
  }
  return a;
}

enum class PointCloud { kBlobs, kRings, kMoons };

/**
 * Three-cluster point clouds in the plane, `per_cluster` points each.
 * kBlobs: three separated discs. kRings: concentric rings of radius 1, 2, 3.
 * kMoons: two interleaved half circles plus a disc.
 */
inline std::vector<Point2> gen_point_cloud(PointCloud family, std::size_t per_cluster,
                                           std::uint64_t seed) {
  const CounterRng rng(seed, streams::kPointCloud + static_cast<std::uint64_t>(family));
  std::uint64_t counter = 0;
  auto next = [&] { return rng.uniform_at(counter++); };
  constexpr double pi = std::numbers::pi;

  std::vector<Point2> out;
  out.reserve(3 * per_cluster);
  for (std::size_t cluster = 0; cluster < 3; ++cluster) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      const double t = next();
      const double u = next();
      switch (family) {
        case PointCloud::kBlobs: {
          const double cx = 4.0 * static_cast<double>(cluster);
          const double cy = cluster == 1 ? 3.0 : 0.0;
          const double radius = std::sqrt(u);
          out.push_back({cx + radius * std::cos(2 * pi * t), cy + radius * std::sin(2 * pi * t)});
          break;
        }
        case PointCloud::kRings: {
          const double radius = 1.0 + static_cast<double>(cluster) + 0.1 * (u - 0.5);
          out.push_back({radius * std::cos(2 * pi * t), radius * std::sin(2 * pi * t)});
          break;
        }
        case PointCloud::kMoons: {
          const double jitter = 0.1 * (u - 0.5);
          if (cluster == 0) {
            out.push_back({std::cos(pi * t) + jitter, std::sin(pi * t) + jitter});
          } else if (cluster == 1) {
            out.push_back({1.0 - std::cos(pi * t) + jitter, 0.5 - std::sin(pi * t) + jitter});
          } else {
            const double radius = 0.4 * std::sqrt(u);
            out.push_back({4.5 + radius * std::cos(2 * pi * t), radius * std::sin(2 * pi * t)});
          }
          break;
        }
      }
    }
  }
  return out;
}

enum class GeneratorFamily { kUniform, kSeparableCase1, kOrthogonalDecomposable, kGraphSimilarity };

/// Parameters for one synthetic dataset. Fields a family does not use are ignored:
/// m and n apply to kUniform, noise_sigma to the separable and orthogonal
/// families, cloud and points_per_cluster to kGraphSimilarity.
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::kUniform;
  Index m = 0;
  Index n = 0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  PointCloud cloud = PointCloud::kBlobs;
  std::size_t points_per_cluster = 0;

  void validate() const {
    if (!(noise_sigma >= 0.0)) {
      throw ConfigError("noise_sigma must be >= 0");
    }
    if (family == GeneratorFamily::kUniform && (m < 1 || n < 1)) {
      throw ConfigError("uniform family needs positive dimensions");
    }
  }
};

inline DenseMatrix generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case GeneratorFamily::kUniform:
      return gen_uniform(spec.m, spec.n, spec.seed);
    case GeneratorFamily::kSeparableCase1:
      return gen_separable_case1(spec.noise_sigma, spec.seed).a;
    case GeneratorFamily::kOrthogonalDecomposable:
      return gen_orthogonal_decomposable(spec.noise_sigma, spec.seed);
    case GeneratorFamily::kGraphSimilarity:
      return gen_graph_similarity(gen_point_cloud(spec.cloud, spec.points_per_cluster, spec.seed));
  }
  throw ConfigError("unknown generator family");
}

}  // namespace nlrm
