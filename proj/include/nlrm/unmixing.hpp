#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"

namespace nlrm {

struct UnmixingScores {
  double sad;         // mean spectral angle, radians
  double similarity;  // mean abundance cosine
};

namespace detail {

inline double cosine(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) {
    throw DomainError("unmixing_metrics: zero-norm vector");
  }
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

/// Greedy assignment on a square score matrix: repeatedly take the largest
/// remaining entry. Returns match[i] = truth index paired with estimate i.
inline std::vector<Index> greedy_match(const Eigen::MatrixXd& score) {
  const Index r = score.rows();
  std::vector<Index> match(static_cast<std::size_t>(r), -1);
  std::vector<bool> used(static_cast<std::size_t>(r), false);
  for (Index step = 0; step < r; ++step) {
    double best = -std::numeric_limits<double>::infinity();
    Index bi = -1;
    Index bj = -1;
    for (Index i = 0; i < r; ++i) {
      if (match[static_cast<std::size_t>(i)] >= 0) {
        continue;
      }
      for (Index j = 0; j < r; ++j) {
        if (!used[static_cast<std::size_t>(j)] && score(i, j) > best) {
          best = score(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    match[static_cast<std::size_t>(bi)] = bj;
    used[static_cast<std::size_t>(bj)] = true;
  }
  return match;
}

}  // namespace detail

/**
 * Spectral angle distance over endmember rows and cosine similarity over
 * abundance columns. Estimated endmembers are paired with the truth greedily
 * by spectral cosine; the same pairing is used for the abundance columns.
 *
 * Spectra are r x bands, abundances are pixels x r.
 */
inline UnmixingScores unmixing_metrics(const DenseMatrix& estimated_spectra,
                                       const DenseMatrix& truth_spectra,
                                       const DenseMatrix& estimated_abundance,
                                       const DenseMatrix& truth_abundance) {
  const Index r = truth_spectra.rows();
  if (estimated_spectra.rows() != r || estimated_spectra.cols() != truth_spectra.cols()) {
    throw ShapeError("unmixing_metrics: spectra shapes differ");
  }
  if (estimated_abundance.rows() != truth_abundance.rows() || estimated_abundance.cols() != r ||
      truth_abundance.cols() != r) {
    throw ShapeError("unmixing_metrics: abundance shapes differ");
  }
  if (r == 0) {
    throw ShapeError("unmixing_metrics: no endmembers");
  }

  Eigen::MatrixXd score(r, r);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) {
      score(i, j) = detail::cosine(estimated_spectra.eigen().row(i).transpose(),
                                   truth_spectra.eigen().row(j).transpose());
    }
  }
  const std::vector<Index> match = detail::greedy_match(score);

  double sad = 0.0;
  double similarity = 0.0;
  for (Index i = 0; i < r; ++i) {
    const Index j = match[static_cast<std::size_t>(i)];
    sad += std::acos(score(i, j));
    similarity += detail::cosine(estimated_abundance.eigen().col(i), truth_abundance.eigen().col(j));
  }
  return {sad / static_cast<double>(r), similarity / static_cast<double>(r)};
}

}  // namespace nlrm
