#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/instrumentation.hpp"

namespace nlrm {

/// Thin QR factors: q is m x k with orthonormal columns, r is k x k upper
/// triangular with a nonnegative diagonal.
struct QrFactors {
  DenseMatrix q;
  DenseMatrix r;
};

/**
 * Factored matrix u * diag(s) * v^T.
 *
 * u and v have orthonormal columns, s is nonincreasing and nonnegative, and
 * the largest-magnitude entry of every column of u is positive (the first
 * such entry on ties). The v columns are flipped together with u.
 */
struct SvdTriplet {
  DenseMatrix u;
  std::vector<double> s;
  DenseMatrix v;

  Index rank() const noexcept { return static_cast<Index>(s.size()); }
};

namespace detail {

inline void require_inner(Index a_cols, Index b_rows, const char* op) {
  if (a_cols != b_rows) {
    throw ShapeError(std::string(op) + ": inner dimensions differ (" + std::to_string(a_cols) +
                     " vs " + std::to_string(b_rows) + ")");
  }
}

/// Flips column pairs of (u, v) so that each u column's largest-|entry| is positive.
template <typename MatU, typename MatV>
void normalize_signs(MatU& u, MatV& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
      const double a = std::abs(u(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (u.rows() > 0 && u(best, j) < 0.0) {
      u.col(j) *= -1.0;
      v.col(j) *= -1.0;
    }
  }
}

}  // namespace detail

/// a * b.
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_inner(a.cols(), b.rows(), "matmul");
  detail::record_product(a.rows(), a.cols(), b.cols());
  DenseMatrix out(a.rows(), b.cols());
  out.eigen().noalias() = a.eigen() * b.eigen();
  return out;
}

/// a^T * b without materializing the transpose.
inline DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_inner(a.rows(), b.rows(), "matmul_tn");
  detail::record_product(a.cols(), a.rows(), b.cols());
  DenseMatrix out(a.cols(), b.cols());
  out.eigen().noalias() = a.eigen().transpose() * b.eigen();
  return out;
}

/// a * b^T without materializing the transpose.
inline DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_inner(a.cols(), b.cols(), "matmul_nt");
  detail::record_product(a.rows(), a.cols(), b.rows());
  DenseMatrix out(a.rows(), b.rows());
  out.eigen().noalias() = a.eigen() * b.eigen().transpose();
  return out;
}

inline double frobenius_norm(const DenseMatrix& a) { return a.eigen().norm(); }

/// Trace inner product <a, b> = sum_ij a_ij b_ij.
inline double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("frobenius_inner: shapes differ");
  }
  return a.eigen().cwiseProduct(b.eigen()).sum();
}

/// ||a - b||_F.
inline double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("frobenius_distance: shapes differ");
  }
  return (a.eigen() - b.eigen()).norm();
}

namespace detail {

/// Householder reflectors H_j = I - beta_j v_j v_j^T (v_j stored with its
/// leading zeros) and the triangularized working matrix.
struct Reflectors {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd beta;
  Eigen::MatrixXd triangular;
};

/// Reduces an m x k matrix to upper-trapezoidal form with min(m, k) reflectors.
inline Reflectors householder_factor(Eigen::MatrixXd work) {
  const Index m = work.rows();
  const Index k = work.cols();
  const Index steps = std::min(m, k);
  Reflectors f{Eigen::MatrixXd::Zero(m, steps), Eigen::VectorXd::Zero(steps), {}};

  for (Index j = 0; j < steps; ++j) {
    const Index len = m - j;
    const double norm_x = work.col(j).tail(len).norm();
    if (norm_x == 0.0) {
      continue;
    }
    const double alpha = work(j, j) >= 0.0 ? -norm_x : norm_x;
    auto v = f.vectors.col(j).tail(len);
    v = work.col(j).tail(len);
    v(0) -= alpha;
    const double vv = v.squaredNorm();
    if (vv == 0.0) {
      continue;
    }
    f.beta(j) = 2.0 / vv;
    auto block = work.bottomRightCorner(len, k - j);
    const Eigen::RowVectorXd w = v.transpose() * block;
    block.noalias() -= f.beta(j) * v * w;
    work.col(j).tail(len - 1).setZero();
    work(j, j) = alpha;
  }
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < std::min(i, k); ++j) {
      work(i, j) = 0.0;
    }
  }
  f.triangular = std::move(work);
  return f;
}

/// x <- H^T x = H_{p-1} ... H_0 x.
inline void apply_reflectors_transposed(const Reflectors& f, Eigen::MatrixXd& x) {
  const Index m = f.vectors.rows();
  for (Index j = 0; j < f.beta.size(); ++j) {
    if (f.beta(j) == 0.0) {
      continue;
    }
    const auto v = f.vectors.col(j).tail(m - j);
    auto block = x.bottomRows(m - j);
    const Eigen::RowVectorXd w = v.transpose() * block;
    block.noalias() -= f.beta(j) * v * w;
  }
}

/// x <- H x = H_0 ... H_{p-1} x.
inline void apply_reflectors(const Reflectors& f, Eigen::MatrixXd& x) {
  const Index m = f.vectors.rows();
  for (Index j = f.beta.size() - 1; j >= 0; --j) {
    if (f.beta(j) == 0.0) {
      continue;
    }
    const auto v = f.vectors.col(j).tail(m - j);
    auto block = x.bottomRows(m - j);
    const Eigen::RowVectorXd w = v.transpose() * block;
    block.noalias() -= f.beta(j) * v * w;
  }
}

/// Thin factors (q: m x p, r: p x k, p = min(m, k)) with a nonnegative diagonal.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> householder_thin(const Eigen::MatrixXd& a) {
  const Index p = std::min(a.rows(), a.cols());
  Reflectors f = householder_factor(a);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(a.rows(), p);
  apply_reflectors(f, q);
  Eigen::MatrixXd r = f.triangular.topRows(p);
  for (Index j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) {
      r.row(j) *= -1.0;
      q.col(j) *= -1.0;
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace detail

/**
 * Thin Householder QR of an m x k matrix with m >= k.
 *
 * Columns whose trailing part is exactly zero get the identity reflector, so
 * a zero input yields q = first k columns of I and r = 0. The diagonal of r
 * is made nonnegative by flipping the matching column of q.
 */
inline QrFactors householder_qr(const DenseMatrix& a) {
  if (a.rows() < a.cols()) {
    throw ShapeError("householder_qr: needs rows >= cols, got " + shape_string(a));
  }
  auto [q, r] = detail::householder_thin(a.eigen());
  return {DenseMatrix::from_eigen(q), DenseMatrix::from_eigen(r)};
}

/**
 * Thin SVD with min(m, n) triplets, ordered by nonincreasing singular value
 * and normalized to the SvdTriplet sign convention. Exactly equal singular
 * values keep the order produced by the divide-and-conquer routine.
 */
inline SvdTriplet thin_svd(const DenseMatrix& a) {
  if (!a.all_finite()) {
    throw NumericError("thin_svd: non-finite input");
  }
  detail::record_svd(a.rows(), a.cols());
  const Index k = std::min(a.rows(), a.cols());
  if (k == 0) {
    return {DenseMatrix(a.rows(), 0), {}, DenseMatrix(a.cols(), 0)};
  }

  const Eigen::MatrixXd work = a.eigen();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericError("thin_svd: bidiagonal divide-and-conquer did not converge on " +
                       shape_string(a) + " input");
  }

  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();
  detail::normalize_signs(u, v);

  const auto& sv = svd.singularValues();
  std::vector<double> s(sv.data(), sv.data() + sv.size());
  return {DenseMatrix::from_eigen(u), std::move(s), DenseMatrix::from_eigen(v)};
}

/// u * diag(s) * v^T as a dense matrix.
inline DenseMatrix reconstruct(const SvdTriplet& t) {
  DenseMatrix scaled = t.u;
  for (Index j = 0; j < scaled.cols(); ++j) {
    scaled.eigen().col(j) *= t.s[static_cast<std::size_t>(j)];
  }
  return matmul_nt(scaled, t.v);
}

/// Leading `rank` triplets of t.
inline SvdTriplet truncate(const SvdTriplet& t, Index rank) {
  if (rank < 0 || rank > t.rank()) {
    throw ShapeError("truncate: rank " + std::to_string(rank) + " exceeds " +
                     std::to_string(t.rank()));
  }
  return {DenseMatrix::from_eigen(t.u.eigen().leftCols(rank)),
          std::vector<double>(t.s.begin(), t.s.begin() + rank),
          DenseMatrix::from_eigen(t.v.eigen().leftCols(rank))};
}

}  // namespace nlrm
