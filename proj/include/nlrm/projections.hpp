#pragma once

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"
#include "nlrm/linalg.hpp"

namespace nlrm {

/// Base point (u, v) of a tangent space of the rank-r manifold. Both factors
/// have r orthonormal columns.
struct TangentFrame {
  DenseMatrix u;
  DenseMatrix v;

  static TangentFrame from(const SvdTriplet& x) { return {x.u, x.v}; }

  Index rank() const noexcept { return u.cols(); }
};

/**
 * Tangent-space projection stored as left * core * right^T.
 *
 * left = [U Q] and right = [V Q^] have orthonormal columns, with Q and Q^
 * orthogonal to U and V. The core is [[U^T Y V, R^^T], [R, 0]], which is
 * 2r x 2r unless a dimension is smaller than 2r.
 */
struct TangentFactored {
  DenseMatrix left;
  DenseMatrix core;
  DenseMatrix right;
};

/// Best rank-r approximation (truncated SVD).
inline SvdTriplet project_fixed_rank(const DenseMatrix& a, Index r) {
  if (r < 1 || r > std::min(a.rows(), a.cols())) {
    throw ShapeError("project_fixed_rank: rank " + std::to_string(r) + " out of range for " +
                     shape_string(a));
  }
  return truncate(thin_svd(a), r);
}

/// Entrywise max(a, 0).
inline DenseMatrix project_nonnegative(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& x : out.data()) {
    x = x < 0.0 ? 0.0 : x;
  }
  return out;
}

namespace detail {

inline void require_frame(const TangentFrame& frame, const DenseMatrix& y, const char* op) {
  if (frame.u.cols() != frame.v.cols()) {
    throw ShapeError(std::string(op) + ": frame factors have different column counts");
  }
  if (frame.u.rows() != y.rows() || frame.v.rows() != y.cols()) {
    throw ShapeError(std::string(op) + ": frame " + shape_string(frame.u) + "/" +
                     shape_string(frame.v) + " does not match " + shape_string(y));
  }
}

/**
 * Given orthonormal basis (m x r) and w (m x r) with w orthogonal to basis,
 * returns q (m x p) and r (p x r), p = min(r, m - r), with q r = w and
 * q^T basis = 0 to working precision.
 *
 * The QR is taken in the coordinates of the basis' Householder reflectors, so
 * the q columns are orthogonal to the basis even when w is rank deficient.
 */
inline std::pair<DenseMatrix, DenseMatrix> complement_qr(const DenseMatrix& basis,
                                                         const DenseMatrix& w) {
  const Index m = basis.rows();
  const Index r = basis.cols();
  const Index p = std::min(r, m - r);

  const Reflectors frame = householder_factor(basis.eigen());
  Eigen::MatrixXd rotated = w.eigen();
  apply_reflectors_transposed(frame, rotated);

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, p);
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(p, r);
  if (p > 0) {
    auto [q_tail, r_tail] = householder_thin(rotated.bottomRows(m - r));
    q.bottomRows(m - r) = q_tail;
    tri = r_tail;
  }
  apply_reflectors(frame, q);
  return {DenseMatrix::from_eigen(q), DenseMatrix::from_eigen(tri)};
}

}  // namespace detail

/// Dense orthogonal projection U U^T Y + Y V V^T - U U^T Y V V^T.
inline DenseMatrix tangent_project_dense(const TangentFrame& frame, const DenseMatrix& y) {
  detail::require_frame(frame, y, "tangent_project_dense");
  const DenseMatrix uty = matmul_tn(frame.u, y);
  const DenseMatrix yv = matmul(y, frame.v);
  const DenseMatrix utyv = matmul(uty, frame.v);
  DenseMatrix out = matmul(frame.u, uty);
  out.eigen() += matmul_nt(yv, frame.v).eigen();
  out.eigen() -= matmul_nt(matmul(frame.u, utyv), frame.v).eigen();
  return out;
}

/**
 * Factored tangent projection. Costs two m x n by r products plus
 * O(r^2 (m + n)); no m x n matrix is formed.
 */
inline TangentFactored tangent_project_structured(const TangentFrame& frame, const DenseMatrix& y) {
  detail::require_frame(frame, y, "tangent_project_structured");
  const Index r = frame.rank();

  const DenseMatrix yv = matmul(y, frame.v);
  const DenseMatrix ytu = matmul_tn(y, frame.u);
  const DenseMatrix utyv = matmul_tn(frame.u, yv);

  // (I - U U^T) Y V and (I - V V^T) Y^T U without forming either projector.
  DenseMatrix w_left = yv;
  w_left.eigen() -= matmul(frame.u, utyv).eigen();
  DenseMatrix w_right = ytu;
  w_right.eigen() -= matmul_nt(frame.v, utyv).eigen();

  auto [q_left, r_left] = detail::complement_qr(frame.u, w_left);
  auto [q_right, r_right] = detail::complement_qr(frame.v, w_right);
  const Index p_left = q_left.cols();
  const Index p_right = q_right.cols();

  TangentFactored out{DenseMatrix(y.rows(), r + p_left), DenseMatrix(r + p_left, r + p_right),
                      DenseMatrix(y.cols(), r + p_right)};
  out.left.eigen() << frame.u.eigen(), q_left.eigen();
  out.right.eigen() << frame.v.eigen(), q_right.eigen();
  auto& core = out.core.eigen();
  core.topLeftCorner(r, r) = utyv.eigen();
  core.topRightCorner(r, p_right) = r_right.eigen().transpose();
  core.bottomLeftCorner(p_left, r) = r_left.eigen();
  return out;
}

/// left * core * right^T as a dense matrix.
inline DenseMatrix reconstruct(const TangentFactored& t) {
  return matmul_nt(matmul(t.left, t.core), t.right);
}

/**
 * Truncated SVD of a factored tangent vector via the SVD of its core:
 * returns (left Psi)[:, :r], Gamma[:r], (right Phi)[:, :r]. Products are at
 * most m x 2r by 2r x r.
 *
 * If the core has fewer than r nonzero singular values the trailing entries
 * of s are zero and the matching columns come from the small SVD.
 */
inline SvdTriplet retract_to_rank(const TangentFactored& t, Index r) {
  const Index k = std::min(t.core.rows(), t.core.cols());
  if (r < 1 || r > k) {
    throw ShapeError("retract_to_rank: rank " + std::to_string(r) + " out of range for core " +
                     shape_string(t.core));
  }
  const SvdTriplet small = truncate(thin_svd(t.core), r);
  SvdTriplet out{matmul(t.left, small.u), small.s, matmul(t.right, small.v)};
  detail::normalize_signs(out.u.eigen(), out.v.eigen());
  return out;
}

}  // namespace nlrm
