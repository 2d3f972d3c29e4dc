#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nlrm/errors.hpp"

namespace nlrm {

using Index = Eigen::Index;

/**
 * Row-major dense real matrix.
 *
 * Every constructor that accepts external values rejects NaN and Inf, so a
 * DenseMatrix built through the public API is finite. Element access through
 * operator() or eigen() is unchecked.
 */
class DenseMatrix {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  DenseMatrix() = default;

  /// Zero-filled rows x cols matrix.
  DenseMatrix(Index rows, Index cols) {
    if (rows < 0 || cols < 0) {
      throw ShapeError("DenseMatrix: negative dimension");
    }
    storage_ = Storage::Zero(rows, cols);
  }

  /// Takes row-major values; data.size() must equal rows * cols.
  DenseMatrix(Index rows, Index cols, std::span<const double> data) : DenseMatrix(rows, cols) {
    if (static_cast<std::size_t>(rows * cols) != data.size()) {
      throw ShapeError("DenseMatrix: expected " + std::to_string(rows * cols) + " values, got " +
                       std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      storage_.data()[i] = data[i];
    }
    require_finite();
  }

  DenseMatrix(Index rows, Index cols, const std::vector<double>& data)
      : DenseMatrix(rows, cols, std::span<const double>(data)) {}

  /// Nested-list literal, one inner list per row.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n_rows = static_cast<Index>(rows.size());
    const auto n_cols = n_rows == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
    storage_ = Storage::Zero(n_rows, n_cols);
    Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Index>(row.size()) != n_cols) {
        throw ShapeError("DenseMatrix: ragged initializer at row " + std::to_string(i));
      }
      Index j = 0;
      for (double v : row) {
        storage_(i, j++) = v;
      }
      ++i;
    }
    require_finite();
  }

  /// Copies any Eigen expression; rejects non-finite entries.
  template <typename Derived>
  static DenseMatrix from_eigen(const Eigen::MatrixBase<Derived>& m) {
    DenseMatrix out;
    out.storage_ = m;
    out.require_finite();
    return out;
  }

  static DenseMatrix identity(Index n) {
    DenseMatrix out(n, n);
    out.storage_.setIdentity();
    return out;
  }

  Index rows() const noexcept { return storage_.rows(); }
  Index cols() const noexcept { return storage_.cols(); }
  Index size() const noexcept { return storage_.size(); }
  bool empty() const noexcept { return storage_.size() == 0; }

  double operator()(Index i, Index j) const { return storage_(i, j); }
  double& operator()(Index i, Index j) { return storage_(i, j); }

  std::span<const double> data() const noexcept {
    return {storage_.data(), static_cast<std::size_t>(storage_.size())};
  }
  std::span<double> data() noexcept {
    return {storage_.data(), static_cast<std::size_t>(storage_.size())};
  }

  const Storage& eigen() const noexcept { return storage_; }
  Storage& eigen() noexcept { return storage_; }

  DenseMatrix transpose() const {
    DenseMatrix out;
    out.storage_ = storage_.transpose();
    return out;
  }

  double min_entry() const { return storage_.size() == 0 ? 0.0 : storage_.minCoeff(); }

  bool all_finite() const { return storage_.allFinite(); }

  void require_finite() const {
    if (!storage_.allFinite()) {
      throw NumericError("DenseMatrix: non-finite entry");
    }
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.storage_ == b.storage_;
  }

 private:
  Storage storage_;
};

inline std::string shape_string(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace nlrm
