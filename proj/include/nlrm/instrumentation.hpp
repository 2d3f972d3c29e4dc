#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Core>

namespace nlrm {

/// Shape of one counted product: (rows x inner) * (inner x cols).
struct ProductShape {
  Eigen::Index rows;
  Eigen::Index inner;
  Eigen::Index cols;
};

struct SvdShape {
  Eigen::Index rows;
  Eigen::Index cols;
};

/// Records of the products and SVDs issued by the current thread while a
/// CountingScope is active.
struct OpCounters {
  std::vector<ProductShape> products;
  std::vector<SvdShape> svds;

  std::size_t svds_with_shape(Eigen::Index rows, Eigen::Index cols) const {
    return static_cast<std::size_t>(std::count_if(svds.begin(), svds.end(), [&](const SvdShape& s) {
      return s.rows == rows && s.cols == cols;
    }));
  }

  /// True when any counted product had an output of at least rows x cols.
  bool any_product_output_at_least(Eigen::Index rows, Eigen::Index cols) const {
    return std::any_of(products.begin(), products.end(), [&](const ProductShape& p) {
      return p.rows >= rows && p.cols >= cols;
    });
  }
};

namespace detail {
inline thread_local OpCounters* active_counters = nullptr;
}  // namespace detail

/**
 * RAII scope that captures operation counts on the calling thread. Scopes
 * nest; the innermost one receives the records. Nothing is recorded when no
 * scope is active.
 */
class CountingScope {
 public:
  CountingScope() : previous_(detail::active_counters) { detail::active_counters = &counters_; }
  ~CountingScope() { detail::active_counters = previous_; }

  CountingScope(const CountingScope&) = delete;
  CountingScope& operator=(const CountingScope&) = delete;

  const OpCounters& counters() const noexcept { return counters_; }

 private:
  OpCounters counters_;
  OpCounters* previous_;
};

namespace detail {

inline void record_product(Eigen::Index rows, Eigen::Index inner, Eigen::Index cols) {
  if (active_counters != nullptr) {
    active_counters->products.push_back({rows, inner, cols});
  }
}

inline void record_svd(Eigen::Index rows, Eigen::Index cols) {
  if (active_counters != nullptr) {
    active_counters->svds.push_back({rows, cols});
  }
}

}  // namespace detail
}  // namespace nlrm
