#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mc {

/// Streaming accumulator for the mean and the second-moment matrix of an
/// m-vector, with enough information for per-entry standard errors.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t m)
      : m_(m), sum_(m), sum_sq_(m), prod_(m * m), prod_sq_(m * m) {}

  void add(std::span<const double> v) {
    ++count_;
    for (std::size_t i = 0; i < m_; ++i) {
      sum_[i] += v[i];
      sum_sq_[i] += v[i] * v[i];
      for (std::size_t j = 0; j < m_; ++j) {
        const double p = v[i] * v[j];
        prod_[i * m_ + j] += p;
        prod_sq_[i * m_ + j] += p * p;
      }
    }
  }

  double n() const { return static_cast<double>(count_); }
  double mean(std::size_t i) const { return sum_[i] / n(); }
  double mean_se(std::size_t i) const {
    const double var = sum_sq_[i] / n() - mean(i) * mean(i);
    return std::sqrt(var / n());
  }
  /// E[v_i v_j]; the field is centred, so this estimates the covariance.
  double second_moment(std::size_t i, std::size_t j) const { return prod_[i * m_ + j] / n(); }
  double second_moment_se(std::size_t i, std::size_t j) const {
    const double m = second_moment(i, j);
    return std::sqrt((prod_sq_[i * m_ + j] / n() - m * m) / n());
  }

 private:
  std::size_t m_;
  std::size_t count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<double> prod_;
  std::vector<double> prod_sq_;
};

}  // namespace mc
