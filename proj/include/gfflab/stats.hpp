#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace gfflab {

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
  double standard_error() const {
    return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
  }
};

/// Two-pass mean and unbiased variance with compensated sums.
inline MeanVar mean_var(std::span<const double> xs) {
  MeanVar out;
  out.count = xs.size();
  if (xs.empty()) return out;
  CompensatedSum s;
  for (double x : xs) s += x;
  out.mean = s.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  CompensatedSum ss;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.variance = ss.value() / static_cast<double>(xs.size() - 1);
  return out;
}

}  // namespace gfflab
