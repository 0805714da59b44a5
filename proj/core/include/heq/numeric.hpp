#pragma once

#include <cmath>

namespace heq {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum& add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  CompensatedSum& operator+=(double v) noexcept { return add(v); }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace heq
