#pragma once

#include <cmath>
#include <ranges>

namespace wbmo {

/// Neumaier's variant of Kahan summation. Every integral in the library goes
/// through this accumulator so that identity checks can be asserted at 1e-12.
class CompensatedSum {
public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(double initial) : sum_(initial) {}

  constexpr void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  [[nodiscard]] constexpr double value() const { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

template <std::ranges::input_range R>
[[nodiscard]] double compensated_sum(const R& range) {
  CompensatedSum acc;
  for (double x : range) acc.add(x);
  return acc.value();
}

}  // namespace wbmo
