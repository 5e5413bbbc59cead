#pragma once

// Independent brute-force reference computations. These deliberately avoid
// the library's algorithms: plain long double loops, explicit enumeration,
// dense scans. They are slow and only meant for small inputs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using Real = long double;

inline double mean(const std::vector<double>& v) {
  Real s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<Real>(v.size()));
}

inline double mean_abs_dev(const std::vector<double>& v, double c) {
  Real s = 0;
  for (double x : v) s += std::fabs(static_cast<Real>(x) - c);
  return static_cast<double>(s / static_cast<Real>(v.size()));
}

/// sup_t t |{|v - c| > t}| / n evaluated by letting t approach every
/// distinct deviation from below.
inline double weak_quasinorm(const std::vector<double>& v, double c) {
  Real best = 0;
  for (double a : v) {
    const Real t = std::fabs(static_cast<Real>(a) - c);
    std::size_t cnt = 0;
    for (double b : v)
      if (std::fabs(static_cast<Real>(b) - c) >= t) ++cnt;
    best = std::max(best, t * static_cast<Real>(cnt));
  }
  return static_cast<double>(best / static_cast<Real>(v.size()));
}

/// Dense scan of inf_c weak_quasinorm. The objective is 1-Lipschitz in c, so
/// the true minimum lies within step/2 below the returned value.
struct DenseMin {
  double value;
  double step;
};
inline DenseMin min_weak_dense(const std::vector<double>& v, int samples = 20000) {
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  if (hi == lo) return {0.0, 0.0};
  const double step = (hi - lo) / samples;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) best = std::min(best, weak_quasinorm(v, lo + step * i));
  return {best, step};
}

/// inf_c inf{t : #{|v - c| > t} <= lambda n} by trying every window centre
/// among all pairwise midpoints and every radius among the induced deviations.
inline double median_oscillation(const std::vector<double>& v, double lambda) {
  const Real allowed = static_cast<Real>(lambda) * v.size();
  double best = std::numeric_limits<double>::infinity();
  for (double a : v)
    for (double b : v) {
      const double c = 0.5 * (a + b);
      std::vector<double> dev;
      for (double x : v) dev.push_back(std::fabs(x - c));
      std::sort(dev.begin(), dev.end());
      for (double t : dev) {
        std::size_t above = 0;
        for (double x : dev)
          if (x > t) ++above;
        if (static_cast<Real>(above) <= allowed * (1 + 1e-14L)) {
          best = std::min(best, t);
          break;
        }
      }
    }
  return best;
}

/// Every m in [lo, hi] with #{v > m} <= n/2 and #{v < m} <= n/2, scanned on
/// the sample values.
inline std::pair<double, double> median_range(const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double m : v) {
    std::size_t above = 0, below = 0;
    for (double x : v) {
      above += x > m;
      below += x < m;
    }
    if (2 * above <= v.size() && 2 * below <= v.size()) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  return {lo, hi};
}

}  // namespace oracle
