#pragma once

// Oscillation functionals of a finite sample of equally weighted values, i.e.
// of a step function restricted to one cube of the grid. All quantities are
// normalized by the number of cells, so they are averages over the cube.

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "wbmo/errors.hpp"
#include "wbmo/summation.hpp"

namespace wbmo {

/// Closed interval of admissible medians.
struct MedianSet {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool contains(double m) const { return lo <= m && m <= hi; }
};

/// Optimal recentering for the median oscillation: the closed window
/// [window_lo, window_hi] carries all but a lambda-fraction of the cells.
struct MedianOscillation {
  double value = 0.0;
  double center = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

inline std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return s;
}

inline double sample_mean(std::span<const double> v) {
  require(!v.empty(), "empty sample");
  return compensated_sum(v) / static_cast<double>(v.size());
}

/// <|v - c|>.
inline double mean_deviation(std::span<const double> v, double c) {
  CompensatedSum acc;
  for (double x : v) acc.add(std::abs(x - c));
  return acc.value() / static_cast<double>(v.size());
}

/// <|v - <v>|>, the mean oscillation.
inline double mean_oscillation(std::span<const double> v) { return mean_deviation(v, sample_mean(v)); }

/// Weighted median interval: lo is the least m with #{v > m} <= n/2, hi the
/// largest m with #{v < m} <= n/2. `sorted` must be ascending.
inline MedianSet median_set(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  require(n > 0, "empty sample");
  // #{v > sorted[i]} = n - upper_bound index. Smallest i with 2 * that <= n.
  MedianSet m;
  for (std::size_t i = 0; i < n; ++i) {
    const auto above = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), sorted[i]));
    if (2 * above <= n) {
      m.lo = sorted[i];
      break;
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto below = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), sorted[i]) - sorted.begin());
    if (2 * below <= n) {
      m.hi = sorted[i];
      break;
    }
  }
  return m;
}

/// inf_c <|v - c|>, attained at any median.
inline double min_mean_deviation(std::span<const double> sorted) {
  return mean_deviation(sorted, median_set(sorted).lo);
}

/// Exact median oscillation
///   inf_c inf{t > 0 : #{|v - c| > t} <= lambda n}
/// realized by the narrowest closed window holding at least (1 - lambda) n values.
inline MedianOscillation median_oscillation(std::span<const double> sorted, double lambda) {
  require(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0, 1)");
  const std::size_t n = sorted.size();
  require(n > 0, "empty sample");
  const auto allowed_outside = static_cast<std::size_t>(std::floor(lambda * static_cast<double>(n) * (1.0 + 1e-14)));
  const std::size_t keep = n - std::min(allowed_outside, n - 1);
  MedianOscillation best{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i + keep <= n; ++i) {
    const double width = sorted[i + keep - 1] - sorted[i];
    if (width / 2.0 < best.value) {
      best.value = width / 2.0;
      best.window_lo = sorted[i];
      best.window_hi = sorted[i + keep - 1];
    }
  }
  best.center = 0.5 * (best.window_lo + best.window_hi);
  return best;
}

/// Normalized weak-L1 quasinorm of v - c: sup_t t #{|v - c| > t} / n, which for
/// a step function equals max_k g_(k) k / n with g_(k) the k-th largest |v - c|.
/// `sorted` must be ascending.
inline double weak_deviation(std::span<const double> sorted, double c) {
  const std::size_t n = sorted.size();
  std::size_t left = 0;
  std::size_t right = n;
  double best = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double gl = c - sorted[left];
    const double gr = sorted[right - 1] - c;
    double g;
    if (gl >= gr) {
      g = gl;
      ++left;
    } else {
      g = gr;
      --right;
    }
    best = std::max(best, g * static_cast<double>(k));
  }
  return best / static_cast<double>(n);
}

namespace detail {

// On an open interval between consecutive breakpoints (data values and
// pairwise midpoints) the order of |v - c| is fixed, so weak_deviation is the
// maximum of lines with slopes +-k/n: U (increasing) and D (decreasing).
// Returns the minimum over [a, b] of max(U, D).
inline double minimize_weak_on_piece(std::span<const double> sorted, double a, double b, double fa, double fb) {
  const std::size_t n = sorted.size();
  const double mid = 0.5 * (a + b);
  // Rank by |v - mid| descending to get each value's superlevel count.
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {std::abs(sorted[i] - mid), i};
  std::sort(order.begin(), order.end(), [](auto& x, auto& y) { return x.first > y.first; });
  struct Line {
    double anchor;
    double count;
  };
  std::vector<Line> up;
  std::vector<Line> down;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r].second;
    const double cnt = static_cast<double>(r + 1) / static_cast<double>(n);
    if (sorted[i] < mid) up.push_back({sorted[i], cnt});
    else down.push_back({sorted[i], cnt});
  }
  auto U = [&](double c) {
    double m = 0.0;
    for (auto& l : up) m = std::max(m, (c - l.anchor) * l.count);
    return m;
  };
  auto D = [&](double c) {
    double m = 0.0;
    for (auto& l : down) m = std::max(m, (l.anchor - c) * l.count);
    return m;
  };
  double lo = a;
  double hi = b;
  if (U(a) >= D(a)) return fa;
  if (U(b) <= D(b)) return fb;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (U(m) < D(m)) lo = m;
    else hi = m;
  }
  return std::min({fa, fb, std::max(U(lo), D(lo)), std::max(U(hi), D(hi))});
}

}  // namespace detail

/// Samples with more distinct values than this use only the coarse candidate
/// set (values and consecutive midpoints) refined by Lipschitz bisection.
inline constexpr std::size_t kExactWeakDistinctLimit = 2048;

/// inf_c of weak_deviation(sorted, c).
///
/// The objective is continuous, 1-Lipschitz and piecewise linear with kinks
/// only at data values, pairwise midpoints and crossings of its linear pieces.
/// Every breakpoint piece that the Lipschitz lower bound cannot exclude is
/// minimized by bisecting for the crossing of its increasing and decreasing
/// envelopes, so the result is exact to rounding.
inline double min_weak_deviation(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  require(n > 0, "empty sample");
  std::vector<double> distinct(sorted.begin(), sorted.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() == 1) return 0.0;
  const double scale = distinct.back() - distinct.front();
  const double tol = 1e-15 * scale;
  auto F = [&](double c) { return weak_deviation(sorted, c); };

  std::vector<double> coarse;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    coarse.push_back(distinct[i]);
    if (i + 1 < distinct.size()) coarse.push_back(0.5 * (distinct[i] + distinct[i + 1]));
  }
  std::vector<double> fc(coarse.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    fc[i] = F(coarse[i]);
    best = std::min(best, fc[i]);
  }
  const bool exact = distinct.size() <= kExactWeakDistinctLimit;
  std::vector<double> mids;
  if (exact) {
    mids.reserve(distinct.size() * distinct.size() / 2);
    for (std::size_t i = 0; i < distinct.size(); ++i)
      for (std::size_t j = i + 2; j < distinct.size(); ++j) mids.push_back(0.5 * (distinct[i] + distinct[j]));
    std::sort(mids.begin(), mids.end());
  }
  for (std::size_t g = 0; g + 1 < coarse.size(); ++g) {
    const double a = coarse[g];
    const double b = coarse[g + 1];
    if (0.5 * (fc[g] + fc[g + 1] - (b - a)) >= best - tol) continue;
    if (!exact) {
      // Lipschitz bisection on the gap.
      std::vector<std::array<double, 4>> stack{{a, b, fc[g], fc[g + 1]}};
      for (int guard = 0; !stack.empty() && guard < 4096; ++guard) {
        auto [x0, x1, f0, f1] = stack.back();
        stack.pop_back();
        if (0.5 * (f0 + f1 - (x1 - x0)) >= best - tol) continue;
        const double xm = 0.5 * (x0 + x1);
        const double fm = F(xm);
        best = std::min(best, fm);
        stack.push_back({x0, xm, f0, fm});
        stack.push_back({xm, x1, fm, f1});
      }
      continue;
    }
    std::vector<double> pts{a};
    for (auto it = std::upper_bound(mids.begin(), mids.end(), a); it != mids.end() && *it < b; ++it)
      if (*it > pts.back()) pts.push_back(*it);
    pts.push_back(b);
    std::vector<double> fp(pts.size());
    fp.front() = fc[g];
    fp.back() = fc[g + 1];
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      fp[i] = F(pts[i]);
      best = std::min(best, fp[i]);
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (0.5 * (fp[i] + fp[i + 1] - (pts[i + 1] - pts[i])) >= best - tol) continue;
      best = std::min(best, detail::minimize_weak_on_piece(sorted, pts[i], pts[i + 1], fp[i], fp[i + 1]));
    }
  }
  return best;
}

}  // namespace wbmo
