#pragma once

// Maximal-type operators over a chosen family of cubes: Hardy-Littlewood,
// sharp, weak sharp and median sharp maximal functions, plus medians and
// median oscillations of a function on a cube.
//
// All operators are brute force over the cube family. The suprema are taken
// per finest cell over the family members containing that cell.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wbmo/grid.hpp"
#include "wbmo/oscillation.hpp"

namespace wbmo {

enum class FamilyKind { Dyadic, Full1D, ShiftedDyadic, LocalizedDyadic };

/// Which cubes a supremum ranges over.
///  - Dyadic: every dyadic cube of the grid.
///  - Full1D: every lattice interval (d = 1 only), standing in for all cubes.
///  - ShiftedDyadic: dyadic cubes plus their translates by one and two thirds
///    of their side (rounded to the lattice) along each axis.
///  - LocalizedDyadic: dyadic cubes contained in `root`.
struct MaximalFlavor {
  FamilyKind kind = FamilyKind::Dyadic;
  Cube root{};

  static constexpr MaximalFlavor dyadic() { return {FamilyKind::Dyadic, {}}; }
  static constexpr MaximalFlavor full_1d() { return {FamilyKind::Full1D, {}}; }
  static constexpr MaximalFlavor shifted_dyadic() { return {FamilyKind::ShiftedDyadic, {}}; }
  static constexpr MaximalFlavor localized(Cube q) { return {FamilyKind::LocalizedDyadic, q}; }

  [[nodiscard]] std::string name() const {
    switch (kind) {
      case FamilyKind::Dyadic: return "dyadic";
      case FamilyKind::Full1D: return "full1d";
      case FamilyKind::ShiftedDyadic: return "shifted";
      case FamilyKind::LocalizedDyadic: return "localized";
    }
    return "?";
  }
};

inline std::vector<LatticeBox> dyadic_boxes(const DyadicGrid& g) {
  std::vector<LatticeBox> out;
  for (const Cube& q : dyadic_cubes(g)) out.push_back(q.box(g));
  return out;
}

inline std::vector<LatticeBox> shifted_dyadic_boxes(const DyadicGrid& g) {
  const Index n = g.cells_per_axis();
  std::vector<LatticeBox> out;
  for (int k = 0; k <= g.depth; ++k) {
    const Index s = n >> k;
    const std::array<Index, 3> shifts{0, static_cast<Index>(std::llround(static_cast<double>(s) / 3.0)),
                                      static_cast<Index>(std::llround(2.0 * static_cast<double>(s) / 3.0))};
    for (Index sx : shifts) {
      for (Index sy : (g.dimension == 2 ? shifts : std::array<Index, 3>{0, 0, 0})) {
        for (Index x0 = sx; x0 + s <= n; x0 += s) {
          if (g.dimension == 1) {
            out.push_back(LatticeBox::interval(x0, x0 + s));
            continue;
          }
          for (Index y0 = sy; y0 + s <= n; y0 += s) out.push_back({{x0, y0}, {x0 + s, y0 + s}});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<LatticeBox> localized_boxes(const DyadicGrid& g, const Cube& root) {
  std::vector<LatticeBox> out;
  for (int k = root.level; k <= g.depth; ++k) {
    for (const Cube& q : cubes_at_level(g, k))
      if (root.contains(q)) out.push_back(q.box(g));
  }
  return out;
}

/// Materialized cube family. Full1D has n(n+1)/2 members.
inline std::vector<LatticeBox> cube_family(const DyadicGrid& g, const MaximalFlavor& flavor) {
  switch (flavor.kind) {
    case FamilyKind::Dyadic: return dyadic_boxes(g);
    case FamilyKind::Full1D: return enumerate_boxes_1d(g);
    case FamilyKind::ShiftedDyadic: return shifted_dyadic_boxes(g);
    case FamilyKind::LocalizedDyadic: return localized_boxes(g, flavor.root);
  }
  return {};
}

/// Per-cell supremum of a non-negative box functional over the family members
/// containing the cell. Cells covered by no member get 0.
template <class BoxValue>
GridFunction sup_over_family(const DyadicGrid& g, const MaximalFlavor& flavor, BoxValue&& value) {
  std::vector<double> out(g.cell_count(), 0.0);
  if (flavor.kind == FamilyKind::Full1D) {
    if (g.dimension != 1) throw unsupported_error("Full1D family needs d = 1");
    // For each left end i, suffix maxima over right ends give the best interval
    // [i, j) containing every cell k < j in O(n) per i.
    const Index n = g.cells_per_axis();
    std::vector<double> suffix(static_cast<std::size_t>(n) + 2, 0.0);
    for (Index i = 0; i < n; ++i) {
      suffix[static_cast<std::size_t>(n) + 1] = 0.0;
      for (Index j = n; j > i; --j)
        suffix[static_cast<std::size_t>(j)] =
            std::max(suffix[static_cast<std::size_t>(j) + 1], value(LatticeBox::interval(i, j)));
      for (Index k = i; k < n; ++k) {
        auto& cell = out[static_cast<std::size_t>(k)];
        cell = std::max(cell, suffix[static_cast<std::size_t>(k) + 1]);
      }
    }
    return GridFunction(g, std::move(out));
  }
  for (const LatticeBox& b : cube_family(g, flavor)) {
    const double v = value(b);
    for_each_cell(g, b, [&](std::size_t k) { out[k] = std::max(out[k], v); });
  }
  return GridFunction(g, std::move(out));
}

/// Mf = sup_Q <|f|>_Q 1_Q over the flavor's family.
inline GridFunction maximal(const GridFunction& f, const MaximalFlavor& flavor) {
  const DyadicGrid& g = f.grid();
  if (flavor.kind == FamilyKind::Full1D) {
    if (g.dimension != 1) throw unsupported_error("Full1D family needs d = 1");
    // Running sums per left end keep this O(n^2).
    const Index n = g.cells_per_axis();
    std::vector<double> out(g.cell_count(), 0.0);
    std::vector<double> avg(static_cast<std::size_t>(n) + 2, 0.0);
    for (Index i = 0; i < n; ++i) {
      CompensatedSum acc;
      for (Index j = i + 1; j <= n; ++j) {
        acc.add(std::abs(f[static_cast<std::size_t>(j - 1)]));
        avg[static_cast<std::size_t>(j)] = acc.value() / static_cast<double>(j - i);
      }
      double run = 0.0;
      for (Index j = n; j > i; --j) {
        run = std::max(run, avg[static_cast<std::size_t>(j)]);
        auto& cell = out[static_cast<std::size_t>(j - 1)];
        cell = std::max(cell, run);
      }
    }
    return GridFunction(g, std::move(out));
  }
  return sup_over_family(g, flavor, [&](const LatticeBox& b) { return average(f, b, AverageOrder::of(1.0)); });
}

/// Mean oscillation <f - <f>_Q>_{1,Q}.
inline double mean_oscillation(const GridFunction& f, const LatticeBox& b) { return mean_oscillation(gather(f, b)); }

/// inf_c |Q|^{-1} ||(f - c) 1_Q||_{L^{1,inf}(Q)}.
inline double weak_oscillation(const GridFunction& f, const LatticeBox& b) {
  return min_weak_deviation(sorted_copy(gather(f, b)));
}

/// M^# f.
inline GridFunction sharp_maximal(const GridFunction& f, const MaximalFlavor& flavor) {
  return sup_over_family(f.grid(), flavor, [&](const LatticeBox& b) { return mean_oscillation(f, b); });
}

/// M^#_wk f.
inline GridFunction weak_sharp_maximal(const GridFunction& f, const MaximalFlavor& flavor) {
  return sup_over_family(f.grid(), flavor, [&](const LatticeBox& b) { return weak_oscillation(f, b); });
}

inline MedianSet median(const GridFunction& f, const LatticeBox& b) { return median_set(sorted_copy(gather(f, b))); }
inline MedianSet median(const GridFunction& f, const Cube& q) { return median(f, q.box(f.grid())); }

/// The default lambda = 2^{-d-2} of the local mean oscillation formula.
inline double default_lambda(int dimension) { return std::ldexp(1.0, -dimension - 2); }

inline double median_oscillation(const GridFunction& f, const LatticeBox& b, double lambda) {
  return median_oscillation(sorted_copy(gather(f, b)), lambda).value;
}
inline double median_oscillation(const GridFunction& f, const Cube& q, double lambda) {
  return median_oscillation(f, q.box(f.grid()), lambda);
}
inline double median_oscillation(const GridFunction& f, const Cube& q) {
  return median_oscillation(f, q, default_lambda(f.grid().dimension));
}

/// M^#_lambda f = sup_Q omega_lambda(f; Q) 1_Q.
inline GridFunction median_sharp_maximal(const GridFunction& f, const MaximalFlavor& flavor, double lambda) {
  return sup_over_family(f.grid(), flavor, [&](const LatticeBox& b) { return median_oscillation(f, b, lambda); });
}

/// Pointwise band of M^# f / M(M^#_lambda f) over cells where both are
/// positive; `undefined` counts cells where the denominator vanishes but the
/// numerator does not.
struct RatioBand {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t undefined = 0;
  std::size_t samples = 0;

  void merge(const RatioBand& o) {
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
    undefined += o.undefined;
    samples += o.samples;
  }
};

inline RatioBand john_stromberg_band(const GridFunction& f, const MaximalFlavor& flavor, double lambda) {
  const GridFunction num = sharp_maximal(f, flavor);
  const GridFunction den = maximal(median_sharp_maximal(f, flavor, lambda), flavor);
  RatioBand band;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (num[k] <= 0.0 && den[k] <= 0.0) continue;
    if (den[k] <= 0.0) {
      ++band.undefined;
      continue;
    }
    const double r = num[k] / den[k];
    band.lo = std::min(band.lo, r);
    band.hi = std::max(band.hi, r);
    ++band.samples;
  }
  return band;
}

}  // namespace wbmo
