#pragma once

// Weights and their Muckenhoupt-type characteristics over a cube family.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wbmo/grid.hpp"
#include "wbmo/maximal.hpp"

namespace wbmo {

/// |x - center|^delta, the closed form behind a sampled power weight.
struct PowerLaw {
  double delta = 0.0;
  std::array<double, 2> center{0.0, 0.0};
};

/// Strictly positive grid function, optionally tagged with the power law it
/// samples.
class Weight {
public:
  Weight() = default;
  explicit Weight(GridFunction w, std::string label = "weight", std::optional<PowerLaw> law = std::nullopt)
      : w_(std::move(w)), label_(std::move(label)), law_(law) {
    for (double v : w_.values()) require(v > 0.0, "weights must be strictly positive");
  }

  [[nodiscard]] const GridFunction& values() const { return w_; }
  [[nodiscard]] const DyadicGrid& grid() const { return w_.grid(); }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const std::optional<PowerLaw>& power_law() const { return law_; }
  [[nodiscard]] std::optional<double> power_exponent() const {
    return law_ ? std::optional<double>(law_->delta) : std::nullopt;
  }

  /// sigma = w^{-1}.
  [[nodiscard]] Weight inverse() const {
    std::optional<PowerLaw> law;
    if (law_) law = PowerLaw{-law_->delta, law_->center};
    return Weight(w_.reciprocal(), label_ + "^-1", law);
  }
  /// c w; the closed form is dropped unless c = 1.
  [[nodiscard]] Weight scaled(double c) const {
    return Weight(w_.scaled(c), label_, c == 1.0 ? law_ : std::nullopt);
  }

private:
  GridFunction w_{};
  std::string label_{};
  std::optional<PowerLaw> law_{};
};

namespace stock {

inline std::string short_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline double distance(const DyadicGrid& g, std::array<double, 2> center, double x, double y) {
  const double dx = x - center[0];
  if (g.dimension == 1) return std::abs(dx);
  const double dy = y - center[1];
  return std::hypot(dx, dy);
}

inline Weight identity(const DyadicGrid& g) { return Weight(GridFunction::constant(g, 1.0), "one"); }

/// 2 on the lower half of the root (first axis), 1 elsewhere.
inline Weight step(const DyadicGrid& g, double high = 2.0) {
  const double mid = g.origin[0] + 0.5 * g.side;
  auto f = [&](double x, double) { return x < mid ? high : 1.0; };
  return Weight(GridFunction::sample(g, f), "step");
}

/// |x - center|^delta sampled at cell midpoints.
inline Weight power(const DyadicGrid& g, double delta, std::array<double, 2> center) {
  auto f = [&](double x, double y) { return std::pow(distance(g, center, x, y), delta); };
  return Weight(GridFunction::sample(g, f), "power(" + short_number(delta) + ")", PowerLaw{delta, center});
}

/// 2^{floor(log2 |x - center|)}: constant on dyadic shells around `center`.
inline Weight lacunary(const DyadicGrid& g, std::array<double, 2> center) {
  auto f = [&](double x, double y) { return std::exp2(std::floor(std::log2(distance(g, center, x, y)))); };
  return Weight(GridFunction::sample(g, f), "lacunary");
}

inline const std::vector<double>& power_exponents() {
  static const std::vector<double> deltas{-0.75, -0.5, -0.25, 0.25, 0.5};
  return deltas;
}

/// The stock bank: one, step, powers for every exponent in power_exponents(),
/// and the lacunary weight. `center` should be a lattice point so that no
/// midpoint sample hits the singularity.
inline std::vector<Weight> family(const DyadicGrid& g, std::array<double, 2> center) {
  std::vector<Weight> out{identity(g), step(g)};
  for (double d : power_exponents()) out.push_back(power(g, d, center));
  out.push_back(lacunary(g, center));
  return out;
}

}  // namespace stock

namespace detail {

// Calls visit(box, mean_of_w, min_of_w) for every family member. Full1D is
// swept with running sums so it costs O(n^2).
template <class Visit>
void for_each_mean_min(const GridFunction& w, const MaximalFlavor& flavor, Visit&& visit) {
  const DyadicGrid& g = w.grid();
  if (flavor.kind == FamilyKind::Full1D) {
    if (g.dimension != 1) throw unsupported_error("Full1D family needs d = 1");
    const Index n = g.cells_per_axis();
    for (Index i = 0; i < n; ++i) {
      CompensatedSum acc;
      double lo = std::numeric_limits<double>::infinity();
      for (Index j = i + 1; j <= n; ++j) {
        const double v = w[static_cast<std::size_t>(j - 1)];
        acc.add(std::abs(v));
        lo = std::min(lo, v);
        visit(LatticeBox::interval(i, j), acc.value() / static_cast<double>(j - i), lo);
      }
    }
    return;
  }
  for (const LatticeBox& b : cube_family(g, flavor)) {
    double lo = std::numeric_limits<double>::infinity();
    for_each_cell(g, b, [&](std::size_t k) { lo = std::min(lo, w[k]); });
    visit(b, average(w, b, AverageOrder::of(1.0)), lo);
  }
}

}  // namespace detail

/// [w]_{A_1} = sup_Q <w>_Q <w^{-1}>_{inf,Q}, the supremum form.
inline double a1_characteristic(const Weight& w, const MaximalFlavor& flavor) {
  double best = 0.0;
  detail::for_each_mean_min(w.values(), flavor, [&](const LatticeBox&, double avg, double lo) {
    best = std::max(best, avg / lo);
  });
  return best;
}

/// [w]_{A_1} = ||(M w) w^{-1}||_inf, the maximal-operator form.
inline double a1_characteristic_via_maximal(const Weight& w, const MaximalFlavor& flavor) {
  const GridFunction mw = maximal(w.values(), flavor);
  double best = 0.0;
  for (std::size_t k = 0; k < mw.size(); ++k) best = std::max(best, mw[k] / w.values()[k]);
  return best;
}

/// [w]_{A_p} = sup_Q <w>_Q <w^{1-p'}>_Q^{p-1}.
inline double ap_characteristic(const Weight& w, double p, const MaximalFlavor& flavor) {
  require(p > 1.0 && std::isfinite(p), "A_p needs p > 1");
  const double dual = 1.0 - p / (p - 1.0);  // 1 - p'
  const GridFunction& v = w.values();
  const GridFunction u = v.map([dual](double x) { return std::pow(x, dual); });
  const DyadicGrid& g = v.grid();
  double best = 0.0;
  if (flavor.kind == FamilyKind::Full1D) {
    if (g.dimension != 1) throw unsupported_error("Full1D family needs d = 1");
    const Index n = g.cells_per_axis();
    for (Index i = 0; i < n; ++i) {
      CompensatedSum a;
      CompensatedSum b;
      for (Index j = i + 1; j <= n; ++j) {
        a.add(v[static_cast<std::size_t>(j - 1)]);
        b.add(u[static_cast<std::size_t>(j - 1)]);
        const double len = static_cast<double>(j - i);
        best = std::max(best, (a.value() / len) * std::pow(b.value() / len, p - 1.0));
      }
    }
    return best;
  }
  for (const LatticeBox& q : cube_family(g, flavor))
    best = std::max(best, mean(v, q) * std::pow(mean(u, q), p - 1.0));
  return best;
}

namespace detail {

// int_Q M^{D(Q)} w for every dyadic Q (or those inside `root`), returned as
// the supremum of that integral over w(Q).
inline double dyadic_ainfty(const GridFunction& w, std::optional<Cube> root) {
  const DyadicGrid& g = w.grid();
  const int depth = g.depth;
  const int d = g.dimension;
  // Pyramid of dyadic means, level k stored row-major with 2^k per axis.
  std::vector<std::vector<double>> avg(static_cast<std::size_t>(depth) + 1);
  avg[static_cast<std::size_t>(depth)] = w.values();
  for (int k = depth - 1; k >= 0; --k) {
    const Index n = Index{1} << k;
    auto& cur = avg[static_cast<std::size_t>(k)];
    const auto& fine = avg[static_cast<std::size_t>(k) + 1];
    cur.assign(static_cast<std::size_t>(d == 1 ? n : n * n), 0.0);
    for (Index iy = 0; iy < (d == 1 ? 1 : n); ++iy)
      for (Index ix = 0; ix < n; ++ix) {
        if (d == 1) {
          cur[static_cast<std::size_t>(ix)] =
              0.5 * (fine[static_cast<std::size_t>(2 * ix)] + fine[static_cast<std::size_t>(2 * ix + 1)]);
        } else {
          const Index nf = 2 * n;
          auto at = [&](Index x, Index y) { return fine[static_cast<std::size_t>(y * nf + x)]; };
          cur[static_cast<std::size_t>(iy * n + ix)] =
              0.25 * (at(2 * ix, 2 * iy) + at(2 * ix + 1, 2 * iy) + at(2 * ix, 2 * iy + 1) + at(2 * ix + 1, 2 * iy + 1));
        }
      }
  }
  auto mean_at = [&](int k, Index ix, Index iy) {
    const Index n = Index{1} << k;
    return avg[static_cast<std::size_t>(k)][static_cast<std::size_t>(d == 1 ? ix : iy * n + ix)];
  };
  double best = 0.0;
  for (const Cube& q : dyadic_cubes(g)) {
    if (root && !root->contains(q)) continue;
    const LatticeBox b = q.box(g);
    CompensatedSum local;
    CompensatedSum mass;
    for_each_cell(g, b, [&](std::size_t cell) {
      const auto [ix, iy] = g.unflat(cell);
      double m = 0.0;
      for (int k = q.level; k <= depth; ++k) {
        const int shift = depth - k;
        m = std::max(m, mean_at(k, ix >> shift, iy >> shift));
      }
      local.add(m);
      mass.add(w[cell]);
    });
    best = std::max(best, local.value() / mass.value());
  }
  return best;
}

}  // namespace detail

/// Fujii-Wilson constant sup_Q w(Q)^{-1} int_Q M^{F(Q)} w over the flavor's
/// family F, where F(Q) are the members contained in Q. For the dyadic family
/// this is [w]_{A_inf(D)}; for Full1D and ShiftedDyadic it is the
/// non-dyadic constant with M(1_Q w) realized by members inside Q.
inline double ainfty_characteristic(const Weight& w, const MaximalFlavor& flavor) {
  const GridFunction& v = w.values();
  const DyadicGrid& g = v.grid();
  switch (flavor.kind) {
    case FamilyKind::Dyadic: return detail::dyadic_ainfty(v, std::nullopt);
    case FamilyKind::LocalizedDyadic: return detail::dyadic_ainfty(v, flavor.root);
    case FamilyKind::Full1D:
      require(g.depth <= 8, "non-dyadic A_inf over all intervals is limited to depth 8");
      [[fallthrough]];
    case FamilyKind::ShiftedDyadic: {
      const std::vector<LatticeBox> fam = cube_family(g, flavor);
      // Members grouped by side and sorted by corner, with their means, so the
      // members inside q are found by a range search per side.
      std::map<Index, std::vector<std::pair<LatticeBox, double>>> by_side;
      for (const LatticeBox& p : fam) by_side[p.extent(0)].push_back({p, mean(v, p)});
      for (auto& [side, list] : by_side) std::sort(list.begin(), list.end(), [](auto& a, auto& b) { return a.first < b.first; });
      double best = 0.0;
      std::vector<double> local;
      for (const LatticeBox& q : fam) {
        const std::size_t len0 = static_cast<std::size_t>(q.extent(0));
        const std::size_t len1 = static_cast<std::size_t>(q.extent(1));
        local.assign(len0 * len1, 0.0);
        for (const auto& [side, list] : by_side) {
          if (side > q.extent(0)) break;
          auto it = std::lower_bound(list.begin(), list.end(), q.lo[0],
                                     [](const auto& e, Index x) { return e.first.lo[0] < x; });
          for (; it != list.end() && it->first.lo[0] + side <= q.hi[0]; ++it) {
            const LatticeBox& p = it->first;
            if (!q.contains(p)) continue;
            for (Index iy = p.lo[1]; iy < p.hi[1]; ++iy)
              for (Index ix = p.lo[0]; ix < p.hi[0]; ++ix) {
                auto& cell = local[static_cast<std::size_t>((iy - q.lo[1]) * q.extent(0) + (ix - q.lo[0]))];
                cell = std::max(cell, it->second);
              }
          }
        }
        const double integral_local = compensated_sum(local) * g.cell_volume();
        best = std::max(best, integral_local / weight_mass(v, q));
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace wbmo
