#pragma once

// The B(Omega) tail condition of a weight, evaluated on dyadic cubes of the
// grid with the complement integral truncated to the grid's root box.
//
// Three numbers are produced per cube Q, each dominating the previous one:
//   direct  (|Q|/w(Q)) int_{Q^c} w(x) |x-c_Q|^{-d} Omega(l(Q)/|x-c_Q|) dx
//   shell   the same integral with the integrand frozen at its worst value on
//           each Euclidean shell l 2^{m-1} <= |x-c_Q| < l 2^m, m >= 0
//   dilate  2^{2d} sum_{m>=-1} Omega(2^{-m}) w(2^{m+2}Q) / |2^{m+2}Q| * |Q|/w(Q)
// The m = 0 shell (and the m = -1 dilate term) carries the corner region
// l/2 <= |x - c_Q| < l that lies outside Q but inside the unit-radius ball.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "wbmo/grid.hpp"
#include "wbmo/modulus.hpp"
#include "wbmo/weights.hpp"

namespace wbmo {

struct BOmegaCube {
  Cube cube{};
  double direct = 0.0;
  double shell = 0.0;
  double dilate = 0.0;
  /// direct plus the closed-form integral outside the root box, when known.
  double with_tail = std::numeric_limits<double>::quiet_NaN();
  /// Distance from c_Q to the boundary of the root box.
  double truncation_radius = 0.0;
};

struct BOmegaResult {
  double value = 0.0;        // sup of direct
  double shell_bound = 0.0;  // sup of shell
  double dilate_bound = 0.0; // sup of dilate
  double with_tail = std::numeric_limits<double>::quiet_NaN();
  Cube argmax{};
  std::size_t cubes = 0;
  std::size_t skipped = 0;  // cubes whose double does not fit in the root box
  bool dominated = true;    // direct <= shell <= dilate on every cube
  double truncation_radius = std::numeric_limits<double>::infinity();
};

namespace detail {

inline LatticeBox dilate_clipped(const DyadicGrid& g, const LatticeBox& q, int k) {
  // 2^k Q has half-side 2^{k-1} s about the centre; integral for k >= 1.
  LatticeBox out = q;
  for (int a = 0; a < g.dimension; ++a) {
    const Index s = q.extent(a);
    const Index two_c = q.lo[a] + q.hi[a];
    const Index half = (s << k) / 2;
    out.lo[a] = std::max<Index>(0, two_c / 2 - half);
    out.hi[a] = std::min<Index>(g.cells_per_axis(), two_c / 2 + half);
  }
  return out;
}

inline bool dilate_fits(const DyadicGrid& g, const LatticeBox& q, int k) {
  for (int a = 0; a < g.dimension; ++a) {
    const Index half = (q.extent(a) << k) / 2;
    const Index c = (q.lo[a] + q.hi[a]) / 2;
    if (c - half < 0 || c + half > g.cells_per_axis()) return false;
  }
  return true;
}

// Closed-form complement integral outside the root box of a one-dimensional
// power weight |x - x0|^delta, or NaN when unavailable.
inline double outside_tail_1d(const Weight& w, const Modulus& omega, double c, double l) {
  const DyadicGrid& g = w.grid();
  if (g.dimension != 1 || !w.power_law()) return std::numeric_limits<double>::quiet_NaN();
  const double delta = w.power_law()->delta;
  const double x0 = w.power_law()->center[0];
  const double a = g.origin[0];
  const double b = a + g.side;
  if (x0 < a || x0 > b) return std::numeric_limits<double>::quiet_NaN();
  // The integrand behaves like |x|^{delta - 1} Omega(l/|x|) at infinity.
  // Subadditivity gives Omega(t) >= Omega(1) t / 2 on (0, 1], so delta >= 1
  // always diverges; a power modulus t^alpha diverges once delta >= alpha.
  if (delta >= 1.0) return std::numeric_limits<double>::infinity();
  if (const auto alpha = power_exponent_of(omega); alpha && delta >= *alpha)
    return std::numeric_limits<double>::infinity();
  boost::math::quadrature::exp_sinh<double> integrator;
  auto side = [&](double edge, double sign) {
    // x = edge + sign * u, u in (0, inf).
    auto f = [&](double u) {
      const double x = edge + sign * u;
      const double r = std::abs(x - c);
      return std::pow(std::abs(x - x0), delta) / r * omega(l / r);
    };
    return integrator.integrate(f, 1e-12);
  };
  try {
    const double total = side(b, 1.0) + side(a, -1.0);
    return std::isfinite(total) ? total : std::numeric_limits<double>::infinity();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

/// Evaluates all three quantities on one cube whose double fits in the root.
inline BOmegaCube b_omega_on_cube(const Weight& w, const Modulus& omega, const Cube& q) {
  const GridFunction& v = w.values();
  const DyadicGrid& g = v.grid();
  const int d = g.dimension;
  const LatticeBox qb = q.box(g);
  const double l = q.side(g);
  const std::array<double, 2> c{q.center(g, 0), d == 2 ? q.center(g, 1) : 0.0};
  const double h = g.cell_side();
  const double wq = weight_mass(v, qb);
  const double scale = q.volume(g) / wq;

  // Four midpoint sub-samples per axis in every cell outside Q.
  constexpr int kSub = 4;
  const double sub_vol = g.cell_volume() / (d == 1 ? kSub : kSub * kSub);
  CompensatedSum direct;
  CompensatedSum shell;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto [ix, iy] = g.unflat(k);
    if (qb.contains_cell(ix, iy)) continue;
    const double wk = v[k] * sub_vol;
    for (int sy = 0; sy < (d == 2 ? kSub : 1); ++sy)
      for (int sx = 0; sx < kSub; ++sx) {
        const double x = g.origin[0] + (static_cast<double>(ix) + (sx + 0.5) / kSub) * h;
        double r2 = (x - c[0]) * (x - c[0]);
        if (d == 2) {
          const double y = g.origin[1] + (static_cast<double>(iy) + (sy + 0.5) / kSub) * h;
          r2 += (y - c[1]) * (y - c[1]);
        }
        const double r = std::sqrt(r2);
        direct.add(wk * std::pow(r, -d) * omega(l / r));
        // Shell index m >= 0 with l 2^{m-1} <= r < l 2^m.
        const int m = std::max(0, static_cast<int>(std::floor(std::log2(r / l))) + 1);
        const double inner = std::ldexp(l, m - 1);
        shell.add(wk * std::pow(inner, -d) * omega(std::ldexp(1.0, 1 - m)));
      }
  }

  CompensatedSum dil;
  const double total_mass = weight_mass(v, g.root_box());
  int m = -1;
  for (;; ++m) {
    const LatticeBox r = detail::dilate_clipped(g, qb, m + 2);
    const double vol_full = std::pow(std::ldexp(l, m + 2), d);
    const double mass = weight_mass(v, r);
    dil.add(omega(std::ldexp(1.0, -m)) * mass / vol_full);
    if (r == g.root_box()) break;
  }
  // Later dilates all hold the full mass: sum_{j>m} Omega(2^-j) 2^{-(j+2)d} <=
  // Omega(2^{-m-1}) 2^{-(m+3)d} / (1 - 2^{-d}).
  dil.add(omega(std::ldexp(1.0, -m - 1)) * total_mass / std::pow(std::ldexp(l, m + 3), d) /
          (1.0 - std::ldexp(1.0, -d)));

  BOmegaCube out;
  out.cube = q;
  out.direct = scale * direct.value();
  out.shell = scale * shell.value();
  out.dilate = std::ldexp(1.0, 2 * d) * scale * dil.value();
  double radius = std::numeric_limits<double>::infinity();
  for (int a = 0; a < d; ++a)
    radius = std::min({radius, c[a] - g.origin[a], g.origin[a] + g.side - c[a]});
  out.truncation_radius = radius;
  const double tail = detail::outside_tail_1d(w, omega, c[0], l);
  if (!std::isnan(tail)) out.with_tail = out.direct + scale * tail;
  return out;
}

/// [w]_{B(Omega)} over the dyadic cubes Q of the grid with 2Q inside the root
/// box and at least two cells per side (so every dilate 2^k Q is a lattice
/// box); the other cubes are counted in `skipped`.
inline BOmegaResult b_omega_characteristic(const Weight& w, const Modulus& omega) {
  const DyadicGrid& g = w.grid();
  BOmegaResult res;
  bool tail_known = true;
  double tail_sup = 0.0;
  for (const Cube& q : dyadic_cubes(g)) {
    const LatticeBox qb = q.box(g);
    if (q.level == g.depth || !detail::dilate_fits(g, qb, 1)) {
      ++res.skipped;
      continue;
    }
    const BOmegaCube c = b_omega_on_cube(w, omega, q);
    ++res.cubes;
    if (c.direct > res.value) {
      res.value = c.direct;
      res.argmax = q;
    }
    res.shell_bound = std::max(res.shell_bound, c.shell);
    res.dilate_bound = std::max(res.dilate_bound, c.dilate);
    res.truncation_radius = std::min(res.truncation_radius, c.truncation_radius);
    if (!(c.direct <= c.shell * (1.0 + 1e-12) && c.shell <= c.dilate * (1.0 + 1e-12))) res.dominated = false;
    if (std::isnan(c.with_tail)) tail_known = false;
    else tail_sup = std::max(tail_sup, c.with_tail);
  }
  if (tail_known && res.cubes > 0) res.with_tail = tail_sup;
  return res;
}

/// The constant in [w]_{B(Omega)} <= C [w]_{A_p} int_0^1 Omega(t) t^{-d(p-1)} dt/t
/// traced through the dilate bound:
///   dilate <= 2^{2d} [w]_{A_p} sum_{m>=-1} Omega(2^-m) 2^{(m+2) d (p-1)}
/// and, by subadditivity and monotonicity of Omega,
///   sum_{m>=-1} Omega(2^-m) 2^{m beta} <= (6 / ln 2) int_0^1 Omega(t) t^{-beta} dt/t.
inline double b_omega_embedding_constant(int dimension, double p) {
  const double beta = dimension * (p - 1.0);
  return std::ldexp(1.0, 2 * dimension) * std::exp2(2.0 * beta) * 6.0 / std::log(2.0);
}

}  // namespace wbmo
