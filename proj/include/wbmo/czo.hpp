#pragma once

// Calderon-Zygmund operators with Dini kernels on the line, constructive
// sparse domination by local median oscillations, and the weighted
// L^inf_w -> BMO_w estimates with an explicit proof-chain constant.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wbmo/b_condition.hpp"
#include "wbmo/bmo.hpp"
#include "wbmo/maximal.hpp"
#include "wbmo/modulus.hpp"
#include "wbmo/report.hpp"
#include "wbmo/sparse.hpp"
#include "wbmo/weights.hpp"

namespace wbmo {

/// K(x, y) on the line with a modulus certifying
/// |K(x,y) - K(z,y)| <= Omega(|x-z| / |x-y|) / |x-y| whenever |x-y| > 2|x-z|.
struct DiniKernel {
  enum class Kind { Hilbert, Custom };
  Kind kind = Kind::Custom;
  std::string name;
  std::function<double(double, double)> k;
  Modulus omega = Modulus::power(1.0);
  int dimension = 1;
};

/// 1/(x-y) with Omega(t) = 2t: |1/(x-y) - 1/(z-y)| = |x-z| / (|x-y||z-y|) and
/// |z-y| > |x-y|/2 in the admissible regime.
inline DiniKernel hilbert_kernel() {
  return {DiniKernel::Kind::Hilbert, "hilbert", [](double x, double y) { return 1.0 / (x - y); },
          Modulus::scaled(2.0, Modulus::power(1.0)), 1};
}

struct KernelCheck {
  double worst = 0.0;  // max of |K(x,y) - K(z,y)| |x-y| / Omega(|x-z|/|x-y|)
  std::size_t triples = 0;
  [[nodiscard]] bool holds() const { return worst <= 1.0 + 1e-12; }
};

/// Samples admissible triples with |x - y| log-uniform over twelve decades.
inline KernelCheck check_kernel_smoothness(const DiniKernel& kernel, std::uint64_t seed, std::size_t count = 10000) {
  std::mt19937_64 e(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  KernelCheck out;
  while (out.triples < count) {
    const double x = 8.0 * u(e) - 4.0;
    const double r = std::pow(10.0, -6.0 + 12.0 * u(e));
    const double y = u(e) < 0.5 ? x - r : x + r;
    const double s = r / 2.0 * (1.0 - u(e)) * (u(e) < 0.999 ? u(e) : 1.0);
    if (!(s > 0.0) || !(r > 2.0 * s)) continue;
    const double z = u(e) < 0.5 ? x - s : x + s;
    const double lhs = std::abs(kernel.k(x, y) - kernel.k(z, y)) * r;
    const double rhs = kernel.omega(s / r);
    out.worst = std::max(out.worst, lhs / rhs);
    ++out.triples;
  }
  return out;
}

namespace detail {

inline void require_line(const DyadicGrid& g) {
  if (g.dimension != 1) throw unsupported_error("Calderon-Zygmund operators are implemented on the line only");
}

// int_cell K(x, y) dy for a cell not containing x.
inline double cell_integral(const DiniKernel& kernel, double x, double a, double b) {
  auto fn = [&](double y) { return kernel.k(x, y); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 12, 1e-13);
}

// Symmetric principal value over the own cell [a, b) about x.
inline double own_cell_pv(const DiniKernel& kernel, double x, double a, double b) {
  const double reach = std::min(x - a, b - x);
  auto sym = [&](double t) { return kernel.k(x, x + t) + kernel.k(x, x - t); };
  const double probe = reach * 1e-10;
  if (std::abs(sym(probe)) * probe > 1e-6 * (1.0 + std::abs(sym(reach)) * reach))
    throw unsupported_error("kernel singularity is not integrable under symmetric excision");
  double total = reach > 0.0 ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(sym, 0.0, reach, 12, 1e-13)
                             : 0.0;
  // Any asymmetric remainder of the cell.
  if (x - a > reach) total += cell_integral(kernel, x, a, x - reach);
  if (b - x > reach) total += cell_integral(kernel, x, x + reach, b);
  return total;
}

}  // namespace detail

/// Tf at every cell centre: sum_j f_j int_{cell j} K(x, y) dy, with the own
/// cell taken as a symmetric principal value. The Hilbert kernel uses the log
/// antiderivative through a Toeplitz table ln|(k + 1/2) / (k - 1/2)|.
inline GridFunction apply_czo(const DiniKernel& kernel, const GridFunction& f) {
  const DyadicGrid& g = f.grid();
  detail::require_line(g);
  const std::size_t n = g.cell_count();
  const double h = g.cell_side();
  std::vector<double> out(n, 0.0);
  if (kernel.kind == DiniKernel::Kind::Hilbert) {
    std::vector<double> table(n, 0.0);  // offset i - j >= 1; odd in the offset
    for (std::size_t d = 1; d < n; ++d) {
      const double k = static_cast<double>(d);
      table[d] = std::log1p(1.0 / (k - 0.5));  // ln((k + 1/2) / (k - 1/2))
    }
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < n; ++j)
      if (f[j] != 0.0) support.push_back(j);
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum acc;
      for (std::size_t j : support) {
        if (j == i) continue;
        acc.add(i > j ? f[j] * table[i - j] : -f[j] * table[j - i]);
      }
      out[i] = acc.value();
    }
    return GridFunction(g, std::move(out));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.cell_center(0, static_cast<Index>(i));
    CompensatedSum acc;
    for (std::size_t j = 0; j < n; ++j) {
      if (f[j] == 0.0) continue;
      const double a = g.origin[0] + static_cast<double>(j) * h;
      acc.add(f[j] * (j == i ? detail::own_cell_pv(kernel, x, a, a + h) : detail::cell_integral(kernel, x, a, a + h)));
    }
    out[i] = acc.value();
  }
  return GridFunction(g, std::move(out));
}

// ---------------------------------------------------------------------------
// Oscillation bound sum_m Omega(2^-m) <|f|>_{2^m Q}

/// Prefix integrals of |f| on the line, exact for the step function.
class LineIntegrator {
public:
  explicit LineIntegrator(const GridFunction& f) : g_(f.grid()), prefix_(f.size() + 1, 0.0) {
    detail::require_line(g_);
    CompensatedSum acc;
    for (std::size_t k = 0; k < f.size(); ++k) {
      acc.add(std::abs(f[k]) * g_.cell_side());
      prefix_[k + 1] = acc.value();
    }
    abs_ = f.abs();
  }
  /// int_a^b |f|, clipped to the root interval.
  [[nodiscard]] double operator()(double a, double b) const { return at(b) - at(a); }
  [[nodiscard]] double total() const { return prefix_.back(); }

private:
  [[nodiscard]] double at(double x) const {
    const double u = (x - g_.origin[0]) / g_.cell_side();
    if (u <= 0.0) return 0.0;
    const auto n = static_cast<double>(abs_.size());
    if (u >= n) return prefix_.back();
    const auto k = static_cast<std::size_t>(u);
    return prefix_[k] + (u - static_cast<double>(k)) * abs_[k] * g_.cell_side();
  }
  DyadicGrid g_;
  std::vector<double> prefix_;
  GridFunction abs_;
};

struct OscillationBound {
  double value = 0.0;  // the full sum, to double precision
  double tail = 0.0;   // bound on the terms after `terms`
  int terms = 0;       // first m with 2^m Q covering the root, plus 64
};

/// sum_{m>=0} Omega(2^-m) |2^m Q|^{-1} int_{2^m Q} |f| for a cube Q (an
/// interval) of the grid. f vanishes off the root, so the integral is taken
/// over the dilate clipped to the root while the average keeps the full
/// volume |2^m Q|. Once 2^m Q covers the root the integral is constant and 64
/// further terms are summed explicitly.
inline OscillationBound oscillation_rhs(const LineIntegrator& absf, const DyadicGrid& g, const LatticeBox& q,
                                        const Modulus& omega) {
  const RealBox r = g.to_real(q);
  const double c = 0.5 * (r.lo[0] + r.hi[0]);
  const double l = r.hi[0] - r.lo[0];
  const double a = g.origin[0];
  const double b = a + g.side;
  OscillationBound out;
  CompensatedSum acc;
  int covered_at = -1;
  for (int m = 0;; ++m) {
    const double half = std::ldexp(l, m - 1);
    const double mass = absf(c - half, c + half);
    acc.add(omega(std::ldexp(1.0, -m)) * mass / (2.0 * half));
    if (covered_at < 0 && c - half <= a && c + half >= b) covered_at = m;
    if (covered_at >= 0 && m >= covered_at + 64) {
      out.terms = m + 1;
      // Remaining terms: Omega(2^-j) ||f||_1 / (2^j l) <= Omega(2^-m) ||f||_1 / (2^m l).
      out.tail = omega(std::ldexp(1.0, -m)) * absf.total() / std::ldexp(l, m);
      break;
    }
  }
  out.value = acc.value();
  return out;
}

inline OscillationBound oscillation_rhs(const GridFunction& f, const Cube& q, const Modulus& omega) {
  return oscillation_rhs(LineIntegrator(f), f.grid(), q.box(f.grid()), omega);
}

// ---------------------------------------------------------------------------
// Sparse domination

struct DominationCertificate {
  SparseFamily family;
  Cube q0{};
  double lambda = 0.0;
  double median = 0.0;        // lower median of g on Q0
  double median_upper = 0.0;  // upper median
  std::vector<double> omegas; // omega_lambda(g; Q) per member
  std::vector<double> margin; // RHS - LHS on the cells of Q0 (for_each_cell order)
  double min_margin = 0.0;
  double min_margin_upper = 0.0;  // the same bound recentred at the upper median
  double worst_level_fraction = 0.0;  // max over recursion steps of |union of stopping cubes| / |Q|
  SparsityResult sparsity;

  [[nodiscard]] bool sound(double tol = 1e-12) const {
    return min_margin >= -tol && min_margin_upper >= -tol && sparsity.ok && worst_level_fraction <= 0.5;
  }
};

/// Builds S recursively from Q0. At each Q with optimal window [c - omega, c + omega]
/// for omega_lambda(g; Q), let E be the cells of Q outside the window; the
/// stopping cubes are the maximal dyadic P strictly inside Q with
/// |E ∩ P| >= 2^{-d-1} |P|. Their union has measure at most 2^{d+1} |E| <= |Q|/2
/// for lambda = 2^{-d-2}, and every median of every stopping cube stays within
/// the window. The pointwise bound and the sparsity are then checked.
inline DominationCertificate sparse_dominate(const GridFunction& g, const Cube& q0, double lambda) {
  const DyadicGrid& grid = g.grid();
  const int d = grid.dimension;
  require(lambda > 0.0 && lambda <= std::ldexp(1.0, -d - 2), "lambda must lie in (0, 2^{-d-2}]");
  DominationCertificate cert;
  cert.q0 = q0;
  cert.lambda = lambda;
  cert.family.grid = grid;
  cert.family.eta = 0.5;
  const LatticeBox b0 = q0.box(grid);
  {
    const auto m = median(g, b0);
    cert.median = m.lo;
    cert.median_upper = m.hi;
  }
  const double threshold = std::ldexp(1.0, -d - 1);
  std::vector<Cube> stack{q0};
  while (!stack.empty()) {
    const Cube q = stack.back();
    stack.pop_back();
    const LatticeBox qb = q.box(grid);
    const auto sorted = sorted_copy(gather(g, qb));
    const MedianOscillation mo = median_oscillation(sorted, lambda);
    cert.family.members.push_back(cube_member(grid, q));
    cert.omegas.push_back(mo.value);
    if (q.level == grid.depth) continue;
    // Prefix counts of E over the cells of Q.
    const Index n0 = qb.extent(0);
    const Index n1 = qb.extent(1);
    std::vector<std::int64_t> pre(static_cast<std::size_t>((n0 + 1) * (n1 + 1)), 0);
    auto P = [&](Index x, Index y) -> std::int64_t& { return pre[static_cast<std::size_t>(y * (n0 + 1) + x)]; };
    for (Index y = 0; y < n1; ++y)
      for (Index x = 0; x < n0; ++x) {
        const double v = g.at(qb.lo[0] + x, qb.lo[1] + y);
        const std::int64_t in_e = (v < mo.window_lo || v > mo.window_hi) ? 1 : 0;
        P(x + 1, y + 1) = P(x, y + 1) + P(x + 1, y) - P(x, y) + in_e;
      }
    auto count = [&](const LatticeBox& s) {
      const Index x0 = s.lo[0] - qb.lo[0], x1 = s.hi[0] - qb.lo[0];
      const Index y0 = s.lo[1] - qb.lo[1], y1 = s.hi[1] - qb.lo[1];
      return P(x1, y1) - P(x0, y1) - P(x1, y0) + P(x0, y0);
    };
    if (P(n0, n1) == 0) continue;
    double stopped = 0.0;
    std::vector<Cube> search = q.children(d);
    while (!search.empty()) {
      const Cube p = search.back();
      search.pop_back();
      const LatticeBox pb = p.box(grid);
      const auto c = count(pb);
      if (c == 0) continue;
      if (static_cast<double>(c) >= threshold * static_cast<double>(pb.cell_count())) {
        stack.push_back(p);
        stopped += static_cast<double>(pb.cell_count());
      } else if (p.level < grid.depth) {
        for (const Cube& ch : p.children(d)) search.push_back(ch);
      }
    }
    cert.worst_level_fraction = std::max(cert.worst_level_fraction, stopped / static_cast<double>(qb.cell_count()));
  }
  // RHS = 2 sum_Q omega_Q 1_Q on Q0.
  std::vector<CompensatedSum> rhs(grid.cell_count());
  for (std::size_t i = 0; i < cert.family.members.size(); ++i)
    for_each_cell(grid, cert.family.members[i].cube->box(grid), [&](std::size_t k) { rhs[k].add(2.0 * cert.omegas[i]); });
  cert.min_margin = std::numeric_limits<double>::infinity();
  cert.min_margin_upper = std::numeric_limits<double>::infinity();
  for_each_cell(grid, b0, [&](std::size_t k) {
    const double r = rhs[k].value();
    const double lhs = std::abs(g[k] - cert.median);
    cert.margin.push_back(r - lhs);
    cert.min_margin = std::min(cert.min_margin, r - lhs);
    cert.min_margin_upper = std::min(cert.min_margin_upper, r - std::abs(g[k] - cert.median_upper));
  });
  cert.sparsity = verify_sparsity(cert.family, 0.5);
  return cert;
}

inline DominationCertificate sparse_dominate(const GridFunction& g, const Cube& q0) {
  return sparse_dominate(g, q0, default_lambda(g.grid().dimension));
}

// ---------------------------------------------------------------------------
// Oscillation constant and the pointwise chain

/// max over the bank and over every dyadic cube Q of
/// omega_lambda(Tf; Q) / sum_m Omega(2^-m) <|f|>_{2^m Q}.
inline double calibrate_oscillation_constant(const DiniKernel& kernel, const std::vector<GridFunction>& bank) {
  require(!bank.empty(), "calibration bank is empty");
  double best = 0.0;
  for (const GridFunction& f : bank) {
    const GridFunction tf = apply_czo(kernel, f);
    const LineIntegrator absf(f);
    const double lambda = default_lambda(1);
    for (const Cube& q : dyadic_cubes(f.grid())) {
      const LatticeBox b = q.box(f.grid());
      const double rhs = oscillation_rhs(absf, f.grid(), b, kernel.omega).value;
      if (rhs <= 0.0) continue;
      best = std::max(best, median_oscillation(tf, b, lambda) / rhs);
    }
  }
  return best;
}

/// |Tf - m_{Q0}(Tf)| <= 2 C_osc sum_{Q in S} sum_m Omega(2^-m) <|f|>_{2^m Q} 1_Q
/// with S from sparse_dominate(Tf, Q0), checked cube by cube and pointwise.
inline ReportList check_pointwise_chain(const DiniKernel& kernel, const GridFunction& f, const Cube& q0, double c_osc) {
  const DyadicGrid& g = f.grid();
  const GridFunction tf = apply_czo(kernel, f);
  const DominationCertificate cert = sparse_dominate(tf, q0);
  const LineIntegrator absf(f);
  std::vector<CompensatedSum> rhs(g.cell_count());
  double worst_cube = 0.0;
  for (std::size_t i = 0; i < cert.family.members.size(); ++i) {
    const LatticeBox b = cert.family.members[i].cube->box(g);
    const double r = oscillation_rhs(absf, g, b, kernel.omega).value;
    if (r > 0.0) worst_cube = std::max(worst_cube, cert.omegas[i] / r);
    else if (cert.omegas[i] > 0.0) worst_cube = std::numeric_limits<double>::infinity();
    for_each_cell(g, b, [&](std::size_t k) { rhs[k].add(2.0 * c_osc * r); });
  }
  double worst = 0.0;
  bool ok = true;
  for_each_cell(g, q0.box(g), [&](std::size_t k) {
    const double lhs = std::abs(tf[k] - cert.median);
    const double r = rhs[k].value();
    if (lhs > r * (1.0 + 1e-12) + 1e-12) ok = false;
    if (r > 0.0) worst = std::max(worst, lhs / r);
  });
  return {
      VerificationReport::predicate("czo.certificate", "|g - m_Q0(g)| <= 2 sum_S omega_lambda(g;Q) 1_Q, S 1/2-sparse",
                                    cert.sound(), -cert.min_margin, 0.0, "lhs = -min margin"),
      VerificationReport::inequality("czo.osc_per_cube", "omega_lambda(Tf;Q) <= C_osc sum_m Omega(2^-m) <|f|>_{2^m Q}",
                                     worst_cube, c_osc, 1e-12),
      VerificationReport::predicate("czo.pointwise_chain",
                                    "|Tf - m_Q0(Tf)| <~ sum_m Omega(2^-m) sum_S <|f|>_{2^m Q} 1_Q", ok, worst, 1.0,
                                    "lhs = worst pointwise ratio"),
  };
}

// ---------------------------------------------------------------------------
// B(Omega) exactly on the line

/// sup over `boxes` of (|Q|/w(Q)) int_{root \ Q} w(x) |x - c_Q|^{-1} Omega(l/|x - c_Q|) dx,
/// exact for the step weight and a power-type modulus c t^alpha, whose
/// cellwise integral is c l^alpha (r1^-alpha - r2^-alpha) / alpha.
inline double b_omega_sup_1d(const Weight& w, const Modulus& omega, const std::vector<LatticeBox>& boxes) {
  const DyadicGrid& g = w.grid();
  detail::require_line(g);
  const auto alpha = power_exponent_of(omega);
  if (!alpha) throw unsupported_error("exact B(Omega) needs a power-type modulus");
  const double coef = omega(1.0);
  const double h = g.cell_side();
  const GridFunction& v = w.values();
  double best = 0.0;
  for (const LatticeBox& q : boxes) {
    const RealBox r = g.to_real(q);
    const double c = 0.5 * (r.lo[0] + r.hi[0]);
    const double l = r.hi[0] - r.lo[0];
    const double la = *alpha == 1.0 ? l : std::pow(l, *alpha);
    CompensatedSum acc;
    auto piece = [&](double r1, double r2) {
      if (*alpha == 1.0) return 1.0 / r1 - 1.0 / r2;
      return (std::pow(r1, -*alpha) - std::pow(r2, -*alpha)) / *alpha;
    };
    for (Index i = 0; i < q.lo[0]; ++i) {
      const double a = g.origin[0] + static_cast<double>(i) * h;
      acc.add(v[static_cast<std::size_t>(i)] * piece(c - a - h, c - a));
    }
    for (Index i = q.hi[0]; i < g.cells_per_axis(); ++i) {
      const double a = g.origin[0] + static_cast<double>(i) * h;
      acc.add(v[static_cast<std::size_t>(i)] * piece(a - c, a + h - c));
    }
    const double value = coef * la * acc.value() * l / weight_mass(v, q);
    best = std::max(best, value);
  }
  return best;
}

// ---------------------------------------------------------------------------
// The weighted estimates

struct CzoChainConstants {
  double c_osc = 0.0;
  double k_b = 0.0;     // max(A_Omega / [1]_B, 1 / (2^d (1 - 2^-d)))
  double chain1 = 0.0;  // 2 * 2 * C_osc * K_B * eta^-1
  double chain2 = 0.0;  // 2 C_trace(d, 1) chain1
};

/// A_Omega = sum_m Omega(2^-m) 2^{-md}, the weight of the points of Q itself.
inline double omega_dilation_sum(const Modulus& omega, int d) {
  CompensatedSum acc;
  for (int m = 0; m < 200; ++m) acc.add(omega(std::ldexp(1.0, -m)) * std::ldexp(1.0, -m * d));
  return acc.value();
}

/// Constants from the proof: mean oscillation <= 2 inf_c (factor 2), the sparse
/// domination (factor 2), the oscillation estimate (C_osc), the split of
/// sum_m Omega(2^-m) 2^{-md} 1_{2^m Q} into [1]_B and [w^-1]_B (K_B), and the
/// Carleson packing of a 1/2-sparse family (factor 2). The second estimate
/// adds BMO^inf <= [w^-1]_A1 BMO^1 and [v]_B <= C_trace [v]_A1 ||Omega||_Dini
/// for v in {1, w^-1}, with [w^-1]_A1 >= 1.
inline CzoChainConstants czo_chain_constants(double c_osc, const Modulus& omega, double b_one, int d = 1) {
  CzoChainConstants k;
  k.c_osc = c_osc;
  k.k_b = std::max(omega_dilation_sum(omega, d) / b_one, 1.0 / (std::ldexp(1.0, d) * (1.0 - std::ldexp(1.0, -d))));
  k.chain1 = 2.0 * 2.0 * c_osc * k.k_b * 2.0;
  k.chain2 = 2.0 * b_omega_embedding_constant(d, 1.0) * k.chain1;
  return k;
}

struct CzoTheoremResult {
  std::string family;
  double lhs1 = 0.0;  // ||Tf||_{BMO^1_w}
  double rhs1 = 0.0;  // ([1]_B + [w^-1]_B) [w^-1]_Ainf ||f||_{L^inf_w}
  double lhs2 = 0.0;  // ||Tf||_{BMO^inf_w}
  double rhs2 = 0.0;  // [w^-1]_A1^2 [w^-1]_Ainf ||Omega||_Dini ||f||_{L^inf_w}
  double b_one = 0.0, b_sigma = 0.0, a1 = 0.0, ainf = 0.0, dini = 0.0, f_norm = 0.0;
  CzoChainConstants constants;
  [[nodiscard]] double ratio1() const { return VerificationReport::ratio_of(lhs1, rhs1); }
  [[nodiscard]] double ratio2() const { return VerificationReport::ratio_of(lhs2, rhs2); }
};

/// Both estimates for one (w, f) over a cube family (dyadic or shifted). The
/// characteristics follow the family: B(Omega) and A_inf range over its
/// cubes; A_1 is taken over all intervals since the embedding step needs
/// clipped dilates.
inline CzoTheoremResult czo_quantities(const DiniKernel& kernel, const Weight& w, const GridFunction& f, double c_osc,
                                       const MaximalFlavor& family) {
  const DyadicGrid& g = f.grid();
  detail::require_line(g);
  require(family.kind == FamilyKind::Dyadic || family.kind == FamilyKind::ShiftedDyadic,
          "the estimates are checked over dyadic or shifted dyadic cubes");
  CzoTheoremResult r;
  r.family = family.name();
  const GridFunction tf = apply_czo(kernel, f);
  const auto stats = box_stats(tf, w, family, false);
  r.lhs1 = bmo_norm(stats, Integrability::One, Strength::Strong);
  r.lhs2 = bmo_norm(stats, Integrability::Infinity, Strength::Strong);
  const Weight sigma = w.inverse();
  const auto boxes = cube_family(g, family);
  r.b_one = b_omega_sup_1d(stock::identity(g), kernel.omega, boxes);
  r.b_sigma = b_omega_sup_1d(sigma, kernel.omega, boxes);
  r.ainf = ainfty_characteristic(sigma, family);
  r.a1 = a1_characteristic(sigma, MaximalFlavor::full_1d());
  r.dini = dini_norm(kernel.omega);
  r.f_norm = linf_w_norm(f, w);
  r.rhs1 = (r.b_one + r.b_sigma) * r.ainf * r.f_norm;
  r.rhs2 = r.a1 * r.a1 * r.ainf * r.dini * r.f_norm;
  r.constants = czo_chain_constants(c_osc, kernel.omega, r.b_one, 1);
  return r;
}

inline ReportList verify_czo_theorem(const DiniKernel& kernel, const Weight& w, const GridFunction& f, double c_osc,
                                     const MaximalFlavor& family, CzoTheoremResult* out = nullptr) {
  const CzoTheoremResult r = czo_quantities(kernel, w, f, c_osc, family);
  const std::string fam = "[" + r.family + "]";
  const double tol = 1e-12;
  ReportList rows;
  const std::string a1_anchor = "||Tf||_{BMO^1_w} <~ ([1]_B + [w^-1]_B) [w^-1]_Ainf ||f||_{L^inf_w}";
  if (!std::isfinite(r.b_sigma) || !std::isfinite(r.b_one))
    rows.push_back(VerificationReport::skipped("czo.bmo_one" + fam, a1_anchor, "B(Omega) characteristic is infinite",
                                               r.lhs1, r.rhs1));
  else
    rows.push_back(VerificationReport::inequality("czo.bmo_one" + fam, a1_anchor, r.lhs1, r.constants.chain1 * r.rhs1,
                                                  tol, "ratio to the bare bound " + std::to_string(r.ratio1())));
  const std::string a2_anchor = "||Tf||_{BMO^inf_w} <~ [w^-1]_A1^2 [w^-1]_Ainf ||Omega||_Dini ||f||_{L^inf_w}";
  if (!std::isfinite(r.a1))
    rows.push_back(VerificationReport::skipped("czo.bmo_inf" + fam, a2_anchor, "[w^-1]_A1 is infinite", r.lhs2, r.rhs2));
  else
    rows.push_back(VerificationReport::inequality("czo.bmo_inf" + fam, a2_anchor, r.lhs2, r.constants.chain2 * r.rhs2,
                                                  tol, "ratio to the bare bound " + std::to_string(r.ratio2())));
  if (out) *out = r;
  return rows;
}

}  // namespace wbmo
