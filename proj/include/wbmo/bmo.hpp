#pragma once

// Weighted BMO norms BMO^1_w, BMO^inf_w and their weak variants over a cube
// family, and the structural relations between them.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wbmo/maximal.hpp"
#include "wbmo/report.hpp"
#include "wbmo/weights.hpp"

namespace wbmo {

enum class Integrability { One, Infinity };
enum class Strength { Strong, Weak };

struct BmoFlavor {
  Integrability integrability = Integrability::One;
  Strength strength = Strength::Strong;
  MaximalFlavor family = MaximalFlavor::dyadic();
};

/// Everything the norms need from one cube, computed once.
struct BoxStats {
  LatticeBox box{};
  double mean_osc = 0.0;  // <|f - <f>_Q|>_Q
  double min_dev = 0.0;   // inf_c <|f - c|>_Q
  double weak_osc = 0.0;  // inf_c |Q|^{-1} ||(f - c) 1_Q||_{L^{1,inf}}
  double inv_avg = 0.0;   // <w^{-1}>_Q
  double w_sup = 0.0;     // <w>_{inf,Q}
};

inline std::vector<BoxStats> box_stats(const GridFunction& f, const Weight& w, const MaximalFlavor& family,
                                       bool with_weak = true) {
  require(f.grid() == w.grid(), "function and weight live on different grids");
  const GridFunction sigma = w.values().reciprocal();
  const auto boxes = family.kind == FamilyKind::Full1D ? enumerate_boxes_1d(f.grid()) : cube_family(f.grid(), family);
  std::vector<BoxStats> out;
  out.reserve(boxes.size());
  for (const LatticeBox& b : boxes) {
    BoxStats s;
    s.box = b;
    const auto sorted = sorted_copy(gather(f, b));
    s.mean_osc = mean_oscillation(sorted);
    s.min_dev = min_mean_deviation(sorted);
    if (with_weak) s.weak_osc = min_weak_deviation(sorted);
    s.inv_avg = average(sigma, b, AverageOrder::of(1.0));
    s.w_sup = average(w.values(), b, AverageOrder::infinity());
    out.push_back(s);
  }
  return out;
}

namespace detail {

inline double oscillation_of(const BoxStats& s, Strength strength, bool use_inf_c) {
  if (strength == Strength::Weak) return s.weak_osc;
  return use_inf_c ? s.min_dev : s.mean_osc;
}

}  // namespace detail

/// The norm from precomputed statistics. `use_inf_c` swaps <f - <f>_Q> for
/// inf_c <f - c> in the strong norms.
inline double bmo_norm(const std::vector<BoxStats>& stats, Integrability integ, Strength strength,
                       bool use_inf_c = false) {
  double best = 0.0;
  for (const BoxStats& s : stats) {
    const double osc = detail::oscillation_of(s, strength, use_inf_c);
    best = std::max(best, integ == Integrability::One ? osc / s.inv_avg : s.w_sup * osc);
  }
  return best;
}

inline double bmo_norm(const GridFunction& f, const Weight& w, const BmoFlavor& flavor) {
  return bmo_norm(box_stats(f, w, flavor.family, flavor.strength == Strength::Weak), flavor.integrability,
                  flavor.strength);
}

/// ||f||_{L^inf_w} = ||f w||_inf.
inline double linf_w_norm(const GridFunction& f, const Weight& w) { return (f * w.values()).max_abs(); }

inline constexpr double kIdentityTolerance = 1e-12;

/// BMO^inf_w <= [w^-1]_{A1} BMO^1_w (and the weak analogue), BMO^1_w <= BMO^inf_w
/// (and weak), and BMO^1_w <= 2 ||f||_{L^inf_w}.
inline ReportList check_inclusions(const GridFunction& f, const Weight& w, const MaximalFlavor& family) {
  const auto stats = box_stats(f, w, family);
  const double a1 = a1_characteristic(w.inverse(), family);
  const double one = bmo_norm(stats, Integrability::One, Strength::Strong);
  const double inf = bmo_norm(stats, Integrability::Infinity, Strength::Strong);
  const double one_wk = bmo_norm(stats, Integrability::One, Strength::Weak);
  const double inf_wk = bmo_norm(stats, Integrability::Infinity, Strength::Weak);
  const double tol = kIdentityTolerance;
  const std::string fam = "[" + family.name() + "]";
  return {
      VerificationReport::inequality("bmo.inclusion.inf_le_a1_one" + fam, "BMO^inf_w <= [w^-1]_A1 BMO^1_w", inf,
                                     a1 * one, tol),
      VerificationReport::inequality("bmo.inclusion.inf_le_a1_one.weak" + fam,
                                     "BMO^inf,wk_w <= [w^-1]_A1 BMO^1,wk_w", inf_wk, a1 * one_wk, tol),
      VerificationReport::inequality("bmo.inclusion.one_le_inf" + fam, "BMO^1_w <= BMO^inf_w", one, inf, tol),
      VerificationReport::inequality("bmo.inclusion.one_le_inf.weak" + fam, "BMO^1,wk_w <= BMO^inf,wk_w", one_wk,
                                     inf_wk, tol),
      VerificationReport::inequality("bmo.inclusion.one_le_2linf" + fam, "BMO^1_w <= 2 ||f||_{L^inf_w}", one,
                                     2.0 * linf_w_norm(f, w), tol),
  };
}

/// inf_c-form <= mean-form <= 2 inf_c-form on every cube and at the supremum,
/// for both integrabilities, plus weak <= strong.
inline ReportList check_bmoconst(const GridFunction& f, const Weight& w, const MaximalFlavor& family) {
  const auto stats = box_stats(f, w, family);
  const double tol = kIdentityTolerance;
  double worst_lower = 0.0;  // max of inf_c / mean, should be <= 1
  double worst_upper = 0.0;  // max of mean / (2 inf_c), should be <= 1
  bool per_cube_ok = true;
  for (const BoxStats& s : stats) {
    if (s.mean_osc == 0.0 && s.min_dev == 0.0) continue;
    worst_lower = std::max(worst_lower, s.min_dev / s.mean_osc);
    worst_upper = std::max(worst_upper, s.mean_osc / (2.0 * s.min_dev));
    if (s.min_dev > s.mean_osc * (1 + tol) || s.mean_osc > 2.0 * s.min_dev * (1 + tol)) per_cube_ok = false;
  }
  ReportList rows;
  const std::string fam = "[" + family.name() + "]";
  rows.push_back(VerificationReport::predicate("bmo.const.per_cube" + fam, "inf_c <f-c> <= <f-<f>> <= 2 inf_c <f-c>",
                                               per_cube_ok, std::max(worst_lower, worst_upper), 1.0,
                                               "lhs = worst per-cube ratio against its bound"));
  for (auto integ : {Integrability::One, Integrability::Infinity}) {
    const std::string tag = integ == Integrability::One ? ".one" : ".inf";
    const double mean_form = bmo_norm(stats, integ, Strength::Strong, false);
    const double inf_form = bmo_norm(stats, integ, Strength::Strong, true);
    const double weak = bmo_norm(stats, integ, Strength::Weak);
    rows.push_back(VerificationReport::inequality("bmo.const.lower" + tag + fam, "sup inf_c form <= BMO norm",
                                                  inf_form, mean_form, tol));
    rows.push_back(VerificationReport::inequality("bmo.const.upper" + tag + fam, "BMO norm <= 2 sup inf_c form",
                                                  mean_form, 2.0 * inf_form, tol));
    rows.push_back(
        VerificationReport::inequality("bmo.const.weak_le_strong" + tag + fam, "weak BMO <= strong BMO", weak,
                                       mean_form, tol));
  }
  return rows;
}

/// ||f||_{BMO^inf_w} = ||(M^# f) w||_inf and the weak analogue with M^#_wk.
inline ReportList check_msharp_identity(const GridFunction& f, const Weight& w, const MaximalFlavor& family) {
  const auto stats = box_stats(f, w, family);
  const double strong = bmo_norm(stats, Integrability::Infinity, Strength::Strong);
  const double weak = bmo_norm(stats, Integrability::Infinity, Strength::Weak);
  const double ms = (sharp_maximal(f, family) * w.values()).max_abs();
  const double mw = (weak_sharp_maximal(f, family) * w.values()).max_abs();
  const std::string fam = "[" + family.name() + "]";
  return {
      VerificationReport::identity("bmo.msharp.strong" + fam, "BMO^inf_w = ||M^# f||_{L^inf_w}", strong, ms,
                                   kIdentityTolerance),
      VerificationReport::identity("bmo.msharp.weak" + fam, "BMO^inf,wk_w = ||M^#_wk f||_{L^inf_w}", weak, mw,
                                   kIdentityTolerance),
  };
}

/// Equivalence constant of ||f||_{BMO^inf_w} <= C [w^-1]_{A1} ||f||_{BMO^inf,wk_w},
/// traced as C = c2 / lambda with c2 the upper end of the empirical band of
/// M^# f / M(M^#_lambda f) on `bank` and lambda = 2^{-d-2}.
inline double calibrate_weak_strong_constant(const std::vector<GridFunction>& bank, const MaximalFlavor& family) {
  require(!bank.empty(), "calibration bank is empty");
  const double lambda = default_lambda(bank.front().grid().dimension);
  RatioBand band;
  for (const GridFunction& f : bank) band.merge(john_stromberg_band(f, family, lambda));
  require(band.undefined == 0, "calibration bank hits a degenerate median oscillation");
  return band.samples == 0 ? 1.0 / lambda : band.hi / lambda;
}

inline VerificationReport check_weak_strong_equivalence(const GridFunction& f, const Weight& w,
                                                        const MaximalFlavor& family, double constant) {
  const auto stats = box_stats(f, w, family);
  const double strong = bmo_norm(stats, Integrability::Infinity, Strength::Strong);
  const double weak = bmo_norm(stats, Integrability::Infinity, Strength::Weak);
  const double a1 = a1_characteristic(w.inverse(), family);
  auto r = VerificationReport::inequality("bmo.weak_strong[" + family.name() + "]",
                                          "BMO^inf_w <~ [w^-1]_A1 BMO^inf,wk_w", strong, constant * a1 * weak,
                                          kIdentityTolerance);
  r.notes = "C = " + std::to_string(constant) + ", strong/([w^-1]_A1 weak) = " +
            std::to_string(weak > 0.0 ? strong / (a1 * weak) : 0.0);
  return r;
}

}  // namespace wbmo
