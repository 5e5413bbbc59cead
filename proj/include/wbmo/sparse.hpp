#pragma once

// Sparse families, sparse operators A_S f = sum_Q <f>_Q 1_Q, height
// functions, the Carleson packing sum, the three counterexample families on
// the line, and the BMO bounds for dyadic sparse operators.
//
// Members are finite unions of real boxes with dyadic-rational corners. A
// member may be finer than the grid's cells; grid-valued outputs are then the
// exact cell averages of the true function.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wbmo/bmo.hpp"
#include "wbmo/grid.hpp"
#include "wbmo/report.hpp"
#include "wbmo/weights.hpp"

namespace wbmo {

struct SparseMember {
  std::vector<RealBox> parts;  // pairwise disjoint
  std::optional<Cube> cube;    // dyadic address in the grid's system, any level

  [[nodiscard]] double volume(int dimension) const {
    double v = 0.0;
    for (const RealBox& r : parts) v += r.volume(dimension);
    return v;
  }
  [[nodiscard]] bool contains_point(double x, double y, int dimension) const {
    for (const RealBox& r : parts)
      if (x >= r.lo[0] && x < r.hi[0] && (dimension == 1 || (y >= r.lo[1] && y < r.hi[1]))) return true;
    return false;
  }
};

struct SparseFamily {
  DyadicGrid grid{};
  std::vector<SparseMember> members;
  double eta = 0.5;
  /// E_Q per member, when supplied analytically.
  std::optional<std::vector<std::vector<RealBox>>> witness;
};

/// The dyadic address of `r` in the system generated by g's root, if any.
/// Deepest level with a representable lattice index.
inline constexpr int kMaxAddressLevel = 62;

inline std::optional<Cube> dyadic_address(const DyadicGrid& g, const RealBox& r) {
  const double s = r.hi[0] - r.lo[0];
  if (!(s > 0.0)) return std::nullopt;
  int exp = 0;
  const double ratio = std::frexp(g.side / s, &exp);
  if (ratio != 0.5) return std::nullopt;  // g.side / s must be a power of two
  const int level = exp - 1;
  if (level < 0 || level > kMaxAddressLevel) return std::nullopt;
  Cube q{level, {0, 0}};
  for (int a = 0; a < g.dimension; ++a) {
    if (r.hi[a] - r.lo[a] != s) return std::nullopt;
    const double idx = (r.lo[a] - g.origin[a]) / s;
    if (idx != std::floor(idx) || idx < 0 || idx >= std::ldexp(1.0, level)) return std::nullopt;
    q.index[static_cast<std::size_t>(a)] = static_cast<Index>(idx);
  }
  return q;
}

inline SparseMember cube_member(const DyadicGrid& g, const Cube& q) { return {{q.real_box(g)}, q}; }

inline SparseMember box_member(const DyadicGrid& g, const RealBox& r) { return {{r}, dyadic_address(g, r)}; }

// ---------------------------------------------------------------------------
// Sparsity

struct SparsityResult {
  bool ok = true;
  double eta = 0.0;
  /// |E_Q| / |Q| of the greedy witness, per member.
  std::vector<double> fractions;
  /// Members removed from each Q to form E_Q: its maximal strict sub-members.
  std::vector<std::vector<std::size_t>> removed;
  std::optional<std::size_t> violator;
  double min_fraction = 1.0;
};

/// Greedy bottom-up witness E_Q = Q \ (union of the maximal members strictly
/// inside Q). Exact for dyadic families: any other witness must leave those
/// members' own sets disjoint from E_Q, so no witness does better.
inline SparsityResult verify_sparsity(const SparseFamily& s, double eta) {
  require(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
  std::map<Cube, std::size_t> where;
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    if (!s.members[i].cube) throw unsupported_error("greedy sparsity needs dyadic members");
    if (!where.emplace(*s.members[i].cube, i).second) throw contract_violation("duplicate member in family");
  }
  const int d = s.grid.dimension;
  SparsityResult res;
  res.eta = eta;
  res.fractions.assign(s.members.size(), 1.0);
  res.removed.assign(s.members.size(), {});
  // Nearest strict ancestor in the family, found by walking parents.
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    Cube q = *s.members[i].cube;
    while (q.level > 0) {
      q = q.parent();
      const auto it = where.find(q);
      if (it != where.end()) {
        res.removed[it->second].push_back(i);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    const int level = s.members[i].cube->level;
    double taken = 0.0;
    for (std::size_t j : res.removed[i]) taken += std::ldexp(1.0, -d * (s.members[j].cube->level - level));
    res.fractions[i] = 1.0 - taken;
    res.min_fraction = std::min(res.min_fraction, res.fractions[i]);
    if (res.ok && res.fractions[i] < eta) {
      res.ok = false;
      res.violator = i;
    }
  }
  return res;
}

struct WitnessCheck {
  bool ok = true;
  std::string reason;
  double min_fraction = 1.0;
};

/// Validates an explicit witness: each E_Q inside Q, |E_Q| >= eta |Q|, and all
/// witness sets pairwise disjoint.
inline WitnessCheck check_witness(const SparseFamily& s, double eta) {
  WitnessCheck out;
  if (!s.witness) return {false, "no witness supplied", 0.0};
  const auto& wit = *s.witness;
  const int d = s.grid.dimension;
  if (wit.size() != s.members.size()) return {false, "witness size does not match family", 0.0};
  struct Tagged {
    RealBox box;
    std::size_t owner;
  };
  std::vector<Tagged> all;
  for (std::size_t i = 0; i < wit.size(); ++i) {
    double vol = 0.0;
    for (const RealBox& e : wit[i]) {
      const bool inside = std::any_of(s.members[i].parts.begin(), s.members[i].parts.end(),
                                      [&](const RealBox& p) { return p.contains(e, d); });
      if (!inside) return {false, "witness set of member " + std::to_string(i) + " leaves the member", 0.0};
      vol += e.volume(d);
      all.push_back({e, i});
    }
    const double frac = vol / s.members[i].volume(d);
    out.min_fraction = std::min(out.min_fraction, frac);
    if (frac < eta && out.ok) {
      out.ok = false;
      out.reason = "member " + std::to_string(i) + " has witness fraction " + std::to_string(frac);
    }
  }
  std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.box.lo[0] < b.box.lo[0]; });
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size() && all[j].box.lo[0] < all[i].box.hi[0]; ++j)
      if (all[i].box.overlap(all[j].box, d) > 0.0) return {false, "witness sets overlap", out.min_fraction};
  return out;
}

// ---------------------------------------------------------------------------
// Operators

/// <f>_Q over a member, exact for the piecewise-constant f.
inline double member_average(const GridFunction& f, const SparseMember& m) {
  const int d = f.grid().dimension;
  CompensatedSum acc;
  for (const RealBox& r : m.parts) acc.add(integral_over(f, r));
  return acc.value() / m.volume(d);
}

/// Cell averages of sum_Q c_Q 1_Q.
template <class Coefficient>
GridFunction superpose(const SparseFamily& s, const DyadicGrid& g, Coefficient&& coeff) {
  std::vector<CompensatedSum> acc(g.cell_count());
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    const double c = coeff(i);
    if (c == 0.0) continue;
    for (const RealBox& r : s.members[i].parts)
      for_each_overlap(g, r, [&](std::size_t k, double frac) { acc[k].add(c * frac); });
  }
  std::vector<double> v(acc.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = acc[k].value();
  return GridFunction(g, std::move(v));
}

/// A_S f as cell averages on f's grid.
inline GridFunction sparse_apply(const SparseFamily& s, const GridFunction& f) {
  return superpose(s, f.grid(), [&](std::size_t i) { return member_average(f, s.members[i]); });
}

/// A_S f(x) = sum_{Q ∋ x} <f>_Q at a single point, with no grid projection.
inline double sparse_evaluate(const SparseFamily& s, const GridFunction& f, double x, double y = 0.0) {
  CompensatedSum acc;
  for (const SparseMember& m : s.members)
    if (m.contains_point(x, y, f.grid().dimension)) acc.add(member_average(f, m));
  return acc.value();
}

/// h_S = sum_Q 1_Q as cell averages.
inline GridFunction height_function(const SparseFamily& s, const DyadicGrid& g) {
  return superpose(s, g, [](std::size_t) { return 1.0; });
}

struct CarlesonResult {
  double sum = 0.0;    // sum_{Q in S, Q ⊆ Q0} w(Q)
  double bound = 0.0;  // eta^-1 [w]_{A_inf(D)} w(Q0)
  double ainfty = 0.0;
  [[nodiscard]] bool holds(double tol = 1e-12) const { return sum <= bound * (1.0 + tol); }
};

inline CarlesonResult carleson_sum(const SparseFamily& s, const Weight& w, const Cube& q0,
                                   std::optional<double> ainfty = std::nullopt) {
  CarlesonResult r;
  const DyadicGrid& g = w.grid();
  CompensatedSum acc;
  for (const SparseMember& m : s.members) {
    if (!m.cube) throw unsupported_error("Carleson sum needs dyadic members");
    if (!q0.contains(*m.cube)) continue;
    for (const RealBox& p : m.parts) acc.add(integral_over(w.values(), p));
  }
  r.sum = acc.value();
  r.ainfty = ainfty ? *ainfty : ainfty_characteristic(w, MaximalFlavor::dyadic());
  r.bound = r.ainfty / s.eta * integral_over(w.values(), q0.real_box(g));
  return r;
}

// ---------------------------------------------------------------------------
// Counterexample families on the line

/// F_n = [0,1) ∪ [n,n+1), n = 1..N, on [0, 2^k) with unit cells; witness E_n = [n, n+1).
inline SparseFamily make_fn_family(int n_max) {
  require(n_max >= 1, "family size must be positive");
  int k = 0;
  while ((Index{1} << k) < n_max + 1) ++k;
  SparseFamily s;
  s.grid = DyadicGrid::interval(0.0, std::ldexp(1.0, k), k);
  s.eta = 0.5;
  std::vector<std::vector<RealBox>> wit;
  for (int n = 1; n <= n_max; ++n) {
    s.members.push_back({{RealBox::interval(0.0, 1.0), RealBox::interval(n, n + 1.0)}, std::nullopt});
    wit.push_back({RealBox::interval(n, n + 1.0)});
  }
  s.witness = std::move(wit);
  return s;
}

/// {[0, 2^n) : 0 <= n <= N} on [0, 2^N) at the given depth (unit cells when
/// depth = N); witness E_0 = [0,1), E_n = [2^{n-1}, 2^n).
inline SparseFamily make_growing_family(int n_max, int depth) {
  require(n_max >= 1, "family size must be positive");
  SparseFamily s;
  s.grid = DyadicGrid::interval(0.0, std::ldexp(1.0, n_max), depth);
  s.eta = 0.5;
  std::vector<std::vector<RealBox>> wit;
  for (int n = 0; n <= n_max; ++n) {
    const RealBox r = RealBox::interval(0.0, std::ldexp(1.0, n));
    s.members.push_back(box_member(s.grid, r));
    wit.push_back({n == 0 ? r : RealBox::interval(std::ldexp(1.0, n - 1), std::ldexp(1.0, n))});
  }
  s.witness = std::move(wit);
  return s;
}

inline SparseFamily make_growing_family(int n_max) { return make_growing_family(n_max, std::min(n_max, 20)); }

/// {[0, 2^-n) : 0 <= n <= N} on `grid`, whose root must contain [0, 1) as a
/// dyadic cube; witness E_n = [2^{-n-1}, 2^{-n}). Members deeper than
/// kMaxAddressLevel carry no cube address.
inline SparseFamily make_shrinking_family(int n_max, const DyadicGrid& grid) {
  require(n_max >= 1, "family size must be positive");
  require(grid.dimension == 1, "the shrinking family lives on the line");
  SparseFamily s;
  s.grid = grid;
  s.eta = 0.5;
  std::vector<std::vector<RealBox>> wit;
  for (int n = 0; n <= n_max; ++n) {
    const RealBox r = RealBox::interval(0.0, std::ldexp(1.0, -n));
    auto m = box_member(grid, r);
    const bool too_deep = r.hi[0] < std::ldexp(grid.side, -kMaxAddressLevel);
    require(m.cube.has_value() || too_deep, "[0, 2^-n) is not dyadic in this grid");
    s.members.push_back(std::move(m));
    wit.push_back({RealBox::interval(std::ldexp(1.0, -n - 1), std::ldexp(1.0, -n))});
  }
  s.witness = std::move(wit);
  return s;
}

inline SparseFamily make_shrinking_family(int n_max) {
  return make_shrinking_family(n_max, DyadicGrid::interval(0.0, 1.0, std::min(n_max, 20)));
}

struct ShrinkingResult {
  double mean = 0.0;         // <A_S 1_[0,1)>_{J_n}
  double expected = 0.0;     // n/2 + 1
  double tail = 0.0;         // truncation deficit 2^{n-1-N}
  double oscillation = 0.0;  // <|A_S 1 - <A_S 1>_{J_n}|>_{J_n} on the grid (a lower bound)
};

/// The shrinking-family computation over J_n = [-2^-n, 2^-n) on a grid rooted
/// at [-1, 1) with cells of width 2^{-n-1}.
inline ShrinkingResult shrinking_average(int n, int n_max) {
  require(n >= 1, "n must be positive");
  require(n_max >= n + 40, "truncation must leave a tail below 1e-12");
  const int depth = n + 2;
  const auto g = DyadicGrid::interval(-1.0, 1.0, depth);
  const SparseFamily s = make_shrinking_family(n_max, g);
  const auto f = GridFunction::indicator(g, RealBox::interval(0.0, 1.0));
  const auto a = sparse_apply(s, f);
  const Index mid = g.cells_per_axis() / 2;
  const LatticeBox jn = LatticeBox::interval(mid - 2, mid + 2);
  ShrinkingResult r;
  r.mean = mean(a, jn);
  r.expected = n / 2.0 + 1.0;
  r.tail = std::ldexp(1.0, n - 1 - n_max);
  r.oscillation = mean_oscillation(a, jn);
  return r;
}

// ---------------------------------------------------------------------------
// BMO bounds for dyadic sparse operators

/// Implementation constant for the two strong estimates: the factor 2 lost
/// when passing from inf_c to c = <f>_Q. The Carleson step and the A_1
/// inclusion are constant-free.
inline constexpr double kSparseBmoConstant = 2.0;

struct SparseBmoQuantities {
  double linf_w = 0.0;
  double a1_inv = 0.0;
  double ainf_inv = 0.0;
  double bmo_one = 0.0, bmo_inf = 0.0, bmo_one_wk = 0.0, bmo_inf_wk = 0.0;
  double step_worst = 0.0;  // max over Q0 of <|A_S f - c|>_{Q0} / ((1/|Q0|) sum_{Q ⊆ Q0} int_Q |f|)
  double step_weighted_worst = 0.0;  // same with the ||f||_{L^inf_w} sigma(Q) bound
};

/// Runs the four estimates and the proof step. `with_weak = false` skips the
/// weak norms, which dominate the cost on deep grids; their rows are then
/// reported as skipped.
inline ReportList verify_wbmosparse(const SparseFamily& s, const Weight& w, const GridFunction& f,
                                    SparseBmoQuantities* out = nullptr, bool with_weak = true) {
  const DyadicGrid& g = f.grid();
  require(w.grid() == g, "weight and function live on different grids");
  for (const SparseMember& m : s.members) {
    if (!m.cube || m.cube->level > g.depth) throw unsupported_error("members must be cubes of the grid");
  }
  const Weight sigma = w.inverse();
  SparseBmoQuantities q;
  q.linf_w = linf_w_norm(f, w);
  q.a1_inv = a1_characteristic(sigma, MaximalFlavor::dyadic());
  q.ainf_inv = ainfty_characteristic(sigma, MaximalFlavor::dyadic());
  const GridFunction a = sparse_apply(s, f);
  const auto stats = box_stats(a, w, MaximalFlavor::dyadic(), with_weak);
  q.bmo_one = bmo_norm(stats, Integrability::One, Strength::Strong);
  q.bmo_inf = bmo_norm(stats, Integrability::Infinity, Strength::Strong);
  q.bmo_one_wk = bmo_norm(stats, Integrability::One, Strength::Weak);
  q.bmo_inf_wk = bmo_norm(stats, Integrability::Infinity, Strength::Weak);

  // The proof step with c = sum of <f>_Q over members strictly containing Q0.
  std::vector<double> avg(s.members.size());
  for (std::size_t i = 0; i < avg.size(); ++i) avg[i] = member_average(f, s.members[i]);
  const GridFunction absf = f.abs();
  bool step_ok = true;
  for (const Cube& q0 : dyadic_cubes(g)) {
    CompensatedSum c, inner, inner_sigma;
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      const Cube& m = *s.members[i].cube;
      if (m != q0 && m.contains(q0)) c.add(avg[i]);
      if (q0.contains(m)) {
        inner.add(integral(absf, m.box(g)));
        inner_sigma.add(weight_mass(sigma.values(), m));
      }
    }
    const LatticeBox b = q0.box(g);
    const double lhs = mean_deviation(gather(a, b), c.value());
    const double vol = q0.volume(g);
    const double tight = inner.value() / vol;
    const double weighted = q.linf_w * inner_sigma.value() / vol;
    if (lhs > tight * (1 + 1e-12) + 1e-300 || tight > weighted * (1 + 1e-12) + 1e-300) step_ok = false;
    if (tight > 0.0) q.step_worst = std::max(q.step_worst, lhs / tight);
    if (weighted > 0.0) q.step_weighted_worst = std::max(q.step_weighted_worst, lhs / weighted);
  }

  const double base = q.linf_w / s.eta;
  const double tol = 1e-12;
  ReportList rows;
  rows.push_back(VerificationReport::predicate(
      "sparse_bmo.proof_step", "<|A_S f - c|>_{Q0} <= |Q0|^-1 sum_{Q ⊆ Q0} int_Q |f| <= ||f||_{L^inf_w} sigma-sum",
      step_ok, q.step_worst, 1.0, "lhs = worst ratio against the tight bound"));
  rows.push_back(VerificationReport::inequality("sparse_bmo.strong_one", "||A_S f||_{BMO^1_w(D)} <~ eta^-1 [w^-1]_Ainf ||f||",
                                                q.bmo_one, kSparseBmoConstant * base * q.ainf_inv, tol,
                                                "C_impl = 2"));
  rows.push_back(VerificationReport::inequality(
      "sparse_bmo.strong_inf", "||A_S f||_{BMO^inf_w(D)} <~ eta^-1 [w^-1]_A1 [w^-1]_Ainf ||f||", q.bmo_inf,
      kSparseBmoConstant * base * q.a1_inv * q.ainf_inv, tol, "C_impl = 2"));
  auto finite_row = [&](std::string id, std::string anchor, double lhs, double rhs) {
    auto r = VerificationReport::predicate(std::move(id), std::move(anchor), std::isfinite(lhs) && std::isfinite(rhs),
                                           lhs, rhs, "empirical constant reported; only finiteness asserted");
    return r;
  };
  const std::string weak_one = "||A_S f||_{BMO^1,wk_w(D)} <~ eta^-1 ||f||";
  const std::string weak_inf = "||A_S f||_{BMO^inf,wk_w(D)} <~ eta^-1 [w^-1]_A1 ||f||";
  if (with_weak) {
    rows.push_back(finite_row("sparse_bmo.weak_one", weak_one, q.bmo_one_wk, base));
    rows.push_back(finite_row("sparse_bmo.weak_inf", weak_inf, q.bmo_inf_wk, base * q.a1_inv));
  } else {
    rows.push_back(VerificationReport::skipped("sparse_bmo.weak_one", weak_one, "weak norms not requested"));
    rows.push_back(VerificationReport::skipped("sparse_bmo.weak_inf", weak_inf, "weak norms not requested"));
  }
  if (out) *out = q;
  return rows;
}

/// The hypothesis rate verified above: ||A_S f||_{BMO^inf_w} <= phi([w^-1]_A1) ||f||_{L^inf_w}
/// with phi(t) = (2 / eta) t^2, using [w^-1]_Ainf <= [w^-1]_A1.
inline double sparse_bmo_rate(double eta, double t) { return kSparseBmoConstant / eta * t * t; }

}  // namespace wbmo
