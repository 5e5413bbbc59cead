// Acceptance run: one PASS/FAIL line per criterion with its measured runtime
// against the runtime budget. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "wbmo/wbmo.hpp"
#include "wbmo/suites.hpp"

using namespace wbmo;

namespace {

const std::array<double, 2> kOrigin{0.0, 0.0};

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

// Counts failures and keeps the first few ids for the detail line.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;

  void add(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  void add(const ReportList& rows) {
    for (const auto& r : rows) {
      std::ostringstream os;
      os << r.check_id << " lhs=" << r.lhs << " rhs=" << r.rhs;
      add(r.passed(), os.str());
    }
  }
  [[nodiscard]] Outcome outcome(const std::string& extra = {}) const {
    std::ostringstream os;
    os << checks << " checks, " << failures << " violations";
    if (!extra.empty()) os << ", " << extra;
    if (!first.empty()) os << " (" << first << ")";
    return {failures == 0, os.str()};
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// 1. Shrinking family: n/2 + 1 and the n/4 oscillation floor.
Outcome shrinking() {
  Tally t;
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const auto r = shrinking_average(n, n + 45);
    worst = std::max(worst, std::abs(r.mean - (n / 2.0 + 1.0)));
    t.add(std::abs(r.mean - (n / 2.0 + 1.0)) <= 1e-10, "mean n=" + std::to_string(n));
    t.add(r.oscillation >= n / 4.0, "oscillation n=" + std::to_string(n));
  }
  return t.outcome("max |mean - (n/2 + 1)| = " + fmt(worst));
}

// 2. Height-function identity on F_n and the growing family at N = 50.
Outcome height() {
  Tally t;
  const auto fn = make_fn_family(50);
  const auto f = GridFunction::indicator(fn.grid, RealBox::interval(0.0, 1.0));
  const auto af = sparse_apply(fn, f);
  const auto h = height_function(fn, fn.grid);
  for (std::size_t k = 0; k < af.size(); ++k) t.add(af[k] == 0.5 * h[k], "cell " + std::to_string(k));
  const auto grow = make_growing_family(50, 4);
  const double at0 = sparse_evaluate(grow, GridFunction::constant(grow.grid, 1.0), 0.0);
  t.add(at0 == 51.0, "growing value " + fmt(at0));
  return t.outcome("A_S 1 (0) = " + fmt(at0));
}

// 3. Two forms of [w^-1]_A1(D) for the stock bank at depth 10.
Outcome a1_forms() {
  Tally t;
  const auto g = DyadicGrid::interval(-1.0, 1.0, 10);
  double worst = 0.0;
  for (const Weight& w : stock::family(g, kOrigin)) {
    const double a = a1_characteristic(w.inverse(), MaximalFlavor::dyadic());
    const double b = a1_characteristic_via_maximal(w.inverse(), MaximalFlavor::dyadic());
    const double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
    worst = std::max(worst, rel);
    t.add(rel <= 1e-12, w.label());
  }
  return t.outcome("max relative gap " + fmt(worst));
}

// 4. Carleson packing on 300 random sparse families times the stock bank.
Outcome carleson() {
  Tally t;
  gen::Engine e(4004);
  const auto g = DyadicGrid::interval(0.0, 1.0, 7);
  const auto bank = stock::family(g, {0.5, 0.0});
  std::vector<double> ainf;
  for (const auto& w : bank) ainf.push_back(ainfty_characteristic(w, MaximalFlavor::dyadic()));
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = gen::sparse_family(e, g, gen::uniform(e, 0.1, 0.9));
    const auto pick = static_cast<std::size_t>(gen::integer(e, 0, static_cast<long long>(s.members.size()) - 1));
    const Cube q0 = *s.members[pick].cube;
    for (std::size_t i = 0; i < bank.size(); ++i) {
      const auto c = carleson_sum(s, bank[i], q0, ainf[i]);
      worst = std::max(worst, c.sum / c.bound);
      t.add(c.holds(), "trial " + std::to_string(trial) + " " + bank[i].label());
    }
  }
  return t.outcome("max sum/bound " + fmt(worst));
}

// 5. BMO structure on 500 random (f, w) pairs.
Outcome bmo_structure() {
  Tally t;
  gen::Engine e(5005);
  for (int trial = 0; trial < 500; ++trial) {
    const bool two_d = trial % 5 == 0;
    const auto g = two_d ? DyadicGrid::square(0.0, 0.0, 1.0, 3) : DyadicGrid::interval(0.0, 1.0, 5);
    const auto f = gen::step_function(e, g);
    const auto w = gen::weight(e, g);
    const double c = gen::uniform(e, -5.0, 5.0);
    const double lambda = std::ldexp(1.0, static_cast<int>(gen::integer(e, -3, 3)));
    std::vector<MaximalFlavor> fams{MaximalFlavor::dyadic(), MaximalFlavor::shifted_dyadic()};
    if (!two_d) fams.push_back(MaximalFlavor::full_1d());
    for (const auto& fam : fams) {
      t.add(check_inclusions(f, w, fam));
      t.add(check_bmoconst(f, w, fam));
      t.add(check_msharp_identity(f, w, fam));
      for (auto integ : {Integrability::One, Integrability::Infinity})
        for (auto st : {Strength::Strong, Strength::Weak}) {
          const BmoFlavor fl{integ, st, fam};
          const double base = bmo_norm(f, w, fl);
          const double shifted = bmo_norm(f.shifted(c), w, fl);
          t.add(std::abs(shifted - base) <= 1e-12 * std::max(1.0, base), "shift trial " + std::to_string(trial));
          t.add(bmo_norm(f.scaled(lambda), w, fl) == lambda * base, "homogeneity trial " + std::to_string(trial));
        }
    }
  }
  return t.outcome();
}

GridFunction random_nonnegative(gen::Engine& e, const DyadicGrid& g) {
  auto f = gen::step_function(e, g).abs();
  if (f.max_abs() == 0.0) f = GridFunction::constant(g, 1.0);
  return f;
}

// 6. Rubio de Francia postconditions on 50 random inputs.
Outcome rdf() {
  Tally t;
  gen::Engine e(6006);
  const auto g = DyadicGrid::interval(0.0, 1.0, 7);
  std::size_t retried = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const LebesgueSpace x(gen::uniform(e, 1.3, 3.5), gen::weight(e, g));
    const auto f = random_nonnegative(e, g);
    const auto r = build_rdf_weight(f, x);
    if (r.retries > 0) ++retried;
    std::vector<GridFunction> duals{GridFunction::constant(g, 1.0), norming_function(f, x)};
    for (int i = 0; i < 3; ++i) duals.push_back(random_nonnegative(e, g));
    t.add(check_rdf(f, x, r, duals));
  }
  return t.outcome(std::to_string(retried) + " inputs needed a larger B");
}

// 7. Extrapolation chain for the shrinking-family operator on 30 instances.
Outcome extrapolation() {
  Tally t;
  gen::Engine e(7007);
  const auto g = DyadicGrid::interval(0.0, 1.0, 7);
  const auto s = make_shrinking_family(7, g);
  const auto cfg = sparse_config(s);
  const std::vector<Weight> weights{stock::identity(g), stock::step(g), stock::power(g, 0.25, kOrigin),
                                    stock::power(g, -0.25, kOrigin), stock::power(g, -0.5, kOrigin)};
  double worst = 0.0;
  int instances = 0;
  for (double p : {1.5, 2.0, 3.0})
    for (const Weight& v : weights)
      for (int i = 0; i < 2; ++i) {
        const LebesgueSpace x(p, v);
        const auto f = random_nonnegative(e, g);
        const std::vector<GridFunction> duals{GridFunction::constant(g, 1.0), random_nonnegative(e, g)};
        const std::vector<GridFunction> fs_bank{f};
        const auto ch = extrapolation_demo(s, x, f, cfg, duals, fs_bank);
        t.add(ch.rows);
        worst = std::max(worst, ch.worst_pairing);
        ++instances;
      }
  return t.outcome(std::to_string(instances) + " instances, max pairing ratio " + fmt(worst));
}

// 8. Sparse domination certificates on 100 inputs.
Outcome domination() {
  Tally t;
  gen::Engine e(8008);
  const DiniKernel h = hilbert_kernel();
  double worst = INFINITY;
  int inputs = 0;
  auto check = [&](const GridFunction& g, const Cube& q0, const std::string& what) {
    const auto c = sparse_dominate(g, q0);
    worst = std::min(worst, c.min_margin);
    t.add(c.min_margin >= -1e-12 && c.sparsity.ok && c.worst_level_fraction <= 0.5, what);
    ++inputs;
  };
  const auto hg = DyadicGrid::interval(-4.0, 4.0, 8);
  check(apply_czo(h, GridFunction::indicator(hg, RealBox::interval(0.0, 0.25))), Cube{0, {0, 0}}, "hilbert indicator");
  for (int i = 0; i < 19; ++i) {
    const auto f = gen::step_function(e, hg) * GridFunction::indicator(hg, RealBox::interval(-2.0, 2.0));
    check(apply_czo(h, f), i % 2 ? Cube{0, {0, 0}} : gen::cube(e, hg), "hilbert " + std::to_string(i));
  }
  for (int i = 0; i < 80; ++i) {
    const auto g = i % 4 == 0 ? DyadicGrid::square(0.0, 0.0, 1.0, 4) : DyadicGrid::interval(0.0, 1.0, 7);
    check(gen::step_function(e, g), gen::cube(e, g), "random " + std::to_string(i));
  }
  return t.outcome(std::to_string(inputs) + " inputs, min margin " + fmt(worst));
}

// 9. Ratio stability of both weighted estimates across depths 8, 10, 12.
Outcome czo_stability() {
  Tally t;
  const DiniKernel k = hilbert_kernel();
  const auto cal = suites::czo_grid(8);
  const double c_osc = calibrate_oscillation_constant(k, suites::czo_calibration_bank(cal, 1));
  std::array<double, 2> at8{0.0, 0.0};
  std::array<double, 2> at12{0.0, 0.0};
  double chain1 = 0.0;
  for (int depth : {8, 10, 12}) {
    const auto g = suites::czo_grid(depth);
    const auto f = suites::czo_test_function(g);
    for (const Weight& w : {stock::identity(g), stock::step(g), stock::power(g, 0.25, kOrigin),
                            stock::power(g, 0.5, kOrigin)}) {
      for (const auto& fam : {MaximalFlavor::dyadic(), MaximalFlavor::shifted_dyadic()}) {
        CzoTheoremResult r;
        t.add(verify_czo_theorem(k, w, f, c_osc, fam, &r));
        chain1 = r.constants.chain1;
        if (depth == 8) at8 = {std::max(at8[0], r.ratio1()), std::max(at8[1], r.ratio2())};
        if (depth == 12) at12 = {std::max(at12[0], r.ratio1()), std::max(at12[1], r.ratio2())};
      }
    }
  }
  t.add(at12[0] <= 1.1 * at8[0], "bmo_one ratio grew");
  t.add(at12[1] <= 1.1 * at8[1], "bmo_inf ratio grew");
  return t.outcome("C_osc " + fmt(c_osc) + ", chain constant " + fmt(chain1) + ", max ratios depth 8: " +
                   fmt(at8[0]) + "/" + fmt(at8[1]) + ", depth 12: " + fmt(at12[0]) + "/" + fmt(at12[1]));
}

// 10. B(Omega) embedding for power weights.
Outcome embedding() {
  Tally t;
  const auto g = DyadicGrid::interval(-1.0, 1.0, 8);
  int skipped = 0;
  double worst = 0.0;
  for (double delta : stock::power_exponents()) {
    const auto w = stock::power(g, delta, kOrigin);
    for (double alpha : {0.5, 1.0}) {
      const Modulus omega = Modulus::power(alpha);
      const auto b = b_omega_characteristic(w, omega);
      for (double p : {1.25, 1.5, 2.0, 3.0}) {
        if (!(delta > -1.0 && delta < p - 1.0)) continue;  // [w]_Ap infinite on the line
        const double dini = dini_weighted_integral(omega, p - 1.0);
        if (!std::isfinite(dini)) {
          ++skipped;
          t.add(p >= 1.0 + alpha, "divergence misclassified");
          continue;
        }
        const double ap = ap_characteristic(w, p, MaximalFlavor::full_1d());
        const double value = std::isfinite(b.with_tail) ? std::max(b.value, b.with_tail) : b.value;
        const double bound = b_omega_embedding_constant(1, p) * ap * dini;
        worst = std::max(worst, value / bound);
        t.add(value <= bound, "delta=" + fmt(delta) + " alpha=" + fmt(alpha) + " p=" + fmt(p));
      }
    }
  }
  return t.outcome(std::to_string(skipped) + " divergent cases skipped, max B / bound " + fmt(worst));
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "shrinking-family average n/2 + 1 and oscillation >= n/4", 10.0, shrinking},
      {2, "height-function identity and growing-family value", 1.0, height},
      {3, "two forms of [w^-1]_A1(D) agree for the stock weights", 5.0, a1_forms},
      {4, "Carleson packing over 300 random sparse families", 30.0, carleson},
      {5, "BMO structure over 500 random pairs", 60.0, bmo_structure},
      {6, "Rubio de Francia postconditions on 50 inputs", 60.0, rdf},
      {7, "extrapolation chain on 30 instances", 120.0, extrapolation},
      {8, "sparse domination certificates on 100 inputs", 120.0, domination},
      {9, "weighted Hilbert estimates stable across depths 8, 10, 12", 300.0, czo_stability},
      {10, "B(Omega) embedding for power weights", 60.0, embedding},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("aborted: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool ok = o.ok && in_time;
    if (!ok) ++failed;
    std::printf("%s criterion %d: %s; %s; %.2f s of %.0f s%s\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(),
                o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failed;
}
