#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "wbmo/weights.hpp"

using namespace wbmo;
using Catch::Approx;

namespace {

const std::array<double, 2> kOrigin{0.0, 0.0};

double brute_ap(const Weight& w, double p, const std::vector<LatticeBox>& boxes) {
  const double pp = p / (p - 1.0);
  double best = 0.0;
  for (const LatticeBox& b : boxes) {
    oracle::Real a = 0, s = 0;
    std::size_t n = 0;
    for_each_cell(w.grid(), b, [&](std::size_t k) {
      a += w.values()[k];
      s += std::pow(static_cast<oracle::Real>(w.values()[k]), 1.0L - pp);
      ++n;
    });
    best = std::max(best, static_cast<double>(a / n * std::pow(s / n, static_cast<oracle::Real>(p - 1.0))));
  }
  return best;
}

// int_Q M^{D(Q)} w / w(Q), with the localized maximal function computed by
// enumerating the sub-cubes containing each cell.
double brute_ainfty_dyadic(const Weight& w) {
  const DyadicGrid& g = w.grid();
  double best = 0.0;
  for (const Cube& q : dyadic_cubes(g)) {
    const auto sub = localized_boxes(g, q);
    oracle::Real integral = 0, mass = 0;
    for_each_cell(g, q.box(g), [&](std::size_t k) {
      const auto [ix, iy] = g.unflat(k);
      oracle::Real m = 0;
      for (const LatticeBox& b : sub) {
        if (!b.contains_cell(ix, iy)) continue;
        m = std::max(m, static_cast<oracle::Real>(oracle::mean(gather(w.values(), b))));
      }
      integral += m;
      mass += w.values()[k];
    });
    best = std::max(best, static_cast<double>(integral / mass));
  }
  return best;
}

}  // namespace

TEST_CASE("A1 examples", "[weights]") {
  const auto g = DyadicGrid::interval(0.0, 1.0, 1);
  CHECK(a1_characteristic(stock::identity(g), MaximalFlavor::dyadic()) == 1.0);
  const Weight step(GridFunction(g, {2.0, 1.0}));
  CHECK(a1_characteristic(step, MaximalFlavor::dyadic()) == 1.5);
  CHECK(a1_characteristic_via_maximal(step, MaximalFlavor::dyadic()) == 1.5);
}

TEST_CASE("A1 of x^{-1/2} grows with depth", "[weights]") {
  double prev = 0.0;
  for (int depth : {6, 8, 10}) {
    const auto g = DyadicGrid::interval(0.0, 1.0, depth);
    const double a1 = a1_characteristic(stock::power(g, -0.5, kOrigin), MaximalFlavor::dyadic());
    CHECK(std::isfinite(a1));
    CHECK(a1 >= prev);
    prev = a1;
  }
}

TEST_CASE("Ap examples and errors", "[weights]") {
  const auto g = DyadicGrid::interval(-1.0, 1.0, 6);
  for (double p : {1.5, 2.0, 4.0}) CHECK(ap_characteristic(stock::identity(g), p, MaximalFlavor::full_1d()) == Approx(1.0));
  CHECK_THROWS_AS(ap_characteristic(stock::identity(g), 1.0, MaximalFlavor::dyadic()), contract_violation);
  CHECK_THROWS_AS(ap_characteristic(stock::identity(g), 0.5, MaximalFlavor::dyadic()), contract_violation);
}

TEST_CASE("Ap of |x|^{1/2} with p = 2 is stable in depth", "[weights]") {
  auto at = [](int depth) {
    const auto g = DyadicGrid::interval(-1.0, 1.0, depth);
    return ap_characteristic(stock::power(g, 0.5, kOrigin), 2.0, MaximalFlavor::dyadic());
  };
  const double a10 = at(10);
  const double a12 = at(12);
  CHECK(std::isfinite(a10));
  CHECK(std::abs(a12 - a10) <= 0.01 * a10);
}

TEST_CASE("A_inf examples", "[weights]") {
  const auto g = DyadicGrid::interval(0.0, 1.0, 5);
  CHECK(ainfty_characteristic(stock::identity(g), MaximalFlavor::dyadic()) == Approx(1.0).epsilon(1e-14));
  const auto step = stock::step(g);
  const double ainf = ainfty_characteristic(step, MaximalFlavor::dyadic());
  CHECK(ainf >= 1.0);
  CHECK(ainf <= a1_characteristic(step, MaximalFlavor::dyadic()) * (1 + 1e-13));
}

TEST_CASE("oracle: characteristics match brute force", "[weights][oracle]") {
  gen::Engine e(41);
  for (int trial = 0; trial < 30; ++trial) {
    const bool two_d = trial % 3 == 2;
    const auto g = two_d ? DyadicGrid::square(0.0, 0.0, 1.0, 3) : DyadicGrid::interval(0.0, 1.0, 5);
    const auto w = gen::weight(e, g);
    const double p = gen::uniform(e, 1.2, 4.0);
    CHECK(ap_characteristic(w, p, MaximalFlavor::dyadic()) == Approx(brute_ap(w, p, dyadic_boxes(g))).epsilon(1e-12));
    CHECK(ainfty_characteristic(w, MaximalFlavor::dyadic()) == Approx(brute_ainfty_dyadic(w)).epsilon(1e-12));
    if (!two_d)
      CHECK(ap_characteristic(w, p, MaximalFlavor::full_1d()) ==
            Approx(brute_ap(w, p, enumerate_boxes_1d(g))).epsilon(1e-12));
  }
}

TEST_CASE("A1 sup form equals the maximal form for the stock bank", "[weights]") {
  for (int d : {1, 2}) {
    const auto g = d == 1 ? DyadicGrid::interval(-1.0, 1.0, 8) : DyadicGrid::square(-1.0, -1.0, 2.0, 5);
    for (const Weight& w : stock::family(g, kOrigin)) {
      for (const auto& fl : {MaximalFlavor::dyadic(), MaximalFlavor::shifted_dyadic()}) {
        const double a = a1_characteristic(w.inverse(), fl);
        const double b = a1_characteristic_via_maximal(w.inverse(), fl);
        CHECK(std::abs(a - b) <= 1e-12 * b);
      }
    }
  }
}

TEST_CASE("property: class nesting and rescaling invariance", "[weights][property]") {
  gen::Engine e(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = DyadicGrid::interval(0.0, 1.0, 6);
    const auto w = gen::weight(e, g);
    const auto fl = trial % 2 ? MaximalFlavor::full_1d() : MaximalFlavor::dyadic();
    const double p = gen::uniform(e, 1.1, 5.0);
    const double a1 = a1_characteristic(w, fl);
    const double ap = ap_characteristic(w, p, fl);
    CHECK(ap >= 1.0 - 1e-12);
    CHECK(ap <= a1 * (1 + 1e-12));
    const double ainf_d = ainfty_characteristic(w, MaximalFlavor::dyadic());
    CHECK(ainf_d <= a1_characteristic(w, MaximalFlavor::dyadic()) * (1 + 1e-12));
    const double c = std::exp(gen::uniform(e, -5.0, 5.0));
    const auto wc = w.scaled(c);
    CHECK(a1_characteristic(wc, fl) == Approx(a1).epsilon(1e-12));
    CHECK(ap_characteristic(wc, p, fl) == Approx(ap).epsilon(1e-12));
    CHECK(ainfty_characteristic(wc, MaximalFlavor::dyadic()) == Approx(ainf_d).epsilon(1e-12));
  }
}

TEST_CASE("property: dilation covariance between [0,1) and [0,2)", "[weights][property]") {
  gen::Engine e(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g1 = DyadicGrid::interval(0.0, 1.0, 6);
    const auto g2 = DyadicGrid::interval(0.0, 2.0, 6);
    const auto w1 = gen::weight(e, g1);
    const Weight w2(GridFunction(g2, w1.values().values()));
    CHECK(a1_characteristic(w1, MaximalFlavor::dyadic()) == a1_characteristic(w2, MaximalFlavor::dyadic()));
    CHECK(ap_characteristic(w1, 3.0, MaximalFlavor::dyadic()) == ap_characteristic(w2, 3.0, MaximalFlavor::dyadic()));
    CHECK(ainfty_characteristic(w1, MaximalFlavor::dyadic()) == ainfty_characteristic(w2, MaximalFlavor::dyadic()));
  }
}

TEST_CASE("property: characteristics are non-decreasing in depth for a fixed step weight", "[weights][property]") {
  // A weight constant on the cells of the coarsest grid is the same function
  // at every depth; refining only adds cubes.
  gen::Engine e(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto coarse = gen::weight(e, DyadicGrid::interval(0.0, 1.0, 4));
    double prev1 = 0.0, prevp = 0.0, previ = 0.0;
    for (int depth = 4; depth <= 8; ++depth) {
      const auto g = DyadicGrid::interval(0.0, 1.0, depth);
      const auto w = Weight(GridFunction::sample(g, [&](double x) {
        return coarse.values()[static_cast<std::size_t>(std::floor(x * 16.0))];
      }));
      const double a1 = a1_characteristic(w, MaximalFlavor::dyadic());
      const double ap = ap_characteristic(w, 2.0, MaximalFlavor::dyadic());
      const double ai = ainfty_characteristic(w, MaximalFlavor::dyadic());
      CHECK(a1 >= prev1 * (1 - 1e-13));
      CHECK(ap >= prevp * (1 - 1e-13));
      CHECK(ai >= previ * (1 - 1e-13));
      prev1 = a1;
      prevp = ap;
      previ = ai;
    }
  }
}

TEST_CASE("non-dyadic A_inf dominates the dyadic one on all intervals", "[weights]") {
  const auto g = DyadicGrid::interval(-1.0, 1.0, 6);
  for (const Weight& w : stock::family(g, kOrigin)) {
    const double full = ainfty_characteristic(w, MaximalFlavor::full_1d());
    CHECK(full >= ainfty_characteristic(w, MaximalFlavor::dyadic()) * (1 - 1e-13));
    CHECK(full <= a1_characteristic(w, MaximalFlavor::full_1d()) * (1 + 1e-12));
  }
}

TEST_CASE("weights must be strictly positive", "[weights][errors]") {
  const auto g = DyadicGrid::interval(0.0, 1.0, 1);
  CHECK_THROWS_AS(Weight(GridFunction(g, {1.0, 0.0})), contract_violation);
  CHECK(stock::power(g, 0.25, kOrigin).power_exponent() == 0.25);
  CHECK(stock::power(g, 0.25, kOrigin).inverse().power_exponent() == -0.25);
}
