#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "wbmo/sparse.hpp"

using namespace wbmo;
using Catch::Approx;

namespace {

const std::array<double, 2> kOrigin{0.0, 0.0};

// A_S f by brute force: for each cell, average of f over each member, with
// the member's cells enumerated directly (members are grid cubes).
std::vector<oracle::Real> brute_apply(const SparseFamily& s, const GridFunction& f) {
  const DyadicGrid& g = f.grid();
  std::vector<oracle::Real> out(g.cell_count(), 0);
  for (const SparseMember& m : s.members) {
    const LatticeBox b = m.cube->box(g);
    const oracle::Real avg = oracle::mean(gather(f, b));
    for_each_cell(g, b, [&](std::size_t k) { out[k] += avg; });
  }
  return out;
}

}  // namespace

TEST_CASE("dyadic addresses of real boxes", "[sparse]") {
  const auto g = DyadicGrid::interval(-1.0, 1.0, 4);
  const auto q = dyadic_address(g, RealBox::interval(0.0, 0.25));
  REQUIRE(q.has_value());
  CHECK(q->level == 3);
  CHECK(q->index[0] == 4);
  CHECK(dyadic_address(g, RealBox::interval(0.0, std::ldexp(1.0, -30)))->level == 31);
  CHECK_FALSE(dyadic_address(g, RealBox::interval(0.0, 0.75)).has_value());
  CHECK_FALSE(dyadic_address(g, RealBox::interval(0.125, 0.375)).has_value());
  CHECK_FALSE(dyadic_address(g, RealBox::interval(-2.0, 0.0)).has_value());
  CHECK(dyadic_address(g, RealBox::interval(0.0, std::ldexp(1.0, 1 - kMaxAddressLevel)))->level == kMaxAddressLevel);
  CHECK_FALSE(dyadic_address(g, RealBox::interval(0.0, std::ldexp(1.0, -kMaxAddressLevel))).has_value());
}

TEST_CASE("greedy sparsity: singleton, shrinking and full families", "[sparse]") {
  const auto g = DyadicGrid::interval(0.0, 1.0, 3);
  SparseFamily single{g, {cube_member(g, Cube{0, {0, 0}})}, 1.0, std::nullopt};
  const auto r1 = verify_sparsity(single, 1.0);
  CHECK(r1.ok);
  CHECK(r1.fractions[0] == 1.0);

  const auto shrink = make_shrinking_family(5);
  CHECK(shrink.members.size() == 6);
  const auto r2 = verify_sparsity(shrink, 0.5);
  CHECK(r2.ok);
  for (std::size_t i = 0; i + 1 < r2.fractions.size(); ++i) CHECK(r2.fractions[i] == 0.5);
  CHECK(r2.fractions.back() == 1.0);
  CHECK(check_witness(shrink, 0.5).ok);

  SparseFamily all{g, {}, 0.75, std::nullopt};
  for (const Cube& q : dyadic_cubes(g)) all.members.push_back(cube_member(g, q));
  const auto r3 = verify_sparsity(all, 0.75);
  CHECK_FALSE(r3.ok);
  REQUIRE(r3.violator.has_value());
  CHECK(r3.fractions[*r3.violator] < 0.75);
}

TEST_CASE("sparsity errors", "[sparse]") {
  const auto fn = make_fn_family(3);
  CHECK_THROWS_AS(verify_sparsity(fn, 0.5), unsupported_error);
  const auto g = DyadicGrid::interval(0.0, 1.0, 2);
  SparseFamily dup{g, {cube_member(g, Cube{1, {0, 0}}), cube_member(g, Cube{1, {0, 0}})}, 0.5, std::nullopt};
  CHECK_THROWS_AS(verify_sparsity(dup, 0.5), contract_violation);
  CHECK_THROWS_AS(verify_sparsity(dup, 0.0), contract_violation);
}

TEST_CASE("witness validation catches bad witnesses", "[sparse]") {
  auto fn = make_fn_family(3);
  CHECK(check_witness(fn, 0.5).ok);
  CHECK_FALSE(check_witness(fn, 0.6).ok);
  auto overlapping = fn;
  (*overlapping.witness)[1] = {RealBox::interval(0.0, 1.0)};
  (*overlapping.witness)[2] = {RealBox::interval(0.5, 1.0)};
  CHECK_FALSE(check_witness(overlapping, 0.5).ok);
  auto outside = fn;
  (*outside.witness)[0] = {RealBox::interval(5.0, 6.0)};
  CHECK_FALSE(check_witness(outside, 0.5).ok);
  auto none = fn;
  none.witness.reset();
  CHECK_FALSE(check_witness(none, 0.5).ok);
}

TEST_CASE("counterexample family shapes", "[sparse]") {
  const auto fn = make_fn_family(3);
  REQUIRE(fn.members.size() == 3);
  for (int n = 1; n <= 3; ++n) {
    const auto& m = fn.members[static_cast<std::size_t>(n - 1)];
    CHECK(m.parts == std::vector<RealBox>{RealBox::interval(0.0, 1.0), RealBox::interval(n, n + 1.0)});
    CHECK((*fn.witness)[static_cast<std::size_t>(n - 1)] == std::vector<RealBox>{RealBox::interval(n, n + 1.0)});
  }
  const auto grow = make_growing_family(4);
  REQUIRE(grow.members.size() == 5);
  for (int n = 0; n <= 4; ++n) CHECK(grow.members[static_cast<std::size_t>(n)].parts[0] == RealBox::interval(0.0, std::ldexp(1.0, n)));
  CHECK(verify_sparsity(grow, 0.5).ok);
  CHECK(check_witness(grow, 0.5).ok);
  CHECK_THROWS_AS(make_fn_family(0), contract_violation);
}

TEST_CASE("sparse operator examples", "[sparse]") {
  const auto g = DyadicGrid::interval(0.0, 2.0, 3);
  SparseFamily s{g, {box_member(g, RealBox::interval(0.0, 1.0))}, 1.0, std::nullopt};
  const auto a = sparse_apply(s, GridFunction::constant(g, 1.0));
  CHECK(a.values() == GridFunction::indicator(g, RealBox::interval(0.0, 1.0)).values());

  const auto fn = make_fn_family(50);
  const auto f = GridFunction::indicator(fn.grid, RealBox::interval(0.0, 1.0));
  const auto af = sparse_apply(fn, f);
  const auto h = height_function(fn, fn.grid);
  for (std::size_t k = 0; k < af.size(); ++k) CHECK(af[k] == 0.5 * h[k]);
  CHECK(h[0] == 50.0);

  const auto grow = make_growing_family(50, 4);
  CHECK(sparse_evaluate(grow, GridFunction::constant(grow.grid, 1.0), 0.0) == 51.0);
  const auto grow20 = make_growing_family(20);
  CHECK(sparse_apply(grow20, GridFunction::constant(grow20.grid, 1.0))[0] == 21.0);
}

TEST_CASE("height function integrates to the total member volume", "[sparse]") {
  gen::Engine e(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = trial % 2 ? 2 : 1;
    const auto g = d == 1 ? DyadicGrid::interval(0.0, 1.0, 6) : DyadicGrid::square(0.0, 0.0, 1.0, 4);
    const auto s = gen::sparse_family(e, g, gen::uniform(e, 0.2, 0.8));
    const auto h = height_function(s, g);
    double vol = 0.0;
    for (const auto& m : s.members) vol += m.volume(d);
    CHECK(integral(h) == Approx(vol).epsilon(1e-13));
    for (double v : h.values()) CHECK(v == std::round(v));
    CHECK(sparse_apply(s, GridFunction::constant(g, 1.0)).values() == h.values());
  }
}

TEST_CASE("sparse operator agrees with a brute-force oracle and is monotone", "[sparse]") {
  gen::Engine e(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = DyadicGrid::interval(0.0, 1.0, 7);
    const auto s = gen::sparse_family(e, g, 0.5);
    const auto f = gen::step_function(e, g);
    const auto a = sparse_apply(s, f);
    const auto ref = brute_apply(s, f);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == Approx(static_cast<double>(ref[k])).margin(1e-12));
    const auto bigger = f.map([](double x) { return x + 0.5; });
    const auto ab = sparse_apply(s, bigger);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(ab[k] >= a[k]);
  }
}

TEST_CASE("generated families are sparse at their nominal eta", "[sparse]") {
  gen::Engine e(13);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = trial % 3 ? DyadicGrid::interval(0.0, 1.0, 8) : DyadicGrid::square(0.0, 0.0, 1.0, 5);
    const double eta = gen::uniform(e, 0.1, 0.9);
    const auto s = gen::sparse_family(e, g, eta);
    CHECK(verify_sparsity(s, eta).ok);
  }
}

TEST_CASE("Carleson sum examples", "[sparse]") {
  const auto g = DyadicGrid::interval(0.0, 1.0, 8);
  const auto shrink = make_shrinking_family(8, g);
  const auto one = stock::identity(g);
  const auto r = carleson_sum(shrink, one, Cube{0, {0, 0}});
  CHECK(r.sum == Approx(2.0 - std::ldexp(1.0, -8)).epsilon(1e-15));
  CHECK(r.ainfty == Approx(1.0).epsilon(1e-15));
  CHECK(r.bound == Approx(2.0).epsilon(1e-15));
  CHECK(r.holds());

  SparseFamily single{g, {cube_member(g, Cube{2, {1, 0}})}, 0.7, std::nullopt};
  for (const Weight& w : stock::family(g, kOrigin)) {
    const auto c = carleson_sum(single, w, Cube{2, {1, 0}});
    CHECK(c.holds());
    CHECK(c.bound >= c.sum);
  }
}

TEST_CASE("Carleson packing over random sparse families", "[sparse]") {
  gen::Engine e(14);
  const auto g = DyadicGrid::interval(0.0, 1.0, 7);
  const auto bank = stock::family(g, {0.5, 0.0});
  std::vector<double> ainf;
  for (const auto& w : bank) ainf.push_back(ainfty_characteristic(w, MaximalFlavor::dyadic()));
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = gen::sparse_family(e, g, gen::uniform(e, 0.1, 0.9));
    const Cube q0 = *s.members[static_cast<std::size_t>(gen::integer(e, 0, static_cast<long long>(s.members.size()) - 1))].cube;
    for (std::size_t i = 0; i < bank.size(); ++i) CHECK(carleson_sum(s, bank[i], q0, ainf[i]).holds());
  }
}

TEST_CASE("shrinking average matches the closed form", "[sparse]") {
  const auto r1 = shrinking_average(1, 45);
  CHECK(r1.mean == Approx(1.5).margin(1e-12));
  const auto r10 = shrinking_average(10, 60);
  CHECK(r10.mean == Approx(6.0).margin(1e-12));
  CHECK(r10.expected - r10.mean == Approx(r10.tail).margin(1e-12));
  for (int n = 1; n <= 20; ++n) {
    const auto r = shrinking_average(n, n + 45);
    CHECK(std::abs(r.mean - r.expected) <= 1e-10);
    CHECK(r.expected - r.mean == Approx(r.tail).margin(1e-13));
    CHECK(r.oscillation >= n / 4.0);
  }
  CHECK_THROWS_AS(shrinking_average(5, 30), contract_violation);
}

TEST_CASE("sparse BMO bounds: examples", "[sparse]") {
  const auto g = DyadicGrid::interval(0.0, 1.0, 6);
  const auto one = stock::identity(g);
  const auto shrink = make_shrinking_family(6, g);
  const auto f = one.values().reciprocal();
  SparseBmoQuantities q;
  const auto rows = verify_wbmosparse(shrink, one, f, &q);
  CHECK(all_passed(rows));
  CHECK(q.bmo_one <= 2.0 * q.linf_w / shrink.eta * q.ainf_inv);

  SparseFamily single{g, {cube_member(g, Cube{1, {0, 0}})}, 1.0, std::nullopt};
  const auto rs = verify_wbmosparse(single, one, GridFunction::constant(g, 3.0), &q);
  CHECK(all_passed(rs));
  CHECK(std::isfinite(q.bmo_one));
  CHECK(q.bmo_one == Approx(1.5));  // 3 * 1_[0,1/2) has mean oscillation 3/2 on [0,1)

  const auto rz = verify_wbmosparse(shrink, one, GridFunction::constant(g, 0.0), &q);
  CHECK(all_passed(rz));
  CHECK(q.bmo_one == 0.0);
  CHECK(q.bmo_inf_wk == 0.0);
}

TEST_CASE("sparse BMO bounds: random families and weights", "[sparse]") {
  gen::Engine e(15);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = trial % 4 ? DyadicGrid::interval(0.0, 1.0, 6) : DyadicGrid::square(0.0, 0.0, 1.0, 3);
    const auto s = gen::sparse_family(e, g, gen::uniform(e, 0.2, 0.8));
    const auto w = gen::weight(e, g);
    const auto f = gen::step_function(e, g);
    SparseBmoQuantities q;
    const auto rows = verify_wbmosparse(s, w, f, &q);
    for (const auto& r : rows) CHECK(r.passed());
    CHECK(q.step_worst <= 1.0 + 1e-12);
  }
}
