#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "wbmo/oscillation.hpp"

using namespace wbmo;
using Catch::Approx;

TEST_CASE("median set examples", "[oscillation]") {
  const std::vector<double> half{0.0, 1.0};
  CHECK(median_set(half).lo == 0.0);
  CHECK(median_set(half).hi == 1.0);
  const std::vector<double> flat{3.0, 3.0, 3.0};
  CHECK(median_set(flat).lo == 3.0);
  CHECK(median_set(flat).hi == 3.0);
  const std::vector<double> four{1.0, 2.0, 3.0, 4.0};
  CHECK(median_set(four).lo == 2.0);
  CHECK(median_set(four).hi == 3.0);
  const std::vector<double> odd{1.0, 5.0, 9.0};
  CHECK(median_set(odd).lo == 5.0);
  CHECK(median_set(odd).hi == 5.0);
}

TEST_CASE("median oscillation examples", "[oscillation]") {
  const std::vector<double> half{0.0, 1.0};
  CHECK(median_oscillation(half, 0.125).value == 0.5);
  const std::vector<double> flat(8, 2.0);
  CHECK(median_oscillation(flat, 0.3).value == 0.0);
  // A small exceptional set costs nothing: 1 of 16 cells with lambda = 1/8.
  std::vector<double> rare(16, 0.0);
  rare.back() = 1.0;
  CHECK(median_oscillation(rare, 0.125).value == 0.0);
  CHECK_THROWS_AS(median_oscillation(half, 0.0), contract_violation);
  CHECK_THROWS_AS(median_oscillation(half, 1.0), contract_violation);
}

TEST_CASE("weak deviation of an indicator", "[oscillation]") {
  const std::vector<double> half{0.0, 1.0};
  CHECK(weak_deviation(half, 0.0) == 0.5);
  CHECK(weak_deviation(half, 0.5) == 0.5);
  // (1 - c)/2 against c balances at c = 1/3.
  CHECK(min_weak_deviation(half) == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(weak_deviation(half, 1.0 / 3.0) == Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("min mean deviation is attained at a median", "[oscillation]") {
  const std::vector<double> v{0.0, 0.0, 1.0, 7.0};
  CHECK(min_mean_deviation(v) == 2.0);
  CHECK(mean_oscillation(std::vector<double>{0.0, 1.0}) == 0.5);
}

TEST_CASE("oracle: weak deviation matches brute force", "[oscillation][oracle]") {
  gen::Engine e(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto v = gen::sample(e, static_cast<std::size_t>(gen::integer(e, 1, 24)));
    std::sort(v.begin(), v.end());
    const double c = gen::uniform(e, -3.5, 3.5);
    CHECK(weak_deviation(v, c) == Approx(oracle::weak_quasinorm(v, c)).epsilon(1e-14).margin(1e-15));
  }
}

TEST_CASE("oracle: inf over c of the weak quasinorm is exact", "[oscillation][oracle]") {
  gen::Engine e(22);
  for (int trial = 0; trial < 150; ++trial) {
    auto v = gen::sample(e, static_cast<std::size_t>(gen::integer(e, 1, 16)));
    std::sort(v.begin(), v.end());
    const auto dense = oracle::min_weak_dense(v, 4000);
    const double got = min_weak_deviation(v);
    CHECK(got <= dense.value + 1e-14);
    CHECK(got >= dense.value - 0.5 * dense.step - 1e-14);
  }
}

TEST_CASE("oracle: median oscillation and median set", "[oscillation][oracle]") {
  gen::Engine e(23);
  for (int trial = 0; trial < 300; ++trial) {
    auto v = gen::sample(e, static_cast<std::size_t>(gen::integer(e, 1, 20)));
    std::sort(v.begin(), v.end());
    const double lambda = gen::uniform(e, 0.02, 0.6);
    CHECK(median_oscillation(v, lambda).value == Approx(oracle::median_oscillation(v, lambda)).margin(1e-15));
    const auto [lo, hi] = oracle::median_range(v);
    CHECK(median_set(v).lo == lo);
    CHECK(median_set(v).hi == hi);
  }
}

TEST_CASE("property: omega_lambda <= weak/lambda and weak <= strong", "[oscillation][property]") {
  gen::Engine e(24);
  for (int trial = 0; trial < 500; ++trial) {
    auto v = gen::sample(e, static_cast<std::size_t>(gen::integer(e, 1, 40)));
    std::sort(v.begin(), v.end());
    const double lambda = gen::uniform(e, 0.01, 0.99);
    const double weak = min_weak_deviation(v);
    CHECK(median_oscillation(v, lambda).value <= weak / lambda * (1.0 + 1e-12) + 1e-15);
    CHECK(weak <= min_mean_deviation(v) * (1.0 + 1e-12) + 1e-15);
    CHECK(min_mean_deviation(v) <= mean_oscillation(v) * (1.0 + 1e-12) + 1e-15);
    CHECK(mean_oscillation(v) <= 2.0 * min_mean_deviation(v) * (1.0 + 1e-12) + 1e-15);
  }
}

TEST_CASE("large samples use the Lipschitz fallback and stay consistent", "[oscillation]") {
  gen::Engine e(25);
  std::vector<double> v(5000);
  for (auto& x : v) x = gen::uniform(e, 0.0, 1.0);
  std::sort(v.begin(), v.end());
  const double got = min_weak_deviation(v);
  // Uniform on [0,1] with c = 1/2: sup_t t (1 - 2t) = 1/8.
  CHECK(got <= weak_deviation(v, 0.5));
  CHECK(got == Approx(0.125).margin(0.01));
}
