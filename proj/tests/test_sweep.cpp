#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "squeezent/errors.hpp"
#include "squeezent/sweep.hpp"

#include <cmath>

using namespace sqz;

TEST_CASE("temperature grids") {
  const auto lin = temperature_grid(0.1, 1.0, 10, GridScale::linear);
  CHECK(lin.size() == 10);
  CHECK(lin.front() == 0.1);
  CHECK(lin.back() == 1.0);
  CHECK(lin[1] == doctest::Approx(0.2));
  const auto lg = temperature_grid(0.01, 1.0, 3, GridScale::log);
  CHECK(lg[1] == doctest::Approx(0.1));
  CHECK(temperature_grid(0.5, 0.5, 1, GridScale::linear).size() == 1);
  CHECK_THROWS_AS(temperature_grid(0.0, 1.0, 3, GridScale::log), DomainError);
  CHECK_THROWS_AS(temperature_grid(1.0, 0.5, 3, GridScale::linear), DomainError);
  CHECK_THROWS_AS(temperature_grid(0.1, 0.5, 0, GridScale::linear), DomainError);
}

TEST_CASE("two-qubit XXX row") {
  // Z = 1 + 3 e^{-1/T}; xi = 2<H> - 1 with <H> the triplet weight.
  const double t = 0.5;
  const auto row = lower_row(XXZParams{1.0, 1.0, 0.0, 2}, t);
  const double triplet = 3.0 * std::exp(-1.0 / t) / (1.0 + 3.0 * std::exp(-1.0 / t));
  CHECK(row.log_z == doctest::Approx(std::log1p(3.0 * std::exp(-1.0 / t))));
  CHECK(row.xi == doctest::Approx(2.0 * triplet - 1.0));
  CHECK(row.lower_bound == doctest::Approx(1.0 - 2.0 * triplet));
  CHECK(row.mean_jz == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("parallel sweep is ordered and identical to serial") {
  const XXZParams p{1.0, 0.0, 0.1, 40};
  const auto temps = temperature_grid(0.05, 1.5, 23, GridScale::linear);
  const auto serial = lower_sweep(p, temps, 1);
  const auto parallel = lower_sweep(p, temps, 4);
  REQUIRE(serial.size() == temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    CHECK(parallel[i].temperature == temps[i]);
    CHECK(parallel[i].lower_bound == serial[i].lower_bound);
    CHECK(parallel[i].xi == serial[i].xi);
  }
}

TEST_CASE("sweep errors propagate") {
  const std::vector<double> temps{0.5, -1.0, 0.7};
  CHECK_THROWS_AS(lower_sweep(XXZParams{1.0, 1.0, 0.0, 4}, temps, 2), DomainError);
  CHECK_THROWS_AS(lower_sweep(XXZParams{1.0, 1.0, 0.0, 1}, temps, 1), DomainError);
}

TEST_CASE("threshold brackets are certified") {
  for (const XXZParams& p : {XXZParams{1.0, 1.0, 0.0, 2}, XXZParams{1.0, 1.0, 0.0, 50}, XXZParams{1.0, 0.0, 0.0, 200},
                             XXZParams{-1.0, 0.0, 1.05, 8}}) {
    const auto r = entanglement_threshold(p, 1e-3, 0.0, 1e-7);
    REQUIRE(r.found);
    CHECK(r.right - r.left <= 1e-7);
    CHECK(lower_row(p, r.left).lower_bound > 0.0);
    CHECK(lower_row(p, r.right).lower_bound == 0.0);
  }
}

TEST_CASE("two-qubit threshold is 1/ln 3") {
  const auto r = entanglement_threshold(XXZParams{1.0, 1.0, 0.0, 2});
  CHECK(std::abs(r.temperature - 1.0 / std::log(3.0)) < 1e-6);
}

TEST_CASE("no entanglement anywhere") {
  // Ferromagnet in a strong field: the ground state is polarized.
  const auto r = entanglement_threshold(XXZParams{-1.0, -1.0, 5.0, 6});
  CHECK_FALSE(r.found);
}
