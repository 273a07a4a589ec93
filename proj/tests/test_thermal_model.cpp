#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"

#include "squeezent/errors.hpp"
#include "squeezent/thermal_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace sqz;

namespace {

double cell_error(const BlockDiagonalState& s, const std::map<std::pair<int, int>, double>& expected) {
  double err = 0.0;
  for (const auto& [key, p] : expected) err = std::max(err, std::abs(s.weight(key.first, key.second) - p));
  return err;
}

XXZParams random_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return XXZParams{u(rng), u(rng), u(rng), n};
}

}  // namespace

TEST_CASE("cell energies reproduce the dense spectrum with multiplicities") {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 6; ++n) {
    const auto p = random_params(rng, n);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::hamiltonian(n, p.g, p.gz, p.h));
    std::vector<double> blocks;
    for (int two_j = n % 2; two_j <= n; two_j += 2)
      for (int two_m = -two_j; two_m <= two_j; two_m += 2)
        for (int copy = 0; copy < static_cast<int>(oracle::multiplicity(n, two_j) + 0.5); ++copy)
          blocks.push_back(sector_energy(p, two_j, two_m));
    std::sort(blocks.begin(), blocks.end());
    REQUIRE(blocks.size() == static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t i = 0; i < blocks.size(); ++i)
      CHECK(std::abs(blocks[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))) < 1e-12);
  }
}

TEST_CASE("dense Hamiltonian matches the Kronecker construction") {
  const XXZParams p{0.7, -0.3, 0.2, 4};
  CHECK((dense_hamiltonian(p) - oracle::hamiltonian(4, 0.7, -0.3, 0.2).real()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Gibbs blocks agree with the dense Gibbs state") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> logt(std::log(0.05), std::log(5.0));
  for (int n = 2; n <= 6; ++n)
    for (int draw = 0; draw < 4; ++draw) {
      const auto p = random_params(rng, n);
      const double t = std::exp(logt(rng));
      const oracle::Mat h = oracle::hamiltonian(n, p.g, p.gz, p.h);
      const auto point = gibbs_blocks(p, t);
      CHECK(cell_error(point.state, oracle::cells(oracle::gibbs(h, t), n)) < 1e-12);
      // log Z from the dense spectrum
      Eigen::SelfAdjointEigenSolver<oracle::Mat> es(h);
      double z = 0.0;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) z += std::exp(-es.eigenvalues()(i) / t);
      CHECK(point.log_z == doctest::Approx(std::log(z)).epsilon(1e-12));
      CHECK(partition_function(p, t) == doctest::Approx(std::log(z)).epsilon(1e-12));
      CHECK(mean_energy(point.state, p) ==
            doctest::Approx((oracle::gibbs(h, t) * h).trace().real()).epsilon(1e-10));
    }
}

TEST_CASE("two-qubit XXX partition function") {
  const XXZParams p{1.0, 1.0, 0.0, 2};
  for (double t : {0.1, 0.5, 0.91, 3.0}) CHECK(partition_function(p, t) == doctest::Approx(std::log(1.0 + 3.0 * std::exp(-1.0 / t))));
}

TEST_CASE("T = 0 limit is uniform over the ground space") {
  SUBCASE("dense comparison") {
    for (int n = 2; n <= 6; ++n)
      for (const XXZParams& p : {XXZParams{1.0, 1.0, 0.0, n}, XXZParams{1.0, 0.0, -1.0 / n, n},
                                 XXZParams{-1.0, 0.0, 1.05, n}, XXZParams{1.0, 0.0, 0.3, n}}) {
        const auto point = gibbs_blocks(p, 0.0);
        CHECK(std::isnan(point.log_z));
        CHECK(cell_error(point.state, oracle::cells(oracle::ground(oracle::hamiltonian(n, p.g, p.gz, p.h)), n)) <
              1e-10);
      }
  }
  SUBCASE("XXX ground state is the J = 0 sector") {
    const auto s = gibbs_blocks(XXZParams{1.0, 1.0, 0.0, 8}, 0.0).state;
    CHECK(s.weight(0, 0) == 1.0);
  }
  SUBCASE("supersymmetric point spreads over every |J, J>") {
    const int n = 8;
    const auto s = gibbs_blocks(XXZParams{1.0, 0.0, -1.0 / n, n}, 0.0).state;
    double total = 0.0;
    for (int two_j = 0; two_j <= n; two_j += 2) {
      CHECK(s.weight(two_j, two_j) > 0.0);
      total += s.weight(two_j, two_j);
    }
    CHECK(total == doctest::Approx(1.0));
  }
  SUBCASE("large N does not overflow") {
    const auto s = gibbs_blocks(XXZParams{1.0, 0.0, -1.0 / 2000, 2000}, 0.0).state;
    CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("large N Gibbs states stay normalized") {
  for (double t : {0.01, 0.5, 10.0}) {
    const auto point = gibbs_blocks(XXZParams{1.0, 0.0, 0.0, 2000}, t);
    CHECK(std::isfinite(point.log_z));
    CHECK(point.state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("high temperature approaches the maximally mixed state") {
  const auto s = gibbs_blocks(XXZParams{1.0, 0.5, 0.2, 6}, 1e8).state;
  const auto mm = BlockDiagonalState::maximally_mixed(6);
  for (std::size_t c = 0; c < s.weights().size(); ++c) CHECK(std::abs(s.weights()[c] - mm.weights()[c]) < 1e-7);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(gibbs_blocks(XXZParams{1.0, 1.0, 0.0, 1}, 1.0), DomainError);
  CHECK_THROWS_AS(gibbs_blocks(XXZParams{1.0, 1.0, 0.0, 4}, -1.0), DomainError);
  CHECK_THROWS_AS(gibbs_blocks(XXZParams{NAN, 1.0, 0.0, 4}, 1.0), DomainError);
  CHECK_THROWS_AS(partition_function(XXZParams{1.0, 1.0, 0.0, 4}, 0.0), DomainError);
  CHECK_THROWS_AS(sector_energy(XXZParams{1.0, 1.0, 0.0, 4}, 2, 4), DomainError);
  CHECK_THROWS_AS(dense_hamiltonian(XXZParams{1.0, 1.0, 0.0, 40}), CapabilityError);
}

TEST_CASE("large-N closed forms") {
  CHECK(asymptotic_xxx_bound(1.0, 0.0) == 1.0);
  CHECK(asymptotic_xxx_bound(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(asymptotic_xxx_bound(2.0, 2.0) == doctest::Approx(0.0));
  CHECK(asymptotic_xxx_bound(1.0, 0.5) == doctest::Approx(0.25));
  CHECK(asymptotic_xx_bound(0.5) == doctest::Approx(0.0));
  CHECK(asymptotic_xx_bound(0.25) == doctest::Approx(1.0 / 3.0));
  CHECK(asymptotic_xx_bound(3.0) == 0.0);
}
