#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"

#include "squeezent/errors.hpp"
#include "squeezent/sep_approx.hpp"
#include "squeezent/ssi_witness.hpp"
#include "squeezent/thermal_model.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

using namespace sqz;

namespace {

MomentSummary summary(const oracle::Moments& m, int n) {
  MomentSummary s;
  s.n = n;
  s.mean = m.mean;
  s.second = m.second;
  return s;
}

std::vector<Eigen::Vector3d> random_bloch(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Eigen::Vector3d> out;
  for (int q = 0; q < n; ++q) out.push_back(Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
  return out;
}

// Dense facet operator for subset S in the frame whose columns are the axes.
oracle::Mat facet_operator(int n, const Eigen::Matrix3d& frame, const Eigen::Vector3d& mean, unsigned subset) {
  const auto j = oracle::collective(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  const oracle::Mat id = oracle::Mat::Identity(dim, dim);
  oracle::Mat op = -0.5 * n * id;
  for (int k = 0; k < 3; ++k) {
    oracle::Mat axis = frame(0, k) * j[0] + frame(1, k) * j[1] + frame(2, k) * j[2];
    if (subset & (1U << k)) {
      op += -(axis * axis) / (n - 1.0) + (0.25 * n * n / (n - 1.0)) * id;
    } else {
      const double mk = frame.col(k).dot(mean);
      const oracle::Mat shifted = axis - mk * id;
      op += shifted * shifted;
    }
  }
  return op;
}

double dense_min_eigenvalue(const oracle::Mat& op) {
  return Eigen::SelfAdjointEigenSolver<oracle::Mat>(op, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

TEST_CASE("Gamma and X for the maximally mixed state") {
  const int n = 6;
  const auto m = moments_from_blocks(BlockDiagonalState::maximally_mixed(n));
  CHECK((gamma_matrix(m) - 1.5 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  // X = N/4 + N/(4(N-1)) - N^2/(4(N-1)) = 0 on the diagonal
  CHECK(x_matrix(m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("singlet and Dicke states reach the extremal value") {
  for (int n : {2, 4, 8, 20, 200}) {
    const auto singlet = ssi_parameter(moments_from_blocks(BlockDiagonalState::basis_cell(n, 0, 0)));
    CHECK(singlet.k == 0);
    CHECK(singlet.xi == doctest::Approx(-0.5 * n));
    CHECK(singlet.normalization == doctest::Approx(closed_form_normalization(n, 0)));
    CHECK(std::abs(singlet.lower_bound - 1.0) < 1e-10);
    const auto dicke = ssi_parameter(moments_from_blocks(BlockDiagonalState::basis_cell(n, n, 0)));
    CHECK(dicke.k == 2);
    CHECK(dicke.normalization == doctest::Approx(closed_form_normalization(n, 2)));
    CHECK(std::abs(dicke.lower_bound - 1.0) < 1e-10);
  }
}

TEST_CASE("closed-form normalizations") {
  const int n = 10;
  CHECK(closed_form_normalization(n, 0) == doctest::Approx(5.0));
  CHECK(closed_form_normalization(n, 1) == doctest::Approx(10.0 * 8.0 / 36.0));
  CHECK(closed_form_normalization(n, 2) == doctest::Approx(100.0 / 36.0));
  CHECK(closed_form_normalization(n, 3) == doctest::Approx(10.0 * 12.0 / 18.0));
  CHECK_THROWS_AS(closed_form_normalization(1, 0), DomainError);
}

TEST_CASE("normalization is minus the bottom of the dense facet operator") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n = 2; n <= 6; ++n)
    for (int draw = 0; draw < 3; ++draw) {
      // Gibbs states with and without magnetization, plus a tilted product state.
      const XXZParams p{u(rng), u(rng), u(rng), n};
      const double t = 0.1 + std::abs(u(rng));
      const oracle::Mat gibbs = oracle::gibbs(oracle::hamiltonian(n, p.g, p.gz, p.h), t);
      const oracle::Mat tilted = 0.5 * gibbs + 0.5 * oracle::product_state(random_bloch(n, rng));
      for (const oracle::Mat& rho : {gibbs, tilted}) {
        const auto dm = oracle::moments(rho, n);
        const auto r = ssi_parameter(summary(dm, n));
        const unsigned eigen_subset = [&] {
          unsigned s = 0;
          for (int k = 0; k < 3; ++k)
            if (r.x_eigenvalues(k) > zero_tolerance(n)) s |= 1U << k;
          return s;
        }();
        const oracle::Mat op = facet_operator(n, r.frame, dm.mean, eigen_subset);
        CHECK((rho * op).trace().real() == doctest::Approx(r.xi).epsilon(1e-9));
        CHECK(r.normalization == doctest::Approx(-dense_min_eigenvalue(op)).epsilon(1e-9));
        const oracle::Mat best = facet_operator(n, r.frame, dm.mean, r.facet_subset);
        CHECK((rho * best).trace().real() == doctest::Approx(r.facet_xi).epsilon(1e-9));
        CHECK(r.facet_normalization == doctest::Approx(-dense_min_eigenvalue(best)).epsilon(1e-9));
        CHECK(r.lower_bound >= 0.0);
        CHECK(r.lower_bound <= 1.0);
        if (r.k < 3 && r.xi < 0.0) CHECK(r.lower_bound >= -r.xi / r.normalization - 1e-12);
      }
    }
}

TEST_CASE("quadratic spin minimum matches dense diagonalization") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 6; ++n)
    for (int draw = 0; draw < 4; ++draw) {
      const double c1 = u(rng);
      const double c2 = u(rng);
      Eigen::Vector3d c(c1, c1, c2);
      if (draw % 2 == 1) c = Eigen::Vector3d(c2, c1, c1);
      const Eigen::Vector3d b(u(rng), u(rng), u(rng));
      const auto j = oracle::collective(n);
      oracle::Mat op = 0.3 * oracle::Mat::Identity(j[0].rows(), j[0].cols());
      for (int k = 0; k < 3; ++k) op += c(k) * j[k] * j[k] - 2.0 * b(k) * j[k];
      CHECK(min_quadratic_spin_eigenvalue(n, c, b, 0.3) == doctest::Approx(dense_min_eigenvalue(op)).epsilon(1e-10));
    }
  CHECK_THROWS_AS(min_quadratic_spin_eigenvalue(4, Eigen::Vector3d(1, 2, 3), Eigen::Vector3d::Zero(), 0.0), DomainError);
}

TEST_CASE("above the exact limit the minimum is a lower bound") {
  const int n = 80;
  const Eigen::Vector3d c(1.0, 1.0, -1.0 / (n - 1.0));
  const Eigen::Vector3d b(3.0, 0.0, 1.0);
  const double bound = min_quadratic_spin_eigenvalue(n, c, b, 0.0);
  // Compare with the exact tridiagonal minimum at N = 64 scaled problem: the
  // bound must not exceed the value of any state, e.g. every |J, m> diagonal entry.
  double smallest_diag = 1e300;
  for (int two_j = 0; two_j <= n; two_j += 2)
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      const double jj = 0.25 * two_j * (two_j + 2);
      const double m = 0.5 * two_m;
      smallest_diag = std::min(smallest_diag, (jj - m * m) + c(2) * m * m - 2.0 * b(2) * m);
    }
  CHECK(bound <= smallest_diag);
}

TEST_CASE("separable states satisfy every facet") {
  std::mt19937_64 rng(12);
  for (int n = 2; n <= 6; ++n)
    for (int draw = 0; draw < 20; ++draw) {
      const oracle::Mat rho = oracle::product_state(random_bloch(n, rng));
      const auto m = summary(oracle::moments(rho, n), n);
      CHECK(evaluate_inequality_set(m).min_value() >= -1e-10);
      CHECK(ssi_parameter(m).lower_bound == 0.0);
    }
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (int n : {7, 10, 200})
    for (int draw = 0; draw < 20; ++draw) {
      const auto s = derive_blocks(n, SimpleAnsatz{static_cast<int>(rng() % (n + 1)), angle(rng)});
      const auto m = moments_from_blocks(s);
      CHECK(evaluate_inequality_set(m).min_value() >= -1e-10);
      CHECK(ssi_parameter(m).lower_bound == 0.0);
    }
}

TEST_CASE("facet families in the eigenframe") {
  const auto m = moments_from_blocks(BlockDiagonalState::basis_cell(6, 0, 0));
  const auto f = evaluate_inequality_set(m);
  CHECK(f.total_variance == doctest::Approx(-3.0));
  CHECK(f.casimir == doctest::Approx(6.0 * 8.0 / 4.0));
  CHECK(f.min_value() == doctest::Approx(-3.0));
}

TEST_CASE("XXX ground state at N = 8 has xi = -N/2") {
  const auto s = gibbs_blocks(XXZParams{1.0, 1.0, 0.0, 8}, 0.0).state;
  const auto r = ssi_parameter(moments_from_blocks(s));
  CHECK(r.xi == doctest::Approx(-4.0));
  CHECK(r.lower_bound == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fewer than two particles is rejected") {
  MomentSummary m;
  m.n = 1;
  m.second = 0.25 * Eigen::Matrix3d::Identity();
  CHECK_THROWS_AS(ssi_parameter(m), DomainError);
  MomentSummary bad;
  bad.n = 4;
  bad.second = 100.0 * Eigen::Matrix3d::Identity();
  CHECK_THROWS_AS(ssi_parameter(bad), DomainError);
}
