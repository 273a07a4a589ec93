#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"

#include "squeezent/errors.hpp"
#include "squeezent/schur_basis.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace sqz;

namespace {

std::map<std::pair<int, int>, double> cell_map(const BlockDiagonalState& s) {
  std::map<std::pair<int, int>, double> out;
  const auto& layout = s.layout();
  for (int sec = 0; sec < layout.num_sectors(); ++sec) {
    const int two_j = layout.sector_two_j(sec);
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) out[{two_j, two_m}] = s.weight(two_j, two_m);
  }
  return out;
}

double cell_error(const BlockDiagonalState& s, const std::map<std::pair<int, int>, double>& expected) {
  double err = 0.0;
  for (const auto& [key, p] : expected) err = std::max(err, std::abs(s.weight(key.first, key.second) - p));
  return err;
}

// exp(-i theta J_y) in the |J, m> basis with ascending m, from the ladder
// operators and a Hermitian eigendecomposition.
Eigen::MatrixXcd spin_rotation(int two_j, double theta) {
  const double j = 0.5 * two_j;
  const Eigen::Index d = two_j + 1;
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double m = -j + static_cast<double>(i);
    raise(i + 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Eigen::MatrixXcd jy = (raise - raise.adjoint()) / std::complex<double>(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jy);
  Eigen::VectorXcd phase(d);
  for (Eigen::Index i = 0; i < d; ++i) phase(i) = std::exp(std::complex<double>(0.0, -theta * es.eigenvalues()(i)));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

oracle::Mat collective_rotation(int n, double theta) {
  const auto j = oracle::collective(n);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(j[1]);
  Eigen::VectorXcd phase(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phase.size(); ++i)
    phase(i) = std::exp(std::complex<double>(0.0, -theta * es.eigenvalues()(i)));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Eigen::Vector3d> random_bloch(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Eigen::Vector3d> out;
  for (int q = 0; q < n; ++q) out.push_back(Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
  return out;
}

}  // namespace

TEST_CASE("Jz product state has alpha = 1/C(N,K) on its Jz column") {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto s = jz_product_state_blocks(n, k);
      const Eigen::Index dim = Eigen::Index{1} << n;
      oracle::Mat q = oracle::Mat::Zero(dim, dim);
      for (Eigen::Index x = 0; x < dim; ++x)
        if (__builtin_popcountll(static_cast<unsigned long long>(x)) == k) q(x, x) = 1.0;
      q /= oracle::binomial(n, k);
      CHECK(cell_error(s, oracle::cells(q, n)) < 1e-13);
    }
  const auto big = jz_product_state_blocks(60, 25);
  CHECK(big.alpha(60, -10) == doctest::Approx(1.0 / oracle::binomial(60, 25)).epsilon(1e-12));
  CHECK(big.alpha(2, 0) == 0.0);
  CHECK(big.trace() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(jz_product_state_blocks(1000, 400).trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(jz_product_state_blocks(4, 5), DomainError);
}

TEST_CASE("Wigner d matches the exponentiated J_y") {
  for (int two_j : {0, 1, 2, 3, 6, 11})
    for (double theta : {0.0, 0.4, 1.3, std::numbers::pi, 2.7}) {
      const auto d = wigner_d(two_j, theta);
      const auto ref = spin_rotation(two_j, theta);
      CHECK(ref.imag().cwiseAbs().maxCoeff() < 1e-12);
      CHECK((d.d - ref.real()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Wigner d closed forms and orthogonality") {
  const double t = 0.9;
  const auto half = wigner_d(1, t).d;
  // ascending m: rows/cols (-1/2, +1/2)
  CHECK(half(0, 0) == doctest::Approx(std::cos(t / 2)));
  CHECK(half(1, 0) == doctest::Approx(-std::sin(t / 2)));
  CHECK(half(0, 1) == doctest::Approx(std::sin(t / 2)));
  const auto one = wigner_d(2, t).d;
  CHECK(one(1, 1) == doctest::Approx(std::cos(t)));
  for (int two_j : {50, 201, 400}) {
    const auto d = wigner_d(two_j, 2.2).d;
    CHECK((d.transpose() * d - Eigen::MatrixXd::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff() < 1e-11);
  }
  CHECK((wigner_d(7, 0.0).d - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rotate and twirl agrees with a dense rotation followed by dephasing") {
  for (int n = 2; n <= 5; ++n)
    for (double theta : {0.3, 1.9}) {
      const auto s = jz_product_state_blocks(n, 1);
      const auto r = collective_rotation(n, theta);
      const auto rho = oracle::from_cells(cell_map(s), n);
      CHECK(cell_error(rotate_and_twirl(s, theta), oracle::cells(r * rho * r.adjoint(), n)) < 1e-12);
    }
}

TEST_CASE("rotate and twirl preserves sector weights and trace at large N") {
  const auto s = jz_product_state_blocks(300, 120);
  const auto r = rotate_and_twirl(s, 1.1);
  CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-11));
  for (int sec = 0; sec < s.layout().num_sectors(); ++sec) {
    double a = 0.0;
    double b = 0.0;
    for (double x : s.sector_weights(sec)) a += x;
    for (double x : r.sector_weights(sec)) b += x;
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("Schur basis is complete and reproduces the oracle projectors") {
  for (int n = 1; n <= 5; ++n) {
    const auto basis = SchurBasis::build(n);
    CHECK(basis.completeness_error() < 1e-12);
    for (const auto& [key, p] : oracle::cell_projectors(n))
      CHECK((basis.projector(key.first, key.second) - p.real()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("to_dense and project_cells invert each other") {
  std::mt19937_64 rng(9);
  const int n = 5;
  const auto basis = SchurBasis::build(n);
  const auto s = jz_product_state_blocks(n, 2);
  const auto dense = basis.to_dense(s);
  CHECK((dense - oracle::from_cells(cell_map(s), n).real()).cwiseAbs().maxCoeff() < 1e-12);
  const auto back = basis.project_cells(dense.cast<std::complex<double>>());
  for (std::size_t c = 0; c < back.size(); ++c) CHECK(std::abs(back[c] - s.weights()[c]) < 1e-12);
  CHECK_THROWS_AS(basis.project_cells(Eigen::MatrixXcd::Identity(4, 4)), DomainError);
}

TEST_CASE("symmetrized product states match the dense twirl") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 5; ++n) {
    const auto basis = SchurBasis::build(n);
    for (int draw = 0; draw < 3; ++draw) {
      const auto bloch = random_bloch(n, rng);
      const auto product = ProductState::from_bloch(bloch);
      const auto s = symmetrize_product_state(product, basis);
      CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(cell_error(s, oracle::cells(oracle::product_state(bloch), n)) < 1e-12);
      const auto back = product.bloch_vectors();
      for (int q = 0; q < n; ++q) CHECK((back[static_cast<std::size_t>(q)] - bloch[static_cast<std::size_t>(q)]).norm() < 1e-12);
    }
  }
}

TEST_CASE("dense collective spin matches the Kronecker construction") {
  for (int n = 1; n <= 4; ++n) {
    const auto lib = dense_collective_spin(n);
    const auto ref = oracle::collective(n);
    for (int k = 0; k < 3; ++k) CHECK((lib[static_cast<std::size_t>(k)] - ref[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(dense_collective_spin(dense_limit() + 1), CapabilityError);
  CHECK_THROWS_AS(SchurBasis::build(dense_limit() + 1), CapabilityError);
}

TEST_CASE("Schur cache round trip and corruption") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "squeezent_test_cache.bin";
  const auto basis = SchurBasis::build(4);
  write_schur_cache(basis, path);
  const auto back = read_schur_cache(path);
  CHECK(back.num_particles() == 4);
  CHECK((back.projector(2, 0) - basis.projector(2, 0)).cwiseAbs().maxCoeff() == 0.0);

  SUBCASE("flipped payload byte") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(-4, std::ios::end);
    char c;
    f.read(&c, 1);
    c ^= 0x10;
    f.seekp(-4, std::ios::end);
    f.write(&c, 1);
    f.close();
    CHECK_THROWS_AS(read_schur_cache(path), IntegrityError);
  }
  SUBCASE("truncated file") {
    std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
    CHECK_THROWS_AS(read_schur_cache(path), IntegrityError);
  }
  SUBCASE("wrong magic") {
    std::ofstream(path, std::ios::binary) << "NOTACACHEFILE";
    CHECK_THROWS_AS(read_schur_cache(path), IntegrityError);
  }
  std::filesystem::remove(path);
}
