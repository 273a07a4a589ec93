#include "squeezent/schur_basis.hpp"

#include "squeezent/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <system_error>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace sqz {

namespace {

using cd = std::complex<double>;

// Eigen-decomposition of the real tridiagonal J_x in the spin-J |m> basis.
// J_y is its image under a pi/2 rotation about z, so exp(-i theta J_y) follows
// from it without factorials.
struct JxEigen {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;  // exact half-integers m
};

std::shared_ptr<const JxEigen> jx_eigen(int two_j) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const JxEigen>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(two_j); it != cache.end()) return it->second;
  }
  const int dim = two_j + 1;
  const double j = 0.5 * two_j;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd sub(std::max(dim - 1, 0));
  for (int i = 0; i + 1 < dim; ++i) {
    const double m = -j + i;
    sub(i) = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  auto out = std::make_shared<JxEigen>();
  if (dim == 1) {
    out->vectors = Eigen::MatrixXd::Identity(1, 1);
    out->values = Eigen::VectorXd::Zero(1);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    out->vectors = solver.eigenvectors();
    out->values = solver.eigenvalues();
    for (int k = 0; k < dim; ++k) out->values(k) = 0.5 * std::round(2.0 * out->values(k));
  }
  std::lock_guard lock(mutex);
  return cache.emplace(two_j, std::move(out)).first->second;
}

// Column m' (index col) of d^J(theta).
Eigen::VectorXd wigner_column(const JxEigen& eig, int two_j, double theta, int col) {
  const int dim = two_j + 1;
  Eigen::VectorXcd coeff(dim);
  for (int k = 0; k < dim; ++k)
    coeff(k) = eig.vectors(col, k) * std::polar(1.0, -theta * eig.values(k));
  const Eigen::VectorXcd u = eig.vectors * coeff;
  Eigen::VectorXd out(dim);
  for (int row = 0; row < dim; ++row) {
    // D = exp(-i pi/2 J_z) contributes exp(-i pi (m - m') / 2) = (-i)^(row - col)
    const int shift = ((row - col) % 4 + 4) % 4;
    static constexpr std::array<cd, 4> kPhase = {cd(1, 0), cd(0, -1), cd(-1, 0), cd(0, 1)};
    out(row) = (kPhase[static_cast<std::size_t>(shift)] * u(row)).real();
  }
  return out;
}

}  // namespace

int dense_limit() {
  static const int limit = [] {
    if (const char* env = std::getenv("SQUEEZENT_DENSE_LIMIT")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    return kDefaultDenseLimit;
  }();
  return limit;
}

BlockDiagonalState jz_product_state_blocks(int n, int k_up) {
  if (n < 1 || k_up < 0 || k_up > n)
    throw DomainError("up-spin count " + std::to_string(k_up) + " out of range for N=" +
                      std::to_string(n));
  CellLayout layout(n);
  const int two_mz = 2 * k_up - n;
  const double log_c = log_binomial(n, k_up);
  double exact_c = 0.0;
  if (n <= 60) {
    // C(N,K) = mu summed telescopically; exact as a double for N <= 60
    exact_c = std::round(std::exp(log_c));
  }
  std::vector<double> w(static_cast<std::size_t>(layout.num_cells()), 0.0);
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    if (two_j < std::abs(two_mz)) continue;
    const double p = exact_c > 0.0 ? (1.0 / layout.inv_mu(s)) / exact_c
                                   : std::exp(layout.log_mu(s) - log_c);
    w[static_cast<std::size_t>(layout.cell_index(two_j, two_mz))] = p;
  }
  return BlockDiagonalState::from_weights(n, std::move(w));
}

WignerD wigner_d(int two_j, double theta) {
  if (two_j < 0) throw DomainError("2J must be nonnegative");
  auto eig = jx_eigen(two_j);
  WignerD out{two_j, theta, Eigen::MatrixXd(two_j + 1, two_j + 1)};
  for (int col = 0; col <= two_j; ++col) out.d.col(col) = wigner_column(*eig, two_j, theta, col);
  return out;
}

BlockDiagonalState rotate_and_twirl(const BlockDiagonalState& state, double theta) {
  const CellLayout& layout = state.layout();
  std::vector<double> w(state.weights().begin(), state.weights().end());
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    auto src = state.sector_weights(s);
    std::vector<double> dst(src.size(), 0.0);
    std::shared_ptr<const JxEigen> eig;
    for (int col = 0; col <= two_j; ++col) {
      const double p = src[static_cast<std::size_t>(col)];
      if (p == 0.0) continue;
      if (!eig) eig = jx_eigen(two_j);
      const Eigen::VectorXd d = wigner_column(*eig, two_j, theta, col);
      for (int row = 0; row <= two_j; ++row) dst[static_cast<std::size_t>(row)] += d(row) * d(row) * p;
    }
    std::copy(dst.begin(), dst.end(), w.begin() + layout.offset(s));
  }
  return BlockDiagonalState::from_weights(state.num_particles(), std::move(w));
}

Eigen::VectorXcd ProductState::amplitudes() const {
  const int n = num_particles();
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    cd amp(1.0, 0.0);
    for (int q = 0; q < n; ++q) amp *= ((x >> q) & 1U) ? qubits[static_cast<std::size_t>(q)](0)
                                                     : qubits[static_cast<std::size_t>(q)](1);
    psi(static_cast<Eigen::Index>(x)) = amp;
  }
  return psi;
}

std::vector<Eigen::Vector3d> ProductState::bloch_vectors() const {
  std::vector<Eigen::Vector3d> out;
  out.reserve(qubits.size());
  for (const auto& q : qubits) {
    const cd c = std::conj(q(0)) * q(1);
    out.emplace_back(2.0 * c.real(), 2.0 * c.imag(), std::norm(q(0)) - std::norm(q(1)));
  }
  return out;
}

ProductState ProductState::from_bloch(const std::vector<Eigen::Vector3d>& bloch) {
  ProductState out;
  for (const auto& v : bloch) {
    const double r = v.norm();
    if (!(r > 0.0)) throw DomainError("Bloch vector must be nonzero");
    const Eigen::Vector3d u = v / r;
    const double polar = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double azimuth = std::atan2(u.y(), u.x());
    out.qubits.emplace_back(cd(std::cos(0.5 * polar), 0.0), std::polar(std::sin(0.5 * polar), azimuth));
  }
  return out;
}

ProductState ProductState::computational(int n, int k_up) {
  if (k_up < 0 || k_up > n) throw DomainError("up-spin count out of range");
  ProductState out;
  for (int q = 0; q < n; ++q)
    out.qubits.emplace_back(q < k_up ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0));
  return out;
}

SchurBasis SchurBasis::build(int n) {
  if (n < 1) throw DomainError("particle number must be positive");
  if (n > dense_limit())
    throw CapabilityError("Schur basis requested for N=" + std::to_string(n) +
                          " beyond the dense limit " + std::to_string(dense_limit()));
  SchurBasis basis(n);
  const CellLayout& layout = basis.layout_;
  const std::uint32_t dim = 1U << n;
  basis.indices_.assign(static_cast<std::size_t>(n + 1), {});
  for (std::uint32_t x = 0; x < dim; ++x)
    basis.indices_[static_cast<std::size_t>(std::popcount(x))].push_back(static_cast<int>(x));

  basis.blocks_.resize(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const auto& idx = basis.indices_[static_cast<std::size_t>(k)];
    const int d = static_cast<int>(idx.size());
    const double m = k - 0.5 * n;
    std::map<int, int> position;
    for (int i = 0; i < d; ++i) position[idx[static_cast<std::size_t>(i)]] = i;

    // J^2 = Jz^2 + N/2 + sum_{i != j} s+_i s-_j; the last term swaps an up and
    // a down spin with unit amplitude.
    Eigen::MatrixXd casimir = Eigen::MatrixXd::Identity(d, d) * (m * m + 0.5 * n);
    for (int i = 0; i < d; ++i) {
      const auto x = static_cast<std::uint32_t>(idx[static_cast<std::size_t>(i)]);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (((x >> a) & 1U) == 1U && ((x >> b) & 1U) == 0U) {
            const std::uint32_t y = x ^ (1U << a) ^ (1U << b);
            casimir(position[static_cast<int>(y)], i) += 1.0;
          }
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(casimir);
    std::vector<std::vector<int>> columns(static_cast<std::size_t>(layout.num_sectors()));
    for (int c = 0; c < d; ++c) {
      const double lambda = solver.eigenvalues()(c);
      const int two_j = static_cast<int>(std::lround(std::sqrt(1.0 + 4.0 * lambda) - 1.0));
      const double j = 0.5 * two_j;
      if (!is_valid_sector(n, two_j) || std::abs(lambda - j * (j + 1.0)) > 1e-8)
        throw IntegrityError("J^2 eigenvalue " + std::to_string(lambda) + " is not J(J+1)");
      columns[static_cast<std::size_t>(layout.sector_of(two_j))].push_back(c);
    }
    auto& blocks = basis.blocks_[static_cast<std::size_t>(k)];
    blocks.resize(static_cast<std::size_t>(layout.num_sectors()));
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const auto& cols = columns[static_cast<std::size_t>(s)];
      Eigen::MatrixXd v(d, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(cols[c]);
      const int two_j = layout.sector_two_j(s);
      const bool inside = std::abs(2 * k - n) <= two_j;
      const auto expected = inside ? multiplicity(n, two_j) : 0;
      if (static_cast<std::uint64_t>(cols.size()) != expected)
        throw IntegrityError("sector 2J=" + std::to_string(two_j) + " has wrong multiplicity");
      blocks[static_cast<std::size_t>(s)] = std::move(v);
    }
  }
  return basis;
}

const Eigen::MatrixXd& SchurBasis::vectors(int two_j, int k_up) const {
  if (!is_valid_sector(n_, two_j) || k_up < 0 || k_up > n_) throw DomainError("invalid Schur block");
  return blocks_[static_cast<std::size_t>(k_up)][static_cast<std::size_t>(layout_.sector_of(two_j))];
}

Eigen::MatrixXd SchurBasis::projector(int two_j, int two_m) const {
  layout_.cell_index(two_j, two_m);
  const int k = (two_m + n_) / 2;
  const auto& idx = indices_[static_cast<std::size_t>(k)];
  const Eigen::MatrixXd& v = vectors(two_j, k);
  const Eigen::MatrixXd block = v * v.transpose();
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      out(idx[a], idx[b]) = block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  return out;
}

Eigen::MatrixXd SchurBasis::dense_from_cells(std::span<const double> cells) const {
  if (static_cast<int>(cells.size()) != layout_.num_cells()) throw DomainError("cell count mismatch");
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k <= n_; ++k) {
    const auto& idx = indices_[static_cast<std::size_t>(k)];
    const int two_m = 2 * k - n_;
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
    for (int s = 0; s < layout_.num_sectors(); ++s) {
      const int two_j = layout_.sector_two_j(s);
      if (std::abs(two_m) > two_j) continue;
      const double coeff = cells[static_cast<std::size_t>(layout_.cell_index(two_j, two_m))] * layout_.inv_mu(s);
      if (coeff == 0.0) continue;
      const Eigen::MatrixXd& v = blocks_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
      block.noalias() += coeff * v * v.transpose();
    }
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) out(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]) = block(a, b);
  }
  return out;
}

Eigen::MatrixXd SchurBasis::to_dense(const BlockDiagonalState& state) const {
  if (state.num_particles() != n_) throw DomainError("state and basis have different N");
  return dense_from_cells(state.weights());
}

std::vector<double> SchurBasis::project_cells(const Eigen::MatrixXcd& rho) const {
  const Eigen::Index dim = Eigen::Index{1} << n_;
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("operator has wrong dimension");
  std::vector<double> out(static_cast<std::size_t>(layout_.num_cells()), 0.0);
  for (int k = 0; k <= n_; ++k) {
    const auto& idx = indices_[static_cast<std::size_t>(k)];
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd block(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) block(a, b) = rho(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    const int two_m = 2 * k - n_;
    for (int s = 0; s < layout_.num_sectors(); ++s) {
      const int two_j = layout_.sector_two_j(s);
      if (std::abs(two_m) > two_j) continue;
      const Eigen::MatrixXcd v = blocks_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)].cast<cd>();
      out[static_cast<std::size_t>(layout_.cell_index(two_j, two_m))] = (v.adjoint() * block * v).trace().real();
    }
  }
  return out;
}

double SchurBasis::completeness_error() const {
  double err = 0.0;
  if (static_cast<int>(indices_.size()) != n_ + 1 || static_cast<int>(blocks_.size()) != n_ + 1)
    return std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n_; ++k) {
    const auto d = static_cast<Eigen::Index>(indices_[static_cast<std::size_t>(k)].size());
    Eigen::MatrixXd all(d, 0);
    const int two_m = 2 * k - n_;
    for (int s = 0; s < layout_.num_sectors(); ++s) {
      const Eigen::MatrixXd& v = blocks_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
      const int two_j = layout_.sector_two_j(s);
      const std::uint64_t expected = std::abs(two_m) <= two_j ? multiplicity(n_, two_j) : 0;
      if (v.rows() != d || static_cast<std::uint64_t>(v.cols()) != expected)
        return std::numeric_limits<double>::infinity();
      Eigen::MatrixXd grown(d, all.cols() + v.cols());
      grown << all, v;
      all = std::move(grown);
    }
    if (all.cols() != d) return std::numeric_limits<double>::infinity();
    err = std::max(err, (all * all.transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
    err = std::max(err, (all.transpose() * all - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  if (!std::isfinite(err)) return std::numeric_limits<double>::infinity();
  return err;
}

BlockDiagonalState symmetrize_product_state(const ProductState& product, const SchurBasis& basis) {
  const int n = basis.num_particles();
  if (product.num_particles() != n) throw DomainError("product state and basis have different N");
  for (const auto& q : product.qubits)
    if (std::abs(q.squaredNorm() - 1.0) > 1e-10) throw DomainError("single-qubit state not normalized");
  const Eigen::VectorXcd psi = product.amplitudes();
  const CellLayout& layout = basis.layout();
  std::vector<double> w(static_cast<std::size_t>(layout.num_cells()), 0.0);
  for (int k = 0; k <= n; ++k) {
    const auto& idx = basis.weight_indices(k);
    Eigen::VectorXd re(static_cast<Eigen::Index>(idx.size()));
    Eigen::VectorXd im(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      re(static_cast<Eigen::Index>(a)) = psi(idx[a]).real();
      im(static_cast<Eigen::Index>(a)) = psi(idx[a]).imag();
    }
    const int two_m = 2 * k - n;
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const int two_j = layout.sector_two_j(s);
      if (std::abs(two_m) > two_j) continue;
      const Eigen::MatrixXd& v = basis.vectors(two_j, k);
      w[static_cast<std::size_t>(layout.cell_index(two_j, two_m))] =
          (v.transpose() * re).squaredNorm() + (v.transpose() * im).squaredNorm();
    }
  }
  return BlockDiagonalState::from_weights(n, std::move(w));
}

namespace {
constexpr char kCacheMagic[8] = {'S', 'Q', 'Z', 'S', 'C', 'H', 'U', 'R'};
constexpr std::uint32_t kCacheVersion = 1;
}  // namespace

void write_schur_cache(const SchurBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::filesystem::filesystem_error("cannot open Schur cache for writing", path,
                                            std::make_error_code(std::errc::io_error));
  out.write(kCacheMagic, sizeof kCacheMagic);
  const std::uint32_t version = kCacheVersion;
  const std::int32_t n = basis.n_;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const auto& per_k : basis.blocks_) {
    for (const auto& v : per_k) {
      const std::int32_t rows = static_cast<std::int32_t>(v.rows());
      const std::int32_t cols = static_cast<std::int32_t>(v.cols());
      out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
      out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
      out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()));
    }
  }
  if (!out) throw DomainError("failed writing " + path.string());
}

SchurBasis read_schur_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::filesystem::filesystem_error("cannot open Schur cache", path,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
  char magic[8];
  std::uint32_t version = 0;
  std::int32_t n = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || !std::equal(magic, magic + 8, kCacheMagic)) throw IntegrityError("not a Schur cache file");
  if (version != kCacheVersion) throw IntegrityError("unsupported Schur cache version " + std::to_string(version));
  if (n < 1 || n > dense_limit()) throw IntegrityError("Schur cache has unsupported N");
  SchurBasis basis(n);
  const std::uint32_t dim = 1U << n;
  basis.indices_.assign(static_cast<std::size_t>(n + 1), {});
  for (std::uint32_t x = 0; x < dim; ++x)
    basis.indices_[static_cast<std::size_t>(std::popcount(x))].push_back(static_cast<int>(x));
  basis.blocks_.resize(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    auto& per_k = basis.blocks_[static_cast<std::size_t>(k)];
    per_k.resize(static_cast<std::size_t>(basis.layout_.num_sectors()));
    for (auto& v : per_k) {
      std::int32_t rows = 0;
      std::int32_t cols = 0;
      in.read(reinterpret_cast<char*>(&rows), sizeof rows);
      in.read(reinterpret_cast<char*>(&cols), sizeof cols);
      if (!in || rows < 0 || cols < 0 || rows > static_cast<std::int32_t>(dim) || cols > rows)
        throw IntegrityError("truncated or corrupted Schur cache");
      v.resize(rows, cols);
      in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()));
      if (!in) throw IntegrityError("truncated Schur cache");
    }
  }
  const double err = basis.completeness_error();
  if (!(err <= 1e-10))
    throw IntegrityError("Schur cache fails completeness check (error " + std::to_string(err) + ")");
  return basis;
}

std::array<Eigen::MatrixXcd, 3> dense_collective_spin(int n) {
  if (n < 1) throw DomainError("particle number must be positive");
  if (n > dense_limit()) throw CapabilityError("dense collective spin beyond the dense limit");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const auto ux = static_cast<std::uint32_t>(x);
    jz(x, x) = std::popcount(ux) - 0.5 * n;
    for (int q = 0; q < n; ++q)
      if (((ux >> q) & 1U) == 0U) raise(static_cast<Eigen::Index>(ux | (1U << q)), x) = 1.0;
  }
  const Eigen::MatrixXcd lower = raise.adjoint();
  const Eigen::MatrixXcd jx = 0.5 * (raise + lower);
  const Eigen::MatrixXcd jy = cd(0.0, -0.5) * (raise - lower);
  return {jx, jy, jz};
}

}  // namespace sqz
