#include "squeezent/spin_blocks.hpp"

#include "squeezent/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sqz {

namespace {

constexpr double kFlushBelow = 1e-300;
constexpr double kTraceAccept = 1e-12;
constexpr double kTraceRenormalize = 1e-9;
constexpr double kNegativeSlack = 1e-15;
constexpr double kSupportFloor = 1e-15;

// Exact binomial in 64 bits, or nullopt-like false on overflow.
bool binomial_u64(int n, int k, std::uint64_t& out) {
  if (k < 0 || k > n) {
    out = 0;
    return true;
  }
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

void require_same_n(const BlockDiagonalState& a, const BlockDiagonalState& b) {
  if (a.num_particles() != b.num_particles())
    throw DomainError("states have different particle numbers (" +
                      std::to_string(a.num_particles()) + " vs " +
                      std::to_string(b.num_particles()) + ")");
}

}  // namespace

bool is_valid_sector(int n, int two_j) noexcept {
  return n >= 1 && two_j >= 0 && two_j <= n && (two_j - n) % 2 == 0;
}

SectorIndex::SectorIndex(int n_, int two_j_) : n(n_), two_j(two_j_) {
  if (!is_valid_sector(n, two_j))
    throw DomainError("invalid sector: N=" + std::to_string(n) + ", 2J=" + std::to_string(two_j));
}

std::uint64_t multiplicity(int n, int two_j) {
  SectorIndex sector(n, two_j);
  const int k = (n - two_j) / 2;
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  if (!binomial_u64(n, k, hi) || !binomial_u64(n, k - 1, lo))
    throw CapabilityError("multiplicity for N=" + std::to_string(n) + " exceeds 64 bits");
  return hi - lo;
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_multiplicity(int n, int two_j) {
  SectorIndex sector(n, two_j);
  // mu_J = C(N,k) (2J+1) / (N/2 + J + 1) with k = N/2 - J.
  const int k = (n - two_j) / 2;
  return log_binomial(n, k) + std::log(two_j + 1.0) - std::log(0.5 * (n + two_j) + 1.0);
}

CellLayout::CellLayout(int n) : n_(n) {
  if (n < 1) throw DomainError("particle number must be positive");
  for (int two_j = n % 2; two_j <= n; two_j += 2) {
    offsets_.push_back(num_cells_);
    num_cells_ += two_j + 1;
    const double lm = log_multiplicity(n, two_j);
    log_mu_.push_back(lm);
    std::uint64_t exact = 0;
    if (n <= 64) {
      try {
        exact = multiplicity(n, two_j);
      } catch (const CapabilityError&) {
        exact = 0;
      }
    }
    inv_mu_.push_back(exact != 0 ? 1.0 / static_cast<double>(exact) : std::exp(-lm));
  }
}

int CellLayout::cell_index(int two_j, int two_m) const {
  if (!is_valid_sector(n_, two_j) || std::abs(two_m) > two_j || (two_j - two_m) % 2 != 0)
    throw DomainError("invalid cell (2J=" + std::to_string(two_j) + ", 2Jz=" +
                      std::to_string(two_m) + ") for N=" + std::to_string(n_));
  return offset(sector_of(two_j)) + (two_m + two_j) / 2;
}

BlockDiagonalState::BlockDiagonalState(int n, std::vector<double> weights)
    : layout_(n), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != layout_.num_cells())
    throw DomainError("expected " + std::to_string(layout_.num_cells()) + " cells, got " +
                      std::to_string(weights_.size()));
  double total = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w)) throw DomainError("non-finite coefficient");
    if (w < 0.0) {
      if (w < -kNegativeSlack) throw DomainError("negative coefficient " + std::to_string(w));
      w = 0.0;
    }
    if (w < kFlushBelow) w = 0.0;
    total += w;
  }
  const double dev = std::abs(total - 1.0);
  if (dev > kTraceRenormalize)
    throw DomainError("trace " + std::to_string(total) + " is not one");
  if (dev > kTraceAccept)
    for (double& w : weights_) w /= total;
}

BlockDiagonalState BlockDiagonalState::from_weights(int n, std::vector<double> weights) {
  return BlockDiagonalState(n, std::move(weights));
}

BlockDiagonalState BlockDiagonalState::from_alpha(int n,
                                                  const std::vector<std::vector<double>>& alpha) {
  CellLayout layout(n);
  if (static_cast<int>(alpha.size()) != layout.num_sectors())
    throw DomainError("expected " + std::to_string(layout.num_sectors()) + " sectors");
  std::vector<double> w(static_cast<std::size_t>(layout.num_cells()));
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const auto& row = alpha[static_cast<std::size_t>(s)];
    if (static_cast<int>(row.size()) != layout.sector_two_j(s) + 1)
      throw DomainError("sector 2J=" + std::to_string(layout.sector_two_j(s)) +
                        " has wrong length");
    const double inv = layout.inv_mu(s);
    for (std::size_t i = 0; i < row.size(); ++i) {
      double p = 0.0;
      if (row[i] != 0.0) {
        p = inv > 0.0 ? row[i] / inv : std::exp(std::log(std::abs(row[i])) + layout.log_mu(s));
        if (row[i] < 0.0) p = -std::abs(p);
      }
      w[static_cast<std::size_t>(layout.offset(s)) + i] = p;
    }
  }
  return BlockDiagonalState(n, std::move(w));
}

BlockDiagonalState BlockDiagonalState::maximally_mixed(int n) {
  CellLayout layout(n);
  std::vector<double> w(static_cast<std::size_t>(layout.num_cells()));
  const double log_dim = n * std::log(2.0);
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const double p = std::exp(layout.log_mu(s) - log_dim);
    for (int i = 0; i <= layout.sector_two_j(s); ++i)
      w[static_cast<std::size_t>(layout.offset(s) + i)] = p;
  }
  // The closed form above is exact up to rounding; renormalize explicitly so
  // the 1e-12 trace check never trips for large N.
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return BlockDiagonalState(n, std::move(w));
}

BlockDiagonalState BlockDiagonalState::basis_cell(int n, int two_j, int two_m) {
  CellLayout layout(n);
  std::vector<double> w(static_cast<std::size_t>(layout.num_cells()), 0.0);
  w[static_cast<std::size_t>(layout.cell_index(two_j, two_m))] = 1.0;
  return BlockDiagonalState(n, std::move(w));
}

std::span<const double> BlockDiagonalState::sector_weights(int s) const {
  return std::span<const double>(weights_).subspan(
      static_cast<std::size_t>(layout_.offset(s)),
      static_cast<std::size_t>(layout_.sector_two_j(s) + 1));
}

double BlockDiagonalState::weight(int two_j, int two_m) const {
  return weights_[static_cast<std::size_t>(layout_.cell_index(two_j, two_m))];
}

double BlockDiagonalState::alpha(int two_j, int two_m) const {
  const double p = weight(two_j, two_m);
  const int s = layout_.sector_of(two_j);
  const double inv = layout_.inv_mu(s);
  if (p == 0.0) return 0.0;
  const double a = inv > 0.0 ? p * inv : std::exp(std::log(p) - layout_.log_mu(s));
  return a < kFlushBelow ? 0.0 : a;
}

std::vector<std::vector<double>> BlockDiagonalState::alpha_table() const {
  std::vector<std::vector<double>> out;
  for (int s = 0; s < layout_.num_sectors(); ++s) {
    const int two_j = layout_.sector_two_j(s);
    std::vector<double> row;
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) row.push_back(alpha(two_j, two_m));
    out.push_back(std::move(row));
  }
  return out;
}

double BlockDiagonalState::trace() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

void MomentSummary::validate() const {
  if (n < 1) throw DomainError("moment summary without particles");
  const double tol = 1e-9 * std::max(1.0, second.cwiseAbs().maxCoeff());
  if ((second - second.transpose()).cwiseAbs().maxCoeff() > tol)
    throw DomainError("second-moment matrix is not symmetric");
  for (int k = 0; k < 3; ++k)
    if (second(k, k) < -tol) throw DomainError("negative second moment");
  const double jmax = 0.5 * n;
  if (second.trace() > jmax * (jmax + 1.0) + tol)
    throw DomainError("<J^2> exceeds (N/2)(N/2+1)");
}

MomentSummary moments_from_blocks(const BlockDiagonalState& state) {
  const CellLayout& layout = state.layout();
  double jz = 0.0;
  double jz2 = 0.0;
  double casimir = 0.0;
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    const double j = 0.5 * two_j;
    double sector_total = 0.0;
    auto w = state.sector_weights(s);
    for (int i = 0; i <= two_j; ++i) {
      const double m = 0.5 * (2 * i - two_j);
      const double p = w[static_cast<std::size_t>(i)];
      sector_total += p;
      jz += p * m;
      jz2 += p * m * m;
    }
    casimir += sector_total * j * (j + 1.0);
  }
  MomentSummary out;
  out.n = state.num_particles();
  out.mean = Eigen::Vector3d(0.0, 0.0, jz);
  const double transverse = 0.5 * (casimir - jz2);
  out.second.diagonal() << transverse, transverse, jz2;
  return out;
}

BlockDiagonalState mix(std::span<const BlockDiagonalState> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size())
    throw DomainError("mix needs one weight per state");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixing weights do not sum to one");
  const int n = states.front().num_particles();
  std::vector<double> w(states.front().weights().size(), 0.0);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].num_particles() != n) throw DomainError("mix of states with different N");
    if (weights[k] < 0.0) throw DomainError("negative mixing weight");
    auto src = states[k].weights();
    for (std::size_t c = 0; c < w.size(); ++c) w[c] += weights[k] * src[c];
  }
  return BlockDiagonalState::from_weights(n, std::move(w));
}

double two_norm_distance(const BlockDiagonalState& a, const BlockDiagonalState& b) {
  require_same_n(a, b);
  const CellLayout& layout = a.layout();
  double total = 0.0;
  for (int s = 0; s < layout.num_sectors(); ++s) {
    auto wa = a.sector_weights(s);
    auto wb = b.sector_weights(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < wa.size(); ++i) {
      const double d = wa[i] - wb[i];
      acc += d * d;
    }
    // sum over the mu_J copies of (alpha_a - alpha_b)^2 = (p_a - p_b)^2 / mu_J
    total += acc * layout.inv_mu(s);
  }
  return total;
}

double bsa_mixing_parameter(const BlockDiagonalState& rho, const BlockDiagonalState& sigma) {
  require_same_n(rho, sigma);
  auto r = rho.weights();
  auto s = sigma.weights();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (s[c] < kSupportFloor) continue;
    min_ratio = std::min(min_ratio, r[c] / s[c]);
  }
  if (!std::isfinite(min_ratio)) throw DomainError("sigma has no support");
  return std::clamp(1.0 - min_ratio, 0.0, 1.0);
}

}  // namespace sqz
