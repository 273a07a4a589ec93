#include "squeezent/sep_approx.hpp"

#include "squeezent/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>

namespace sqz {

namespace {

using cd = std::complex<double>;

constexpr double kPruneBelow = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t seed, int outer, int restart) {
  return splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(outer) << 20) + static_cast<std::uint64_t>(restart)));
}

double max_cell_difference(std::span<const double> a, std::span<const double> b) {
  double err = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) err = std::max(err, std::abs(a[c] - b[c]));
  return err;
}

std::vector<BlockDiagonalState> member_blocks(const std::vector<EnsembleMember>& members) {
  std::vector<BlockDiagonalState> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.blocks);
  return out;
}

BlockDiagonalState ensemble_state(const std::vector<EnsembleMember>& members) {
  const auto blocks = member_blocks(members);
  std::vector<double> w;
  w.reserve(members.size());
  for (const auto& m : members) w.push_back(m.weight);
  return mix(blocks, w);
}

// Refits the weights in place and drops members below kPruneBelow.
void refit_and_prune(const BlockDiagonalState& target, std::vector<EnsembleMember>& members) {
  const auto fit = refit_weights(target, member_blocks(members));
  std::vector<EnsembleMember> kept;
  double total = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (fit.weights[i] < kPruneBelow) continue;
    kept.push_back(members[i]);
    kept.back().weight = fit.weights[i];
    total += fit.weights[i];
  }
  for (auto& m : kept) m.weight /= total;
  members = std::move(kept);
}

// Applies a residual, using its real and Jz-block structure when present.
class ResidualApply {
 public:
  explicit ResidualApply(const Eigen::MatrixXcd& r) : dense_(r) {
    const Eigen::Index dim = r.rows();
    const double scale = r.cwiseAbs().maxCoeff() + std::numeric_limits<double>::min();
    if (r.imag().cwiseAbs().maxCoeff() > 1e-15 * scale) return;
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    std::vector<int> weight(static_cast<std::size_t>(dim));
    for (Eigen::Index x = 0; x < dim; ++x) weight[static_cast<std::size_t>(x)] = std::popcount(static_cast<std::uint64_t>(x));
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index i = 0; i < dim; ++i)
        if (weight[static_cast<std::size_t>(i)] != weight[static_cast<std::size_t>(j)] && std::abs(r(i, j)) > 1e-14 * scale) return;
    index_.assign(static_cast<std::size_t>(n + 1), {});
    for (Eigen::Index x = 0; x < dim; ++x) index_[static_cast<std::size_t>(weight[static_cast<std::size_t>(x)])].push_back(x);
    for (const auto& idx : index_) {
      const auto d = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd b(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) b(i, j) = r(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]).real();
      blocks_.push_back(std::move(b));
    }
  }

  Eigen::VectorXcd operator()(const Eigen::VectorXcd& v) const {
    if (blocks_.empty()) return dense_ * v;
    Eigen::VectorXcd out(v.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const auto& idx = index_[k];
      const auto d = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd sub(d, 2);
      for (Eigen::Index i = 0; i < d; ++i) {
        sub(i, 0) = v(idx[static_cast<std::size_t>(i)]).real();
        sub(i, 1) = v(idx[static_cast<std::size_t>(i)]).imag();
      }
      const Eigen::MatrixXd y = blocks_[k] * sub;
      for (Eigen::Index i = 0; i < d; ++i) out(idx[static_cast<std::size_t>(i)]) = cd(y(i, 0), y(i, 1));
    }
    return out;
  }

 private:
  const Eigen::MatrixXcd& dense_;
  std::vector<std::vector<Eigen::Index>> index_;
  std::vector<Eigen::MatrixXd> blocks_;
};

}  // namespace

BlockDiagonalState derive_blocks(int n, const Descriptor& descriptor, const SchurBasis* basis) {
  if (const auto* simple = std::get_if<SimpleAnsatz>(&descriptor))
    return rotate_and_twirl(jz_product_state_blocks(n, simple->k_up), simple->theta);
  const auto& general = std::get<GeneralProduct>(descriptor);
  if (static_cast<int>(general.bloch.size()) != n) throw DomainError("descriptor has the wrong number of qubits");
  if (basis == nullptr || basis->num_particles() != n)
    throw CapabilityError("general product members need a Schur basis for N=" + std::to_string(n));
  return symmetrize_product_state(ProductState::from_bloch(general.bloch), *basis);
}

std::vector<int> default_k_set(int n) {
  std::vector<int> out;
  if (n <= 32) {
    for (int k = 0; k <= n; ++k) out.push_back(k);
    return out;
  }
  const int stride = (n + 31) / 32;
  for (int k = 0; k <= n; k += stride) out.push_back(k);
  out.push_back(n / 2);
  out.push_back(n);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> default_theta_grid(int points) {
  if (points < 1) throw DomainError("theta grid needs at least one point");
  std::vector<double> out;
  if (points == 1) return {0.0};
  for (int i = 0; i < points; ++i) out.push_back(std::numbers::pi * i / (points - 1));
  return out;
}

std::vector<EnsembleMember> simple_ansatz_library(int n, std::span<const int> k_set,
                                                  std::span<const double> theta_grid) {
  if (k_set.empty() || theta_grid.empty()) throw DomainError("simple ansatz grids must be nonempty");
  std::vector<EnsembleMember> out;
  std::vector<std::pair<int, double>> seen;
  for (int k : k_set) {
    if (k < 0 || k > n) throw DomainError("up-spin count out of range");
    const auto base = jz_product_state_blocks(n, k);
    for (double theta : theta_grid) {
      if (!std::isfinite(theta)) throw DomainError("non-finite rotation angle");
      const double canonical = std::abs(std::remainder(theta, 2.0 * std::numbers::pi));
      const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const auto& p) {
        return p.first == k && std::abs(p.second - canonical) <= 1e-12;
      });
      if (duplicate) continue;
      seen.emplace_back(k, canonical);
      out.push_back(EnsembleMember{1.0, rotate_and_twirl(base, canonical), SimpleAnsatz{k, canonical}});
    }
  }
  return out;
}

RefitResult refit_weights(const BlockDiagonalState& target, std::span<const BlockDiagonalState> members) {
  if (members.empty()) throw DomainError("refit needs at least one member");
  const int n = target.num_particles();
  for (const auto& m : members)
    if (m.num_particles() != n) throw DomainError("refit members have different N");
  const CellLayout& layout = target.layout();
  const auto cells = static_cast<Eigen::Index>(layout.num_cells());
  const auto count = static_cast<Eigen::Index>(members.size());

  // Rows scaled by 1/sqrt(mu_J) so that ||A w - b||^2 = tr(rho - sigma)^2.
  Eigen::MatrixXd a(cells, count);
  Eigen::VectorXd b(cells);
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const double scale = std::sqrt(layout.inv_mu(s));
    const int begin = layout.offset(s);
    const int end = begin + layout.sector_two_j(s) + 1;
    for (int c = begin; c < end; ++c) {
      b(c) = scale * target.weights()[static_cast<std::size_t>(c)];
      for (Eigen::Index i = 0; i < count; ++i) a(c, i) = scale * members[static_cast<std::size_t>(i)].weights()[static_cast<std::size_t>(c)];
    }
  }

  RefitResult out;
  out.weights.assign(members.size(), 0.0);

  bool identical = true;
  for (Eigen::Index i = 1; i < count && identical; ++i)
    identical = max_cell_difference(members[0].weights(), members[static_cast<std::size_t>(i)].weights()) == 0.0;
  if (identical) {
    out.weights[0] = 1.0;
    out.degenerate = count > 1;
    out.distance = (a.col(0) - b).squaredNorm();
    return out;
  }

  Eigen::Index start = 0;
  double start_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < count; ++i) {
    const double d = (a.col(i) - b).squaredNorm();
    if (d < start_dist) {
      start_dist = d;
      start = i;
    }
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(count);
  w(start) = 1.0;
  std::vector<Eigen::Index> active{start};
  std::vector<char> in_active(static_cast<std::size_t>(count), 0);
  in_active[static_cast<std::size_t>(start)] = 1;

  // Equality-constrained least squares on the active set.
  auto solve_active = [&](const std::vector<Eigen::Index>& set) {
    const auto p = static_cast<Eigen::Index>(set.size());
    Eigen::MatrixXd ap(cells, p);
    for (Eigen::Index i = 0; i < p; ++i) ap.col(i) = a.col(set[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(p + 1, p + 1);
    kkt.topLeftCorner(p, p) = ap.transpose() * ap;
    kkt.block(0, p, p, 1).setOnes();
    kkt.block(p, 0, 1, p).setOnes();
    Eigen::VectorXd rhs(p + 1);
    rhs.head(p) = ap.transpose() * b;
    rhs(p) = 1.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    return Eigen::VectorXd(sol.head(p));
  };

  const int max_iter = 10 * static_cast<int>(count) + 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd g = a.transpose() * (a * w - b);
    const double nu = g.dot(w);
    const double scale = g.cwiseAbs().maxCoeff() + std::abs(nu) + std::numeric_limits<double>::min();
    Eigen::Index enter = -1;
    double most = -1e-13 * scale;
    for (Eigen::Index i = 0; i < count; ++i) {
      if (in_active[static_cast<std::size_t>(i)]) continue;
      if (g(i) - nu < most) {
        most = g(i) - nu;
        enter = i;
      }
    }
    if (enter < 0) break;
    active.push_back(enter);
    in_active[static_cast<std::size_t>(enter)] = 1;

    bool stalled = false;
    for (int inner = 0; inner <= static_cast<int>(count); ++inner) {
      const Eigen::VectorXd z = solve_active(active);
      bool feasible = true;
      for (Eigen::Index i = 0; i < z.size(); ++i) feasible = feasible && z(i) > 0.0;
      if (feasible) {
        for (std::size_t i = 0; i < active.size(); ++i) w(active[i]) = z(static_cast<Eigen::Index>(i));
        break;
      }
      double step = 1.0;
      std::size_t blocking = 0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const double zi = z(static_cast<Eigen::Index>(i));
        const double wi = w(active[i]);
        if (zi <= 0.0 && wi / (wi - zi) <= step) {
          step = wi / (wi - zi);
          blocking = i;
        }
      }
      for (std::size_t i = 0; i < active.size(); ++i)
        w(active[i]) += step * (z(static_cast<Eigen::Index>(i)) - w(active[i]));
      w(active[blocking]) = 0.0;
      std::vector<Eigen::Index> kept;
      for (auto i : active) {
        if (w(i) > 0.0) {
          kept.push_back(i);
        } else {
          w(i) = 0.0;
          in_active[static_cast<std::size_t>(i)] = 0;
        }
      }
      // The entering member was dropped at once: no descent direction left.
      if (step == 0.0 && active[blocking] == enter) stalled = true;
      active = std::move(kept);
      if (stalled || active.empty()) break;
    }
    if (active.empty()) {
      w.setZero();
      w(start) = 1.0;
      active = {start};
      in_active.assign(static_cast<std::size_t>(count), 0);
      in_active[static_cast<std::size_t>(start)] = 1;
      break;
    }
    if (stalled) break;
  }

  for (Eigen::Index i = 0; i < count; ++i) w(i) = std::max(w(i), 0.0);
  w /= w.sum();
  const Eigen::VectorXd r = a * w - b;
  const Eigen::VectorXd g = a.transpose() * r;
  const double nu = g.dot(w);
  double kkt = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (w(i) > 0.0)
      kkt = std::max(kkt, std::abs(g(i) - nu));
    else
      kkt = std::max(kkt, nu - g(i));
  }
  out.kkt_residual = kkt;
  out.distance = r.squaredNorm();
  for (Eigen::Index i = 0; i < count; ++i) out.weights[static_cast<std::size_t>(i)] = w(i);
  return out;
}

SeesawResult seesaw_best_product(const Eigen::MatrixXcd& residual, std::uint64_t seed, int max_sweeps) {
  const Eigen::Index dim = residual.rows();
  if (residual.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0)
    throw DomainError("residual must be a square 2^N matrix");
  const int n = static_cast<int>(std::countr_zero(static_cast<std::uint64_t>(dim)));
  if (n > dense_limit()) throw CapabilityError("see-saw beyond the dense limit");
  const double herm = (residual - residual.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * (1.0 + residual.cwiseAbs().maxCoeff())) throw DomainError("residual is not Hermitian");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SeesawResult out;
  for (int q = 0; q < n; ++q) {
    Eigen::Vector2cd v(cd(normal(rng), normal(rng)), cd(normal(rng), normal(rng)));
    out.state.qubits.push_back(v.normalized());
  }

  // Amplitudes of the product with qubit q pinned to `up`/`down`.
  auto pinned = [&](int q, bool up) {
    Eigen::VectorXcd u(dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
      const bool bit = ((x >> q) & 1) != 0;
      if (bit != up) {
        u(x) = 0.0;
        continue;
      }
      cd amp(1.0, 0.0);
      for (int p = 0; p < n; ++p) {
        if (p == q) continue;
        const auto& s = out.state.qubits[static_cast<std::size_t>(p)];
        amp *= ((x >> p) & 1) ? s(0) : s(1);
      }
      u(x) = amp;
    }
    return u;
  };

  const ResidualApply apply(residual);
  const Eigen::VectorXcd psi0 = out.state.amplitudes();
  out.overlap = psi0.dot(apply(psi0)).real();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = out.overlap;
    for (int q = 0; q < n; ++q) {
      const Eigen::VectorXcd up = pinned(q, true);
      const Eigen::VectorXcd down = pinned(q, false);
      const Eigen::VectorXcd r_up = apply(up);
      const Eigen::VectorXcd r_down = apply(down);
      Eigen::Matrix2cd m;
      m(0, 0) = up.dot(r_up);
      m(0, 1) = up.dot(r_down);
      m(1, 0) = down.dot(r_up);
      m(1, 1) = down.dot(r_down);
      m = 0.5 * (m + m.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m);
      const double top = solver.eigenvalues()(1);
      // Keep the current spinor unless the update strictly helps, so the
      // history is monotone even under rounding.
      if (top > out.overlap) {
        out.state.qubits[static_cast<std::size_t>(q)] = solver.eigenvectors().col(1);
        out.overlap = top;
      }
      out.history.push_back(out.overlap);
    }
    out.sweeps = sweep + 1;
    if (out.overlap - before < 1e-10) break;
  }
  return out;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::ball_reached:
      return "ball_reached";
    case Termination::max_iterations:
      return "max_iterations";
  }
  return "unknown";
}

UpperBoundReport upper_bound_simple(const BlockDiagonalState& target, std::span<const int> k_set,
                                    std::span<const double> theta_grid) {
  auto members = simple_ansatz_library(target.num_particles(), k_set, theta_grid);
  refit_and_prune(target, members);
  auto sigma = ensemble_state(members);
  const double t = bsa_mixing_parameter(target, sigma);
  const double dist = two_norm_distance(target, sigma);
  return UpperBoundReport{t, dist, std::move(sigma), std::move(members), 1, Termination::converged, 0, "simple", false};
}

UpperBoundReport upper_bound_full(const BlockDiagonalState& target, const SchurBasis& basis,
                                  const FullOptions& options) {
  const int n = basis.num_particles();
  if (target.num_particles() != n) throw DomainError("target and Schur basis have different N");
  if (options.restarts < 1) throw DomainError("need at least one see-saw restart");

  std::vector<EnsembleMember> members = options.warm_start;
  if (members.empty()) {
    // 1/2^N as the K-mixture of computational product states.
    for (int k = 0; k <= n; ++k) {
      const double w = std::exp(log_binomial(n, k) - n * std::numbers::ln2);
      members.push_back(EnsembleMember{w, jz_product_state_blocks(n, k), SimpleAnsatz{k, 0.0}});
    }
  }
  for (const auto& m : members)
    if (m.blocks.num_particles() != n) throw DomainError("warm-start ensemble has the wrong N");
  refit_and_prune(target, members);
  auto sigma = ensemble_state(members);

  const double radius = options.ball_radius > 0.0 ? options.ball_radius : default_ball_radius(n);
  double best_t = bsa_mixing_parameter(target, sigma);
  auto best_sigma = sigma;
  auto best_members = members;
  Termination termination = Termination::max_iterations;
  bool ball = false;
  int iterations = 0;

  for (int outer = 0; outer <= options.max_outer; ++outer) {
    const double dist = two_norm_distance(target, sigma);
    if (dist < options.tolerance) {
      termination = Termination::converged;
      break;
    }
    if (options.ball_check && separable_ball_check(target, sigma, radius)) {
      termination = Termination::ball_reached;
      ball = true;
      break;
    }
    if (outer == options.max_outer) break;

    std::vector<double> diff(target.weights().size());
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = target.weights()[c] - sigma.weights()[c];
    const Eigen::MatrixXcd residual = basis.dense_from_cells(diff).cast<cd>();

    std::vector<std::future<SeesawResult>> jobs;
    for (int r = 0; r < options.restarts; ++r) {
      const std::uint64_t s = restart_seed(options.seed, outer, r);
      jobs.push_back(std::async(std::launch::async, [&residual, s, &options] {
        return seesaw_best_product(residual, s, options.max_sweeps);
      }));
    }
    std::optional<SeesawResult> best;
    for (auto& job : jobs) {
      auto res = job.get();
      if (!best || res.overlap > best->overlap) best = std::move(res);
    }

    // Frank-Wolfe gap of tr(rho - sigma)^2 toward the best product state.
    double sigma_dot_residual = 0.0;
    const CellLayout& layout = target.layout();
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const int begin = layout.offset(s);
      for (int c = begin; c <= begin + layout.sector_two_j(s); ++c)
        sigma_dot_residual += sigma.weights()[static_cast<std::size_t>(c)] * diff[static_cast<std::size_t>(c)] * layout.inv_mu(s);
    }
    if (best->overlap <= 1e-12 || best->overlap - sigma_dot_residual <= options.tolerance) {
      termination = Termination::converged;
      break;
    }

    auto blocks = symmetrize_product_state(best->state, basis);
    members.push_back(EnsembleMember{0.0, std::move(blocks), GeneralProduct{best->state.bloch_vectors()}});
    refit_and_prune(target, members);
    sigma = ensemble_state(members);
    ++iterations;
    const double t = bsa_mixing_parameter(target, sigma);
    if (t < best_t) {
      best_t = t;
      best_sigma = sigma;
      best_members = members;
    }
  }

  const double dist = two_norm_distance(target, best_sigma);
  return UpperBoundReport{best_t,     dist,        std::move(best_sigma), std::move(best_members), iterations,
                          termination, options.seed, "full",                ball};
}

double default_ball_radius(int n) {
  if (n < 1) throw DomainError("particle number must be positive");
  // 1/sqrt((4^N - 1) 2^N)
  const double log4n_minus_1 = n * 2.0 * std::numbers::ln2 + std::log1p(-std::exp(-n * 2.0 * std::numbers::ln2));
  return std::exp(-0.5 * (log4n_minus_1 + n * std::numbers::ln2));
}

bool separable_ball_check(const BlockDiagonalState& target, const BlockDiagonalState& sigma, double radius) {
  if (target.num_particles() != sigma.num_particles()) throw DomainError("ball check on states with different N");
  const int n = target.num_particles();
  if (!(radius > 0.0)) radius = default_ball_radius(n);
  const double t = bsa_mixing_parameter(target, sigma);
  if (t == 0.0) return true;
  const CellLayout& layout = target.layout();
  const auto rho = target.weights();
  const auto sig = sigma.weights();
  constexpr int kSteps = 64;
  for (int step = 0; step <= kSteps; ++step) {
    const double tp = t + (1.0 - t) * step / kSteps;
    double dist2 = 0.0;
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const double mixed = std::exp(layout.log_mu(s) - n * std::numbers::ln2);
      const int begin = layout.offset(s);
      for (int c = begin; c <= begin + layout.sector_two_j(s); ++c) {
        const auto i = static_cast<std::size_t>(c);
        const double nu = (rho[i] - (1.0 - tp) * sig[i]) / tp;
        dist2 += (nu - mixed) * (nu - mixed) * layout.inv_mu(s);
      }
    }
    if (std::sqrt(dist2) <= radius) return true;
  }
  return false;
}

SandwichReport sandwich_report(const BlockDiagonalState& target, const SSIResult& lower,
                               const UpperBoundReport& upper) {
  if (upper.sigma.num_particles() != target.num_particles())
    throw DomainError("sandwich of bounds for different N");
  if (lower.lower_bound > upper.t_bsa + 1e-9)
    throw IntegrityError("lower bound " + std::to_string(lower.lower_bound) + " exceeds upper bound " +
                         std::to_string(upper.t_bsa));
  return SandwichReport{lower.lower_bound, upper.t_bsa, upper.t_bsa - lower.lower_bound};
}

CertificateCheck verify_certificate(const BlockDiagonalState& target, const UpperBoundReport& report,
                                    const SchurBasis* basis) {
  const int n = target.num_particles();
  CertificateCheck out;
  std::vector<BlockDiagonalState> blocks;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& m : report.ensemble) {
    auto derived = derive_blocks(n, m.descriptor, basis);
    out.member_error = std::max(out.member_error, max_cell_difference(derived.weights(), m.blocks.weights()));
    blocks.push_back(std::move(derived));
    weights.push_back(m.weight);
    total += m.weight;
  }
  out.weight_sum_error = std::abs(total - 1.0);
  for (double& w : weights) w /= total;
  const auto sigma = mix(blocks, weights);
  out.sigma_error = max_cell_difference(sigma.weights(), report.sigma.weights());
  out.t_error = std::abs(bsa_mixing_parameter(target, sigma) - report.t_bsa);
  out.min_remainder = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < sigma.weights().size(); ++c)
    out.min_remainder = std::min(out.min_remainder, target.weights()[c] - (1.0 - report.t_bsa) * sigma.weights()[c]);
  return out;
}

}  // namespace sqz
