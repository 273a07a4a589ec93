#include "squeezent/serialization.hpp"

#include "squeezent/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sqz {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing JSON key \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad JSON value for \"") + key + "\": " + e.what());
  }
}

Termination termination_from_string(const std::string& s) {
  if (s == "converged") return Termination::converged;
  if (s == "ball_reached") return Termination::ball_reached;
  if (s == "max_iterations") return Termination::max_iterations;
  throw DomainError("unknown termination \"" + s + "\"");
}

}  // namespace

json state_to_json(const BlockDiagonalState& state) {
  const CellLayout& layout = state.layout();
  json sectors = json::array();
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    std::vector<double> alpha;
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) alpha.push_back(state.alpha(two_j, two_m));
    const auto w = state.sector_weights(s);
    sectors.push_back({{"twoJ", two_j}, {"alpha", alpha}, {"weight", std::vector<double>(w.begin(), w.end())}});
  }
  return {{"N", state.num_particles()}, {"sectors", sectors}};
}

BlockDiagonalState state_from_json(const json& j) {
  const int n = required<int>(j, "N");
  if (n < 1) throw DomainError("state JSON has N < 1");
  const CellLayout layout(n);
  const auto& sectors = j.at("sectors");
  if (!sectors.is_array()) throw DomainError("\"sectors\" must be an array");
  bool all_weights = true;
  for (const auto& s : sectors) all_weights = all_weights && s.contains("weight");

  if (all_weights) {
    std::vector<double> w(static_cast<std::size_t>(layout.num_cells()), 0.0);
    for (const auto& s : sectors) {
      const int two_j = required<int>(s, "twoJ");
      if (!is_valid_sector(n, two_j)) throw DomainError("invalid sector 2J=" + std::to_string(two_j));
      const auto values = required<std::vector<double>>(s, "weight");
      if (static_cast<int>(values.size()) != two_j + 1) throw DomainError("sector has the wrong length");
      std::copy(values.begin(), values.end(), w.begin() + layout.offset(layout.sector_of(two_j)));
    }
    return BlockDiagonalState::from_weights(n, std::move(w));
  }

  std::vector<std::vector<double>> alpha(static_cast<std::size_t>(layout.num_sectors()));
  for (int s = 0; s < layout.num_sectors(); ++s)
    alpha[static_cast<std::size_t>(s)].assign(static_cast<std::size_t>(layout.sector_two_j(s) + 1), 0.0);
  for (const auto& s : sectors) {
    const int two_j = required<int>(s, "twoJ");
    if (!is_valid_sector(n, two_j)) throw DomainError("invalid sector 2J=" + std::to_string(two_j));
    const auto values = required<std::vector<double>>(s, "alpha");
    if (static_cast<int>(values.size()) != two_j + 1) throw DomainError("sector has the wrong length");
    alpha[static_cast<std::size_t>(layout.sector_of(two_j))] = values;
  }
  return BlockDiagonalState::from_alpha(n, alpha);
}

json params_to_json(const XXZParams& params) {
  return {{"N", params.n}, {"g", params.g}, {"gz", params.gz}, {"h", params.h}};
}

XXZParams params_from_json(const json& j) {
  XXZParams p{required<double>(j, "g"), required<double>(j, "gz"), required<double>(j, "h"), required<int>(j, "N")};
  p.validate();
  return p;
}

json facets_to_json(const FacetValues& f) {
  return {{"total_variance", f.total_variance}, {"pair", f.pair}, {"single", f.single}, {"casimir", f.casimir}};
}

json ssi_to_json(const SSIResult& r) {
  return {{"K", r.k},
          {"xi", r.xi},
          {"B_K", r.normalization},
          {"closed_form_B_K", r.closed_form_normalization},
          {"facet_subset", r.facet_subset},
          {"facet_K", r.facet_k},
          {"facet_xi", r.facet_xi},
          {"facet_B", r.facet_normalization},
          {"lower_bound", r.lower_bound},
          {"x_eigenvalues", {r.x_eigenvalues(0), r.x_eigenvalues(1), r.x_eigenvalues(2)}},
          {"facets", facets_to_json(r.facets)}};
}

json descriptor_to_json(const Descriptor& d) {
  if (const auto* s = std::get_if<SimpleAnsatz>(&d)) return {{"simple", {{"K", s->k_up}, {"theta", s->theta}}}};
  json bloch = json::array();
  for (const auto& v : std::get<GeneralProduct>(d).bloch) bloch.push_back({v(0), v(1), v(2)});
  return {{"product", {{"bloch", bloch}}}};
}

Descriptor descriptor_from_json(const json& j) {
  if (j.contains("simple")) {
    const auto& s = j.at("simple");
    return SimpleAnsatz{required<int>(s, "K"), required<double>(s, "theta")};
  }
  if (j.contains("product")) {
    GeneralProduct g;
    for (const auto& v : j.at("product").at("bloch")) {
      const auto xyz = v.get<std::vector<double>>();
      if (xyz.size() != 3) throw DomainError("Bloch vector needs three components");
      g.bloch.emplace_back(xyz[0], xyz[1], xyz[2]);
    }
    return g;
  }
  throw DomainError("ensemble member has neither \"simple\" nor \"product\" descriptor");
}

json report_to_json(const UpperBoundReport& r) {
  json ensemble = json::array();
  for (const auto& m : r.ensemble) {
    json item = descriptor_to_json(m.descriptor);
    item["weight"] = m.weight;
    ensemble.push_back(item);
  }
  return {{"schema", kSchema},
          {"ansatz", r.ansatz},
          {"t_bsa", r.t_bsa},
          {"residual_two_norm", r.residual_two_norm},
          {"iterations", r.iterations},
          {"termination", to_string(r.termination)},
          {"seed", r.seed},
          {"ball_certified", r.ball_certified},
          {"sigma", state_to_json(r.sigma)},
          {"ensemble", ensemble}};
}

UpperBoundReport report_from_json(const json& j, const SchurBasis* basis) {
  auto sigma = state_from_json(j.at("sigma"));
  const int n = sigma.num_particles();
  std::vector<EnsembleMember> members;
  for (const auto& item : j.at("ensemble")) {
    auto d = descriptor_from_json(item);
    const double w = required<double>(item, "weight");
    if (!(w >= 0.0)) throw DomainError("negative ensemble weight");
    members.push_back(EnsembleMember{w, derive_blocks(n, d, basis), std::move(d)});
  }
  if (members.empty()) throw DomainError("certificate has an empty ensemble");
  std::vector<BlockDiagonalState> blocks;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& m : members) total += m.weight;
  for (const auto& m : members) {
    blocks.push_back(m.blocks);
    weights.push_back(m.weight / total);
  }
  const auto rebuilt = mix(blocks, weights);
  double err = 0.0;
  for (std::size_t c = 0; c < rebuilt.weights().size(); ++c)
    err = std::max(err, std::abs(rebuilt.weights()[c] - sigma.weights()[c]));
  if (err > 1e-10) throw IntegrityError("certificate sigma does not match its ensemble (error " + std::to_string(err) + ")");
  return UpperBoundReport{required<double>(j, "t_bsa"),
                          required<double>(j, "residual_two_norm"),
                          std::move(sigma),
                          std::move(members),
                          required<int>(j, "iterations"),
                          termination_from_string(required<std::string>(j, "termination")),
                          required<std::uint64_t>(j, "seed"),
                          required<std::string>(j, "ansatz"),
                          j.value("ball_certified", false)};
}

}  // namespace sqz
