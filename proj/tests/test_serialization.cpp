#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "squeezent/errors.hpp"
#include "squeezent/serialization.hpp"

#include <random>

using namespace sqz;
using nlohmann::json;

TEST_CASE("state JSON round trip is bit-exact") {
  for (const auto& s : {gibbs_blocks(XXZParams{0.3, -1.2, 0.7, 7}, 0.37).state,
                        gibbs_blocks(XXZParams{1.0, 0.0, 0.0, 200}, 0.21).state, BlockDiagonalState::maximally_mixed(5)}) {
    const auto text = state_to_json(s).dump();
    const auto back = state_from_json(json::parse(text));
    CHECK(back == s);
  }
}

TEST_CASE("state JSON layout") {
  const auto j = state_to_json(BlockDiagonalState::basis_cell(2, 0, 0));
  CHECK(j.at("N") == 2);
  CHECK(j.at("sectors").size() == 2);
  CHECK(j.at("sectors")[0].at("twoJ") == 0);
  CHECK(j.at("sectors")[0].at("alpha")[0] == 1.0);
  CHECK(j.at("sectors")[1].at("alpha").size() == 3);
}

TEST_CASE("alpha-only JSON is accepted") {
  const json j = {{"N", 2}, {"sectors", {{{"twoJ", 2}, {"alpha", {0.25, 0.5, 0.25}}}}}};
  const auto s = state_from_json(j);
  CHECK(s.weight(2, 0) == 0.5);
  CHECK(s.weight(0, 0) == 0.0);
}

TEST_CASE("malformed state JSON") {
  CHECK_THROWS_AS(state_from_json(json{{"sectors", json::array()}}), DomainError);
  CHECK_THROWS_AS(state_from_json(json{{"N", 2}, {"sectors", {{{"twoJ", 1}, {"alpha", {1.0, 0.0}}}}}}), DomainError);
  CHECK_THROWS_AS(state_from_json(json{{"N", 2}, {"sectors", {{{"twoJ", 2}, {"alpha", {1.0}}}}}}), DomainError);
  CHECK_THROWS_AS(state_from_json(json{{"N", 2}, {"sectors", {{{"twoJ", 2}, {"alpha", {0.5, 0.5, 0.5}}}}}}),
                  DomainError);
}

TEST_CASE("SSI and params JSON") {
  const auto r = ssi_parameter(moments_from_blocks(BlockDiagonalState::basis_cell(4, 0, 0)));
  const auto j = ssi_to_json(r);
  CHECK(j.at("K") == 0);
  CHECK(j.at("lower_bound").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("facets").at("pair").size() == 3);
  const XXZParams p{1.0, 0.5, -0.2, 9};
  const auto back = params_from_json(params_to_json(p));
  CHECK(back.g == p.g);
  CHECK(back.gz == p.gz);
  CHECK(back.h == p.h);
  CHECK(back.n == p.n);
}

TEST_CASE("certificate round trip re-derives members") {
  const auto target = gibbs_blocks(XXZParams{1.0, 1.0, 0.0, 4}, 0.6).state;
  SUBCASE("simple ansatz") {
    const auto r = upper_bound_simple(target, default_k_set(4), default_theta_grid(12));
    const auto back = report_from_json(json::parse(report_to_json(r).dump()));
    CHECK(back.t_bsa == r.t_bsa);
    CHECK(back.sigma == r.sigma);
    CHECK(back.ensemble.size() == r.ensemble.size());
    CHECK(back.ansatz == "simple");
    CHECK(verify_certificate(target, back).sigma_error < 1e-12);
  }
  SUBCASE("full ansatz") {
    const auto basis = SchurBasis::build(4);
    FullOptions o;
    o.seed = 42;
    o.max_outer = 10;
    const auto r = upper_bound_full(target, basis, o);
    const auto j = report_to_json(r);
    CHECK(j.at("seed") == 42);
    CHECK(j.at("termination") == std::string(to_string(r.termination)));
    CHECK_THROWS_AS(report_from_json(j), CapabilityError);
    const auto back = report_from_json(j, &basis);
    CHECK(back.sigma == r.sigma);
    CHECK(verify_certificate(target, back, &basis).sigma_error < 1e-10);
  }
  SUBCASE("tampered sigma is rejected") {
    const auto r = upper_bound_simple(target, default_k_set(4), default_theta_grid(12));
    auto j = report_to_json(r);
    j["ensemble"][0]["simple"]["theta"] = j["ensemble"][0]["simple"]["theta"].get<double>() + 0.2;
    CHECK_THROWS_AS(report_from_json(j), IntegrityError);
  }
}
