#include <doctest.h>

#include <cmath>

#include "coalscope/error.hpp"
#include "coalscope/verify.hpp"

using namespace coalscope;

namespace {

RunOptions small_opts(std::int64_t reps = 200) {
  RunOptions o;
  o.reps = reps;
  o.limit_reps = reps;
  o.seed = 7;
  return o;
}

}  // namespace

TEST_CASE("report pass needs a gating check and no failing gating check") {
  VerificationReport r;
  CHECK_FALSE(r.pass());
  r.checks.push_back({"diag", 1.0, 0.5, "<", false, false});
  CHECK_FALSE(r.pass());
  r.checks.push_back({"gate", 0.1, 0.5, "<", true, true});
  CHECK(r.pass());
  r.checks.push_back({"gate2", 0.9, 0.5, "<", false, true});
  CHECK_FALSE(r.pass());
  r.checks.pop_back();
  r.degenerate = true;
  CHECK_FALSE(r.pass());
}

TEST_CASE("rates report json carries checks and measure") {
  const auto r = verify_rates(beta_coalescent(1.5), small_opts());
  CHECK(r.pass());
  const auto j = r.to_json();
  CHECK(j.at("scenario") == r.scenario);
  CHECK(j.at("checks").size() == r.checks.size());
  CHECK(j.at("measure").at("alpha").get<double>() == doctest::Approx(1.5));
  CHECK(j.at("pass").get<bool>());
}

TEST_CASE("mohle with theta zero is degenerate") {
  const auto r = verify_mohle(beta_shape(2.0, 1.0), 200, 0.0, small_opts(50));
  CHECK(r.degenerate);
  CHECK_FALSE(r.pass());
  CHECK(r.to_json().at("degenerate").get<bool>());
}

TEST_CASE("scenarios reject unsupported families") {
  CHECK_THROWS_AS(verify_tau(kingman(), {100, 200}, small_opts()), UnsupportedFamilyError);
  CHECK_THROWS_AS(verify_bs(beta_coalescent(1.5), {100}, small_opts()), UnsupportedFamilyError);
  CHECK_THROWS_AS(verify_mohle(kingman(), 100, 1.0, small_opts()), UnsupportedFamilyError);
  CHECK_THROWS_AS(verify_tau(beta_coalescent(1.5), {}, small_opts()), ArgumentError);
  CHECK_THROWS_AS(verify_mutations(beta_coalescent(1.5), {100}, 0.25, 0.0, small_opts()), ArgumentError);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const auto m = beta_coalescent(1.5);
  const auto a = verify_tau(m, {100, 400}, small_opts());
  const auto b = verify_tau(m, {100, 400}, small_opts());
  CHECK(a.to_json().dump() == b.to_json().dump());
  auto other = small_opts();
  other.seed = 8;
  CHECK(verify_tau(m, {100, 400}, other).to_json().dump() != a.to_json().dump());
}
