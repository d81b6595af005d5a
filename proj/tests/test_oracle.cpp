#include <cmath>

#include <doctest.h>

#include "nievalue/oracle.hpp"
#include "nievalue/sensitivity.hpp"

using namespace nievalue;

TEST_CASE("observed_rr") {
  // no E-U association => no confounding, regardless of risks
  CHECK(observed_rr({0.37, 0.37, 0.9, 0.05}) == 1.0);
  // no U-D association => no confounding, regardless of prevalences
  CHECK(observed_rr({0.9, 0.1, 0.4, 0.4}) == 1.0);
  // hand-computable mixture attaining B(2,2) = 4/3 exactly
  CHECK(observed_rr({1.0, 0.5, 0.4, 0.2}) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(observed_rr({0.0, 0.5, 0.4, 0.2}), std::domain_error);
  CHECK_THROWS_AS(observed_rr({0.5, 1.2, 0.4, 0.2}), std::domain_error);
}

TEST_CASE("associations orient by U category, not by two-sided normalization") {
  // The complement category can carry the stronger association.
  const ScenarioAssociations a = associations({0.45, 0.9, 0.3, 0.6});
  CHECK(a.rr_eu == doctest::Approx(5.5).epsilon(1e-12));  // (1-0.45)/(1-0.9)
  CHECK(a.rr_ud == doctest::Approx(2.0).epsilon(1e-12));
  const ScenarioAssociations b = associations({0.8, 0.4, 0.4, 0.2});
  CHECK(b.rr_eu == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.rr_obs == doctest::Approx(9.0 / 7.0).epsilon(1e-12));
  // rr_obs never exceeds the bound built from these associations
  CHECK(b.rr_obs <= bias_factor(RiskRatio(b.rr_eu), RiskRatio(b.rr_ud)) + 1e-9);
}

TEST_CASE("sharpness witness attains the bound exactly") {
  const ConfounderScenario witness{1.0, 0.5, 0.4, 0.2};
  CHECK(std::fabs(observed_rr(witness) -
                  bias_factor(RiskRatio(2.0), RiskRatio(2.0))) <= 1e-9);
}

TEST_CASE("reciprocal duality on a fixed scenario set") {
  const ConfounderScenario scenarios[] = {
      {0.7, 0.2, 0.55, 0.1},  {0.2, 0.7, 0.55, 0.1},  {0.9, 0.85, 0.02, 0.6},
      {0.33, 0.44, 0.5, 0.5}, {0.05, 0.95, 0.95, 0.05}};
  for (const ConfounderScenario& base : scenarios) {
    for (const ConfounderScenario& s : {base, recode_outcome(base)}) {
      const ScenarioAssociations a = associations(s);
      const double b = bias_factor(RiskRatio(a.rr_eu), RiskRatio(a.rr_ud));
      CHECK(a.rr_obs <= b + 1e-9);
      CHECK(observed_rr(swap_exposure(s)) >= 1.0 / b - 1e-9);
    }
  }
}

TEST_CASE("max_observed_rr converges to the bias factor") {
  SUBCASE("cap_eu = 1 forces equal prevalences") {
    const GridSearchResult r = max_observed_rr(1.0, 7.0, 40);
    CHECK(r.max_rr == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("caps (2,2)") {
    const GridSearchResult r = max_observed_rr(2.0, 2.0, 200);
    CHECK(std::fabs(r.max_rr - 4.0 / 3.0) <= 0.01);
    CHECK(r.max_rr <= 4.0 / 3.0 + 1e-9);
    CHECK(observed_rr(r.argmax) == r.max_rr);  // witness reproduces the maximum
  }
  SUBCASE("caps (3,3)") {
    const GridSearchResult r = max_observed_rr(3.0, 3.0, 100);
    CHECK(std::fabs(r.max_rr - 1.8) <= 0.02);
    CHECK(r.max_rr <= 1.8 + 1e-9);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(max_observed_rr(0.8, 2.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(max_observed_rr(2.0, 2.0, 9), std::invalid_argument);
    CHECK_THROWS_AS(max_observed_rr(std::nan(""), 2.0, 100), std::invalid_argument);
  }
}

TEST_CASE("verify_bound finds no violations and is deterministic") {
  const BoundCheckReport a = verify_bound(2000, 42);
  CHECK(a.violations == 0);
  CHECK(a.checks == 8000);
  CHECK(a.worst_slack >= -1e-9);

  const BoundCheckReport b = verify_bound(2000, 42);
  CHECK(a.worst_slack == b.worst_slack);
  CHECK(a.worst_scenario.p_u_given_e1 == b.worst_scenario.p_u_given_e1);
  CHECK(a.worst_scenario.p_u_given_e0 == b.worst_scenario.p_u_given_e0);
  CHECK(a.worst_scenario.risk_d_given_u1 == b.worst_scenario.risk_d_given_u1);
  CHECK(a.worst_scenario.risk_d_given_u0 == b.worst_scenario.risk_d_given_u0);

  const BoundCheckReport c = verify_bound(2000, 43);
  CHECK((c.worst_slack != a.worst_slack));  // different stream

  CHECK(verify_bound(1, 7).violations == 0);
  CHECK_THROWS_AS(verify_bound(0, 42), std::invalid_argument);
}

TEST_CASE("verify_nie_sufficiency") {
  SUBCASE("kappa above 1") {
    const SufficiencyReport r = verify_nie_sufficiency(Kappa(1.34), 60);
    CHECK(r.all_pass);
    CHECK(r.probes.size() == 9);
    for (const auto& p : r.probes) {
      if (!p.expect_sufficient) {
        CHECK(p.attained < 1.34);
        CHECK(p.bias_factor_at_caps < 1.34);
      }
    }
  }
  SUBCASE("published-style spot values") {
    CHECK(max_observed_rr(1.1, 1.1, 60).max_rr < 1.34);
    CHECK(std::fabs(max_observed_rr(1.1, 1.1, 200).max_rr - 1.00833333333333333) <=
          0.005);
    CHECK(max_observed_rr(3.0, 3.0, 60).max_rr >= 1.02);
  }
  SUBCASE("kappa = 1 is trivially sufficient everywhere") {
    const SufficiencyReport r = verify_nie_sufficiency(Kappa(1.0), 40);
    CHECK(r.all_pass);
    for (const auto& p : r.probes) CHECK(p.expect_sufficient);
  }
  SUBCASE("small kappa") {
    const SufficiencyReport r = verify_nie_sufficiency(Kappa(1.02), 60);
    CHECK(r.all_pass);
  }
  CHECK_THROWS_AS(verify_nie_sufficiency(Kappa(1.3), 5), std::invalid_argument);
}

TEST_CASE("sharpness_checks") {
  // resolution divisible by 2 and 3 lands the witnesses exactly on the grid
  const auto checks = sharpness_checks({1.5, 2.0, 3.0}, 60);
  REQUIRE(checks.size() == 3);
  for (const auto& c : checks) {
    CHECK(c.pass);
    CHECK(std::fabs(c.gap) <= 0.01);
    CHECK(observed_rr(c.witness) == c.attained);
  }
}
