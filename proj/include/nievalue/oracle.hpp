#pragma once

#include <cstdint>
#include <vector>

#include "nievalue/types.hpp"

namespace nievalue {

// Brute-force verification of the bounding-factor inequalities, independent
// of the closed forms in sensitivity.hpp. A scenario fixes a complete binary-
// confounder world: U prevalence per exposure arm and outcome risk per U
// stratum. Risks depend on U only, so the true effect of E on D is null
// within strata and any departure of the marginal RR from 1 is confounding.

struct ConfounderScenario {
  double p_u_given_e1;    // P(U=1 | E=1)
  double p_u_given_e0;    // P(U=1 | E=0)
  double risk_d_given_u1; // P(D=1 | U=1)
  double risk_d_given_u0; // P(D=1 | U=0)
};

/// Association strengths of a scenario, oriented for the causative-direction
/// bound. rr_eu maximizes P(U=u|E=1)/P(U=u|E=0) over the two U categories
/// (can be +inf when a category is empty under E=0); rr_ud is the risk ratio
/// across U strata, larger risk over smaller. Both >= 1.
struct ScenarioAssociations {
  double rr_eu;
  double rr_ud;
  double rr_obs;
};

/// Exact marginal risk ratio of E on D implied by the scenario:
/// [p1*r1 + (1-p1)*r0] / [p0*r1 + (1-p0)*r0].
double observed_rr(const ConfounderScenario& s);

ScenarioAssociations associations(const ConfounderScenario& s);

/// Reciprocal coding of the exposure (treated and control arms swapped);
/// the observed RR becomes its reciprocal.
ConfounderScenario swap_exposure(const ConfounderScenario& s);

/// Reciprocal coding of the outcome (success and failure swapped);
/// risks become their complements.
ConfounderScenario recode_outcome(const ConfounderScenario& s);

struct GridSearchResult {
  double max_rr;
  ConfounderScenario argmax;
  long long scenarios_evaluated;
};

/// Exhaustive grid search over scenarios with probabilities on the grid
/// {1/n, 2/n, ..., 1} (n = grid_resolution), keeping those whose
/// associations satisfy rr_eu <= cap_eu and rr_ud <= cap_ud. Returns the
/// largest observed RR found and a witnessing scenario. The maximum never
/// exceeds bias_factor(cap_eu, cap_ud) + 1e-9 and approaches it as the grid
/// refines. Deterministic for fixed arguments.
GridSearchResult max_observed_rr(double cap_eu, double cap_ud, int grid_resolution);

struct BoundCheckReport {
  long long n_scenarios = 0;
  std::uint64_t seed = 0;
  long long checks = 0;      // four per scenario (two codings x two directions)
  long long violations = 0;
  double worst_slack = 0.0;  // min over checks of (bound - value); >= 0 when the theorem holds
  ConfounderScenario worst_scenario{0, 0, 0, 0};
};

/// Draws n_random scenarios from a seeded deterministic generator
/// (probabilities uniform on (0.01, 0.99)) and checks, for the scenario and
/// its outcome-recoded twin, the causative bound rr_obs <= B + 1e-9 and the
/// preventive bound rr_obs >= 1/B - 1e-9 on the exposure-recoded scenario.
/// Identical seed and n produce bit-identical reports.
BoundCheckReport verify_bound(long long n_random, std::uint64_t seed);

struct SufficiencyProbe {
  double cap_eu;
  double cap_ud;
  double bias_factor_at_caps;
  double attained;
  bool expect_sufficient;
  bool pass;
};

struct SufficiencyReport {
  double kappa = 1.0;
  int grid_resolution = 0;
  std::vector<SufficiencyProbe> probes;
  bool all_pass = true;
};

/// Probes confounder strengths strictly below the kappa-contour (maximum
/// attainable observed RR must stay below kappa) and on/above it (kappa must
/// be attainable up to grid discretization error).
SufficiencyReport verify_nie_sufficiency(const Kappa& k, int grid_resolution);

struct SharpnessCheck {
  double cap;
  int grid_resolution;
  double bias_factor_at_caps;
  double attained;
  double gap;  // bias_factor_at_caps - attained
  ConfounderScenario witness;
  bool pass;   // gap within tolerance
};

/// Grid-search attainment of B at equal caps, default {1.5, 2, 3};
/// pass means the attained maximum is within `tolerance` of B(cap, cap).
std::vector<SharpnessCheck> sharpness_checks(const std::vector<double>& caps,
                                             int grid_resolution,
                                             double tolerance = 0.01);

}  // namespace nievalue
