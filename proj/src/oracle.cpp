#include "nievalue/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "nievalue/contour.hpp"
#include "nievalue/sensitivity.hpp"

namespace nievalue {

namespace {

constexpr double kSlackTol = 1e-9;
// Absorbs rounding when grid-quotients like 0.99/0.66 land one ulp above the cap.
constexpr double kCapSlop = 1.0 + 1e-12;

void validate_scenario(const ConfounderScenario& s) {
  for (double v : {s.p_u_given_e1, s.p_u_given_e0, s.risk_d_given_u1, s.risk_d_given_u0}) {
    if (!std::isfinite(v) || v <= 0.0 || v > 1.0) {
      throw std::domain_error("scenario probabilities must lie in (0, 1], got " +
                              std::to_string(v));
    }
  }
}

// One U category's prevalence ratio between arms. An empty category in both
// arms carries no association (1); empty only under E=0 is an infinite one.
double category_ratio(double exposed_mass, double control_mass) {
  if (control_mass == 0.0) {
    return exposed_mass == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return exposed_mass / control_mass;
}

// Bounding factor extended continuously to rr_eu = +inf, where it equals rr_ud.
double bound_at(double rr_eu, double rr_ud) {
  if (std::isinf(rr_eu)) return rr_ud;
  return rr_eu * rr_ud / (rr_eu + rr_ud - 1.0);
}

}  // namespace

double observed_rr(const ConfounderScenario& s) {
  validate_scenario(s);
  const double num =
      s.p_u_given_e1 * s.risk_d_given_u1 + (1.0 - s.p_u_given_e1) * s.risk_d_given_u0;
  const double den =
      s.p_u_given_e0 * s.risk_d_given_u1 + (1.0 - s.p_u_given_e0) * s.risk_d_given_u0;
  return num / den;
}

ScenarioAssociations associations(const ConfounderScenario& s) {
  validate_scenario(s);
  const double rr_eu =
      std::max(category_ratio(s.p_u_given_e1, s.p_u_given_e0),
               category_ratio(1.0 - s.p_u_given_e1, 1.0 - s.p_u_given_e0));
  const double rr_ud = std::max(s.risk_d_given_u1 / s.risk_d_given_u0,
                                s.risk_d_given_u0 / s.risk_d_given_u1);
  return {rr_eu, rr_ud, observed_rr(s)};
}

ConfounderScenario swap_exposure(const ConfounderScenario& s) {
  return {s.p_u_given_e0, s.p_u_given_e1, s.risk_d_given_u1, s.risk_d_given_u0};
}

ConfounderScenario recode_outcome(const ConfounderScenario& s) {
  return {s.p_u_given_e1, s.p_u_given_e0, 1.0 - s.risk_d_given_u1,
          1.0 - s.risk_d_given_u0};
}

GridSearchResult max_observed_rr(double cap_eu, double cap_ud, int grid_resolution) {
  if (!std::isfinite(cap_eu) || !std::isfinite(cap_ud) || cap_eu < 1.0 || cap_ud < 1.0) {
    throw std::invalid_argument("caps must be finite and >= 1");
  }
  if (grid_resolution < 10) {
    throw std::invalid_argument("grid_resolution must be >= 10, got " +
                                std::to_string(grid_resolution));
  }

  const int n = grid_resolution;
  const double inv_n = 1.0 / n;
  const double eu_cap = cap_eu * kCapSlop;
  const double ud_cap = cap_ud * kCapSlop;

  // Exposure-prevalence index pairs (p0, p1) = (i0/n, i1/n) admissible under
  // the rr_eu cap, grouped by i0. Computed once; the risk loops reuse it.
  std::vector<std::vector<double>> admissible_p1(static_cast<std::size_t>(n) + 1);
  for (int i0 = 1; i0 <= n; ++i0) {
    const double p0 = i0 * inv_n;
    for (int i1 = 1; i1 <= n; ++i1) {
      const double p1 = i1 * inv_n;
      const double rr_eu = std::max(category_ratio(p1, p0),
                                    category_ratio(1.0 - p1, 1.0 - p0));
      if (rr_eu <= eu_cap) admissible_p1[static_cast<std::size_t>(i0)].push_back(i1 * inv_n);
    }
  }

  double best = 0.0;
  ConfounderScenario argmax{1.0, 1.0, 1.0, 1.0};
  long long evaluated = 0;

  for (int j0 = 1; j0 <= n; ++j0) {
    const double r0 = j0 * inv_n;
    for (int j1 = 1; j1 <= n; ++j1) {
      const double r1 = j1 * inv_n;
      const double lambda = r1 / r0;
      if (std::max(lambda, r0 / r1) > ud_cap) continue;
      // rr_obs = (1 + p1*(lambda-1)) / (1 + p0*(lambda-1)); the risks enter
      // only through their ratio once the mixture is divided by r0.
      const double lm1 = lambda - 1.0;
      for (int i0 = 1; i0 <= n; ++i0) {
        const auto& row = admissible_p1[static_cast<std::size_t>(i0)];
        if (row.empty()) continue;
        const double inv_den = 1.0 / (1.0 + lm1 * (i0 * inv_n));
        evaluated += static_cast<long long>(row.size());
        for (double p1 : row) {
          const double rr = (1.0 + lm1 * p1) * inv_den;
          if (rr > best) {
            best = rr;
            argmax = {p1, i0 * inv_n, r1, r0};
          }
        }
      }
    }
  }

  // Report the witness's exact mixture value.
  return {observed_rr(argmax), argmax, evaluated};
}

BoundCheckReport verify_bound(long long n_random, std::uint64_t seed) {
  if (n_random < 1) {
    throw std::invalid_argument("n_random must be >= 1, got " +
                                std::to_string(n_random));
  }

  std::mt19937_64 rng(seed);
  // Explicit mapping instead of std::uniform_real_distribution keeps the
  // stream identical across standard library implementations.
  const auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };

  BoundCheckReport report;
  report.n_scenarios = n_random;
  report.seed = seed;
  report.worst_slack = std::numeric_limits<double>::infinity();

  for (long long i = 0; i < n_random; ++i) {
    const ConfounderScenario drawn{uniform(0.01, 0.99), uniform(0.01, 0.99),
                                   uniform(0.01, 0.99), uniform(0.01, 0.99)};
    for (const ConfounderScenario& s : {drawn, recode_outcome(drawn)}) {
      const ScenarioAssociations a = associations(s);
      const double bound = bound_at(a.rr_eu, a.rr_ud);
      // Causative orientation: the observed RR cannot exceed B.
      const double causative_slack = bound - a.rr_obs;
      // Preventive orientation, checked on the reciprocal-coded exposure:
      // its observed RR cannot fall below 1/B.
      const double preventive_slack = observed_rr(swap_exposure(s)) - 1.0 / bound;
      report.checks += 2;
      for (double slack : {causative_slack, preventive_slack}) {
        if (slack < report.worst_slack) {
          report.worst_slack = slack;
          report.worst_scenario = s;
        }
        if (slack < -kSlackTol) ++report.violations;
      }
    }
  }
  return report;
}

SufficiencyReport verify_nie_sufficiency(const Kappa& k, int grid_resolution) {
  if (grid_resolution < 10) {
    throw std::invalid_argument("grid_resolution must be >= 10, got " +
                                std::to_string(grid_resolution));
  }

  SufficiencyReport report;
  report.kappa = k.value();
  report.grid_resolution = grid_resolution;
  const double kv = k.value();
  // Attainment on an n-point grid misses the exact caps by O(1/n); scale the
  // allowance with kappa so the check stays meaningful for small contours.
  const double grid_tol = kv * std::max(0.02, 10.0 / grid_resolution);

  const auto probe = [&](double cap_eu, double cap_ud, bool expect_sufficient) {
    const GridSearchResult found = max_observed_rr(cap_eu, cap_ud, grid_resolution);
    const double b = bound_at(cap_eu, cap_ud);
    const bool pass = expect_sufficient ? found.max_rr >= kv - grid_tol
                                        : found.max_rr < kv;
    report.probes.push_back({cap_eu, cap_ud, b, found.max_rr, expect_sufficient, pass});
    report.all_pass = report.all_pass && pass;
  };

  if (kv <= 1.0) {
    // Degenerate contour: every confounder is sufficient to reach kappa = 1.
    for (double cap : {1.5, 2.0, 4.0}) probe(cap, cap, true);
    return report;
  }

  const double equal = nie(k).evalue;
  for (double x : {equal, 0.5 * (equal + kv * (1.0 + 1e-3)), 3.0 * equal}) {
    const double y = contour_rr_ud(k, x);
    // Strictly below the contour: the attainable maximum must stay under kappa.
    probe(x, 1.0 + 0.75 * (y - 1.0), false);
    // On/above: kappa must be reachable up to grid discretization.
    probe(x, y, true);
    probe(1.25 * x, 1.25 * y, true);
  }
  return report;
}

std::vector<SharpnessCheck> sharpness_checks(const std::vector<double>& caps,
                                             int grid_resolution, double tolerance) {
  std::vector<SharpnessCheck> checks;
  checks.reserve(caps.size());
  for (double cap : caps) {
    const GridSearchResult found = max_observed_rr(cap, cap, grid_resolution);
    const double b = bias_factor(RiskRatio(cap, "cap"), RiskRatio(cap, "cap"));
    const double gap = b - found.max_rr;
    checks.push_back({cap, grid_resolution, b, found.max_rr, gap, found.argmax,
                      std::fabs(gap) <= tolerance});
  }
  return checks;
}

}  // namespace nievalue
