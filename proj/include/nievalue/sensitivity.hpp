#pragma once

#include "nievalue/types.hpp"

namespace nievalue {

/// Bounding factor B = RR_EU * RR_UD / (RR_EU + RR_UD - 1): the maximal
/// multiplicative bias a single unmeasured confounder with the given
/// association strengths can induce in an observed risk ratio
/// (Ding & VanderWeele, Epidemiology 2016).
///
/// Both arguments must be >= 1 (associations expressed on the >=1 side).
/// Satisfies 1 <= B <= min(rr_eu, rr_ud).
double bias_factor(const RiskRatio& rr_eu, const RiskRatio& rr_ud);

/// Classical E-value of an observed risk ratio against the null:
/// causative  rr + sqrt(rr * (rr - 1)),
/// preventive the same formula applied to 1/rr.
/// An observed value already on the null's acceptable side yields E-value 1
/// with already_at_or_beyond_reference set.
EvalueResult classical_evalue(const RiskRatio& rr_obs, Direction direction,
                              Basis basis = Basis::PointEstimate);

/// E-value of an observed risk ratio against an arbitrary reference rr_true:
/// causative  {rr + sqrt(rr * (rr - rr_true))} / rr_true,
/// preventive {1/rr + sqrt(1/rr * (1/rr - 1/rr_true))} * rr_true.
/// Reduces to classical_evalue at rr_true = 1. Observed values on the
/// acceptable side of the reference floor at 1 (flagged), never NaN.
EvalueResult generalized_evalue(const RiskRatio& rr_obs, const RiskRatio& rr_true,
                                Direction direction,
                                Basis basis = Basis::PointEstimate);

/// kappa = max(c/m, m/c) >= 1: multiplicative distance between a confidence
/// limit and a margin, invariant under reciprocal recoding of the outcome.
Kappa kappa(const RiskRatio& c, const RiskRatio& m);

/// Non-inferiority E-value NIE = kappa + sqrt(kappa * (kappa - 1)):
/// the minimum max(RR_EU, RR_UD) able to move the limit to the margin.
EvalueResult nie(const Kappa& k, Basis basis = Basis::ConfidenceLimit);

/// The CI bound compared against the margin: lower bound for causative
/// hypotheses, upper bound for preventive ones.
RiskRatio governing_limit(const EffectSummary& estimate, Direction direction);

}  // namespace nievalue
