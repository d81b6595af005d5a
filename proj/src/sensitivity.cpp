#include "nievalue/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nievalue {

namespace {

void require_at_least_one(double v, const char* name) {
  if (v < 1.0) {
    throw std::domain_error(std::string(name) + " must be >= 1, got " +
                            std::to_string(v));
  }
}

// kappa + sqrt(kappa * (kappa - 1)), the shared E-value shape.
double evalue_formula(double k) { return k + std::sqrt(k * (k - 1.0)); }

EvalueResult floored_result(Basis basis) {
  return {1.0, basis, Kappa(1.0), true};
}

}  // namespace

double bias_factor(const RiskRatio& rr_eu, const RiskRatio& rr_ud) {
  require_at_least_one(rr_eu.value(), "rr_eu");
  require_at_least_one(rr_ud.value(), "rr_ud");
  const double x = rr_eu.value();
  const double y = rr_ud.value();
  return x * y / (x + y - 1.0);
}

EvalueResult classical_evalue(const RiskRatio& rr_obs, Direction direction,
                              Basis basis) {
  const double rr = direction == Direction::Causative ? rr_obs.value()
                                                      : 1.0 / rr_obs.value();
  if (rr < 1.0) return floored_result(basis);
  return {evalue_formula(rr), basis, Kappa(rr), false};
}

EvalueResult generalized_evalue(const RiskRatio& rr_obs, const RiskRatio& rr_true,
                                Direction direction, Basis basis) {
  const double obs = rr_obs.value();
  const double ref = rr_true.value();
  if (direction == Direction::Causative) {
    if (obs < ref) return floored_result(basis);
    const double e = (obs + std::sqrt(obs * (obs - ref))) / ref;
    return {e, basis, Kappa(obs / ref), false};
  }
  if (obs > ref) return floored_result(basis);
  const double inv_obs = 1.0 / obs;
  const double inv_ref = 1.0 / ref;
  const double e = (inv_obs + std::sqrt(inv_obs * (inv_obs - inv_ref))) * ref;
  return {e, basis, Kappa(ref / obs), false};
}

Kappa kappa(const RiskRatio& c, const RiskRatio& m) {
  const double hi = std::max(c.value(), m.value());
  const double lo = std::min(c.value(), m.value());
  return Kappa(hi / lo);
}

EvalueResult nie(const Kappa& k, Basis basis) {
  return {evalue_formula(k.value()), basis, k, false};
}

RiskRatio governing_limit(const EffectSummary& estimate, Direction direction) {
  const double bound =
      direction == Direction::Causative ? estimate.lower : estimate.upper;
  return RiskRatio(bound, "governing confidence limit");
}

}  // namespace nievalue
