#include "nievalue/conversion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nievalue {

double hr_to_rr(double hr) {
  if (!std::isfinite(hr) || hr <= 0.0) {
    throw std::domain_error("hazard ratio must be finite and positive, got " +
                            std::to_string(hr));
  }
  // Removable 0/0 singularity; the limit is 1.
  if (std::fabs(hr - 1.0) < 1e-12) return 1.0;
  const double num = 1.0 - std::pow(0.5, std::sqrt(hr));
  const double den = 1.0 - std::pow(0.5, std::sqrt(1.0 / hr));
  return num / den;
}

Frequency classify_frequency(const OutcomeFrequency& freq) {
  switch (freq.kind) {
    case OutcomeFrequency::Kind::Rare:
      return Frequency::Rare;
    case OutcomeFrequency::Kind::Common:
      return Frequency::Common;
    case OutcomeFrequency::Kind::FromCounts:
      break;
  }
  if (!freq.exposed || !freq.control) {
    throw std::invalid_argument(
        "from_counts frequency requires events/n for both arms");
  }
  const double prev_exposed =
      static_cast<double>(freq.exposed->events) / static_cast<double>(freq.exposed->n);
  const double prev_control =
      static_cast<double>(freq.control->events) / static_cast<double>(freq.control->n);
  return std::max(prev_exposed, prev_control) >= freq.threshold ? Frequency::Common
                                                                : Frequency::Rare;
}

RrScale to_rr_scale(const EffectSummary& estimate, double margin,
                    const OutcomeFrequency& freq) {
  if (!std::isfinite(margin) || margin <= 0.0) {
    throw std::domain_error("margin must be finite and positive, got " +
                            std::to_string(margin));
  }
  if (estimate.measure == Measure::RR) {
    return {estimate, margin, false};
  }
  if (classify_frequency(freq) == Frequency::Rare) {
    // Rare outcome: the HR approximates the RR directly.
    EffectSummary relabeled(Measure::RR, estimate.point, estimate.lower,
                            estimate.upper);
    return {relabeled, margin, false};
  }
  EffectSummary converted(Measure::RR, hr_to_rr(estimate.point),
                          hr_to_rr(estimate.lower), hr_to_rr(estimate.upper));
  return {converted, hr_to_rr(margin), true};
}

}  // namespace nievalue
