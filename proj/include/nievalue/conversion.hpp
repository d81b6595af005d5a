#pragma once

#include "nievalue/types.hpp"

namespace nievalue {

/// Approximate RR implied by a hazard ratio for a common outcome:
/// (1 - 0.5^sqrt(hr)) / (1 - 0.5^sqrt(1/hr)).
/// The removable singularity at hr = 1 returns exactly 1. Strictly
/// increasing, and attenuating: the result lies between 1 and hr.
double hr_to_rr(double hr);

/// Rare/Common passthrough; FromCounts classifies as Common iff the larger
/// per-arm prevalence reaches the threshold.
Frequency classify_frequency(const OutcomeFrequency& freq);

struct RrScale {
  EffectSummary estimate;  // RR scale
  double margin;           // RR scale
  bool conversion_applied;
};

/// Puts an estimate and its margin on the RR scale. RR inputs pass through;
/// HR inputs with a rare outcome are reused as approximate RRs unchanged;
/// HR inputs with a common outcome are converted elementwise (point, both
/// bounds, margin) via hr_to_rr, which preserves bound ordering.
RrScale to_rr_scale(const EffectSummary& estimate, double margin,
                    const OutcomeFrequency& freq);

}  // namespace nievalue
