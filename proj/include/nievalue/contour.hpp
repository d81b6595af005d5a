#pragma once

#include <vector>

#include "nievalue/types.hpp"

namespace nievalue {

struct ContourPoint {
  double rr_eu;
  double rr_ud;
};

/// Sampled kappa-contour of the bias factor in the (RR_EU, RR_UD) plane.
/// Points are sorted by strictly increasing rr_eu and every point satisfies
/// bias_factor(rr_eu, rr_ud) = kappa. The equal point (NIE, NIE) is the
/// curve's closest approach to the origin in the max-norm.
struct ContourCurve {
  Kappa kappa;
  std::vector<ContourPoint> points;
  ContourPoint equal_point;
};

enum class ContourRegion { Insufficient, OnContour, Sufficient };

/// Solves bias_factor(rr_eu, rr_ud) = kappa for rr_ud:
/// kappa * (rr_eu - 1) / (rr_eu - kappa). Requires rr_eu > kappa
/// (vertical asymptote at rr_eu = kappa).
double contour_rr_ud(const Kappa& k, double rr_eu);

/// Default plotting/sampling extent: max(10, 4 * NIE(kappa)).
double default_rr_eu_max(const Kappa& k);

/// n_points log-spaced rr_eu values in (kappa*(1+1e-3), rr_eu_max], paired
/// via contour_rr_ud, with the equal point merged in. kappa = 1 degenerates
/// to the flat contour rr_ud = 1.
ContourCurve sample_contour(const Kappa& k, int n_points, double rr_eu_max);

/// Sufficient iff bias_factor(rr_eu, rr_ud) exceeds kappa beyond 1e-6
/// relative tolerance; OnContour within that tolerance; else Insufficient.
ContourRegion classify_point(const Kappa& k, double rr_eu, double rr_ud);

}  // namespace nievalue
