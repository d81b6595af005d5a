#include "nievalue/contour.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nievalue/sensitivity.hpp"

namespace nievalue {

namespace {
constexpr double kAsymptoteOffset = 1e-3;
constexpr double kOnContourRelTol = 1e-6;
}  // namespace

double contour_rr_ud(const Kappa& k, double rr_eu) {
  const double kv = k.value();
  if (!std::isfinite(rr_eu) || rr_eu <= kv) {
    throw std::domain_error("rr_eu = " + std::to_string(rr_eu) +
                            " is at or below the contour asymptote rr_eu = kappa = " +
                            std::to_string(kv));
  }
  return kv * (rr_eu - 1.0) / (rr_eu - kv);
}

double default_rr_eu_max(const Kappa& k) {
  return std::max(10.0, 4.0 * nie(k).evalue);
}

ContourCurve sample_contour(const Kappa& k, int n_points, double rr_eu_max) {
  if (n_points < 2) {
    throw std::invalid_argument("n_points must be >= 2, got " +
                                std::to_string(n_points));
  }
  const double kv = k.value();
  const double start = kv * (1.0 + kAsymptoteOffset);
  if (!std::isfinite(rr_eu_max) || rr_eu_max <= start) {
    throw std::invalid_argument("rr_eu_max must exceed kappa*(1+1e-3)");
  }

  const double e = nie(k).evalue;
  ContourCurve curve{k, {}, {e, e}};
  curve.points.reserve(static_cast<std::size_t>(n_points) + 1);

  const double log_start = std::log(start);
  const double log_step = (std::log(rr_eu_max) - log_start) / n_points;
  for (int i = 1; i <= n_points; ++i) {
    const double x = i == n_points ? rr_eu_max : std::exp(log_start + i * log_step);
    curve.points.push_back({x, contour_rr_ud(k, x)});
  }

  // Merge the equal point into sorted position unless a sample coincides.
  const auto pos = std::lower_bound(
      curve.points.begin(), curve.points.end(), e,
      [](const ContourPoint& p, double x) { return p.rr_eu < x; });
  const bool duplicate =
      pos != curve.points.end() && std::fabs(pos->rr_eu - e) <= 1e-12 * e;
  if (!duplicate) curve.points.insert(pos, curve.equal_point);

  return curve;
}

ContourRegion classify_point(const Kappa& k, double rr_eu, double rr_ud) {
  const double b = bias_factor(RiskRatio(rr_eu, "rr_eu"), RiskRatio(rr_ud, "rr_ud"));
  const double kv = k.value();
  if (std::fabs(b - kv) <= kOnContourRelTol * kv) return ContourRegion::OnContour;
  return b > kv ? ContourRegion::Sufficient : ContourRegion::Insufficient;
}

}  // namespace nievalue
