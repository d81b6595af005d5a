#include "nievalue/types.hpp"

#include <cmath>

namespace nievalue {

std::string to_string(Direction d) {
  return d == Direction::Causative ? "causative" : "preventive";
}

std::string to_string(Basis b) {
  return b == Basis::PointEstimate ? "point_estimate" : "confidence_limit";
}

std::string to_string(Measure m) { return m == Measure::RR ? "RR" : "HR"; }

std::string to_string(Frequency f) {
  return f == Frequency::Rare ? "rare" : "common";
}

Direction direction_from_string(const std::string& s) {
  if (s == "causative") return Direction::Causative;
  if (s == "preventive") return Direction::Preventive;
  throw std::invalid_argument("unknown direction '" + s +
                              "' (expected causative or preventive)");
}

Measure measure_from_string(const std::string& s) {
  if (s == "RR" || s == "rr") return Measure::RR;
  if (s == "HR" || s == "hr") return Measure::HR;
  throw std::invalid_argument("unsupported measure '" + s +
                              "' (supported: RR, HR)");
}

RiskRatio::RiskRatio(double value, const std::string& name) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::domain_error(name + " must be a finite positive value, got " +
                            std::to_string(value));
  }
}

Kappa::Kappa(double value) : value_(value) {
  if (!std::isfinite(value) || value < 1.0) {
    throw std::domain_error("kappa must be finite and >= 1, got " +
                            std::to_string(value));
  }
}

EffectSummary::EffectSummary(Measure measure, double point, double lower, double upper)
    : measure(measure), point(point), lower(lower), upper(upper) {
  const auto bad = [](double v) { return !std::isfinite(v) || v <= 0.0; };
  if (bad(point) || bad(lower) || bad(upper)) {
    throw std::domain_error("effect summary values must be finite and positive");
  }
  if (lower > point || point > upper) {
    throw std::domain_error("effect summary requires lower <= point <= upper");
  }
}

OutcomeFrequency OutcomeFrequency::rare() { return {Kind::Rare, {}, {}, 0.15}; }

OutcomeFrequency OutcomeFrequency::common() { return {Kind::Common, {}, {}, 0.15}; }

OutcomeFrequency OutcomeFrequency::from_counts(ArmCounts exposed, ArmCounts control,
                                               double threshold) {
  for (const auto& arm : {exposed, control}) {
    if (arm.n <= 0) throw std::invalid_argument("arm size must be positive");
    if (arm.events < 0 || arm.events > arm.n) {
      throw std::invalid_argument("events must lie in [0, n]");
    }
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("frequency threshold must lie in (0, 1)");
  }
  return {Kind::FromCounts, exposed, control, threshold};
}

}  // namespace nievalue
