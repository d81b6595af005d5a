#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace nievalue {

/// Hypothesis orientation, determined by how the binary outcome is coded:
/// causative when D=1 denotes clinical success (margin typically <= 1),
/// preventive when D=1 denotes an adverse event (margin typically >= 1).
enum class Direction { Causative, Preventive };

/// Which estimate an E-value was computed for.
enum class Basis { PointEstimate, ConfidenceLimit };

enum class Measure { RR, HR };

enum class Frequency { Rare, Common };

std::string to_string(Direction d);
std::string to_string(Basis b);
std::string to_string(Measure m);
std::string to_string(Frequency f);

Direction direction_from_string(const std::string& s);
Measure measure_from_string(const std::string& s);

/// A strictly positive, finite ratio-scale effect value (RR, RR_EU, RR_UD, ...).
class RiskRatio {
 public:
  explicit RiskRatio(double value, const std::string& name = "risk ratio");
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Multiplicative distance max(C/M, M/C) between a confidence limit C and a
/// margin M. Always >= 1.
class Kappa {
 public:
  explicit Kappa(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct EvalueResult {
  double evalue;  // >= 1
  Basis basis;
  Kappa kappa;
  /// Set when the observed value already sits on the acceptable side of the
  /// reference, so no confounding at all is needed and the E-value floors at 1.
  bool already_at_or_beyond_reference;
};

/// A published effect estimate: scale, point estimate, two-sided 95% CI.
struct EffectSummary {
  Measure measure;
  double point;
  double lower;
  double upper;

  /// Enforces 0 < lower <= point <= upper, all finite.
  EffectSummary(Measure measure, double point, double lower, double upper);
};

struct ArmCounts {
  long events;
  long n;
};

/// Outcome-frequency information deciding whether the HR is treated as an
/// approximate RR directly (rare outcome) or converted first (common outcome).
struct OutcomeFrequency {
  enum class Kind { Rare, Common, FromCounts };

  Kind kind = Kind::Rare;
  std::optional<ArmCounts> exposed;
  std::optional<ArmCounts> control;
  double threshold = 0.15;  // prevalence at or above which the outcome is common

  static OutcomeFrequency rare();
  static OutcomeFrequency common();
  static OutcomeFrequency from_counts(ArmCounts exposed, ArmCounts control,
                                      double threshold = 0.15);
};

}  // namespace nievalue
