#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nievalue/types.hpp"

namespace nievalue {

/// One study as published: effect estimate, margin on the same scale,
/// hypothesis direction, and outcome-frequency information.
struct StudyRecord {
  std::string study_id;
  std::string label;
  EffectSummary estimate;
  double margin;
  Direction direction;
  OutcomeFrequency frequency;
};

enum class ResultFlag {
  Boundary,                    // governing limit exactly at the margin
  AlreadyAtOrBeyondReference,  // E-value floored at 1
  ConversionApplied,           // HR -> RR conversion was performed
  AtypicalMargin,              // margin on the unusual side of 1 for the direction
};

std::string to_string(ResultFlag f);

struct NieResult {
  std::string study_id;
  EffectSummary converted_estimate;  // RR scale
  double converted_margin;
  double governing_limit;
  double kappa_limit;
  double nie_limit;
  double kappa_point;
  double nie_point;
  bool non_inferiority_established;
  std::set<ResultFlag> flags;
};

enum class BatchFormat { Csv, Json };

/// Structural problem in the input stream (malformed CSV/JSON, wrong header,
/// non-numeric cell). Carries a 1-based line and field position when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed input that violates a semantic invariant (inverted bounds,
/// duplicate id, unsupported measure, ...). Names the study and field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string message, std::string study_id, std::string field);
  const std::string& study_id() const noexcept { return study_id_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string study_id_;
  std::string field_;
};

struct ParseOptions {
  double threshold = 0.15;  // prevalence threshold for from_counts rows
};

/// Header expected on CSV input, in this exact column order.
extern const char* const kCsvHeader;

std::vector<StudyRecord> parse_batch(std::istream& in, BatchFormat format,
                                     const ParseOptions& opts = {});

/// Full pipeline for one record: RR-scale conversion, governing limit,
/// kappa and NIE for the limit and the point estimate, verdict and flags.
NieResult analyze(const StudyRecord& record);

nlohmann::ordered_json to_json(const StudyRecord& record);
nlohmann::ordered_json to_json(const NieResult& result);
nlohmann::ordered_json to_json(const std::vector<NieResult>& results);
StudyRecord study_from_json(const nlohmann::json& j, const ParseOptions& opts = {});
std::string to_csv(const std::vector<StudyRecord>& records);

}  // namespace nievalue
