#include "nievalue/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include "nievalue/conversion.hpp"
#include "nievalue/sensitivity.hpp"

namespace nievalue {

const char* const kCsvHeader =
    "study_id,label,measure,point,lower,upper,margin,direction,frequency,"
    "events_exposed,n_exposed,events_control,n_control";

std::string to_string(ResultFlag f) {
  switch (f) {
    case ResultFlag::Boundary: return "boundary";
    case ResultFlag::AlreadyAtOrBeyondReference: return "already_at_or_beyond_reference";
    case ResultFlag::ConversionApplied: return "conversion_applied";
    case ResultFlag::AtypicalMargin: return "atypical_margin";
  }
  return "unknown";
}

ParseError::ParseError(std::string message, int line, int column)
    : std::runtime_error(std::move(message)), line_(line), column_(column) {}

ValidationError::ValidationError(std::string message, std::string study_id,
                                 std::string field)
    : std::runtime_error(std::move(message)),
      study_id_(std::move(study_id)),
      field_(std::move(field)) {}

namespace {

constexpr int kColumnCount = 13;

const char* const kColumnNames[kColumnCount] = {
    "study_id", "label", "measure", "point", "lower", "upper", "margin",
    "direction", "frequency", "events_exposed", "n_exposed", "events_control",
    "n_control"};

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (in_quotes) {
    throw ParseError("line " + std::to_string(line_no) + ": unterminated quote",
                     line_no, static_cast<int>(fields.size()) + 1);
  }
  fields.push_back(std::move(current));
  return fields;
}

double parse_double_cell(const std::string& cell, int line_no, int column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ", column " +
                         std::to_string(column) + " (" + kColumnNames[column - 1] +
                         "): expected a number, got '" + cell + "'",
                     line_no, column);
  }
  return value;
}

long parse_count_cell(const std::string& cell, int line_no, int column) {
  long value = 0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ", column " +
                         std::to_string(column) + " (" + kColumnNames[column - 1] +
                         "): expected an integer, got '" + cell + "'",
                     line_no, column);
  }
  return value;
}

OutcomeFrequency frequency_from_fields(const std::string& kind,
                                       const std::string& study_id,
                                       const std::vector<std::string>& cells,
                                       int line_no, double threshold) {
  const bool counts_present =
      !cells[9].empty() || !cells[10].empty() || !cells[11].empty() || !cells[12].empty();
  if (kind == "rare" || kind == "common") {
    if (counts_present) {
      throw ValidationError("study '" + study_id +
                                "': count columns are only valid with frequency=from_counts",
                            study_id, "events_exposed");
    }
    return kind == "rare" ? OutcomeFrequency::rare() : OutcomeFrequency::common();
  }
  if (kind != "from_counts") {
    throw ValidationError("study '" + study_id + "': unknown frequency '" + kind +
                              "' (expected rare, common or from_counts)",
                          study_id, "frequency");
  }
  for (int c = 10; c <= 13; ++c) {
    if (cells[static_cast<std::size_t>(c) - 1].empty()) {
      throw ValidationError("study '" + study_id + "': frequency=from_counts requires " +
                                std::string(kColumnNames[c - 1]),
                            study_id, kColumnNames[c - 1]);
    }
  }
  const ArmCounts exposed{parse_count_cell(cells[9], line_no, 10),
                          parse_count_cell(cells[10], line_no, 11)};
  const ArmCounts control{parse_count_cell(cells[11], line_no, 12),
                          parse_count_cell(cells[12], line_no, 13)};
  try {
    return OutcomeFrequency::from_counts(exposed, control, threshold);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "counts");
  }
}

StudyRecord record_from_fields(const std::vector<std::string>& cells, int line_no,
                               const ParseOptions& opts) {
  const std::string& study_id = cells[0];
  if (study_id.empty()) {
    throw ValidationError("line " + std::to_string(line_no) + ": study_id must be non-empty",
                          study_id, "study_id");
  }

  Measure measure = Measure::RR;
  try {
    measure = measure_from_string(cells[2]);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "measure");
  }

  const double point = parse_double_cell(cells[3], line_no, 4);
  const double lower = parse_double_cell(cells[4], line_no, 5);
  const double upper = parse_double_cell(cells[5], line_no, 6);
  const double margin = parse_double_cell(cells[6], line_no, 7);
  if (!std::isfinite(margin) || margin <= 0.0) {
    throw ValidationError("study '" + study_id + "': margin must be finite and positive",
                          study_id, "margin");
  }

  Direction direction = Direction::Preventive;
  try {
    direction = direction_from_string(cells[7]);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "direction");
  }

  OutcomeFrequency frequency =
      frequency_from_fields(cells[8], study_id, cells, line_no, opts.threshold);

  try {
    EffectSummary estimate(measure, point, lower, upper);
    return {study_id, cells[1], estimate, margin, direction, frequency};
  } catch (const std::domain_error& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "bounds");
  }
}

std::vector<StudyRecord> parse_csv(std::istream& in, const ParseOptions& opts) {
  std::vector<StudyRecord> records;
  std::set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw ParseError("line 1: expected header '" + std::string(kCsvHeader) + "'",
                         line_no, 1);
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line, line_no);
    if (cells.size() != kColumnCount) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(kColumnCount) + " fields, got " +
                           std::to_string(cells.size()),
                       line_no, static_cast<int>(cells.size()));
    }
    StudyRecord record = record_from_fields(cells, line_no, opts);
    if (!seen_ids.insert(record.study_id).second) {
      throw ValidationError("duplicate study_id '" + record.study_id + "'",
                            record.study_id, "study_id");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<StudyRecord> parse_json(std::istream& in, const ParseOptions& opts) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 0, 0);
  }
  if (!doc.is_array()) {
    throw ParseError("expected a JSON array of study objects", 0, 0);
  }

  std::vector<StudyRecord> records;
  std::set<std::string> seen_ids;
  for (const auto& element : doc) {
    StudyRecord record = study_from_json(element, opts);
    if (!seen_ids.insert(record.study_id).second) {
      throw ValidationError("duplicate study_id '" + record.study_id + "'",
                            record.study_id, "study_id");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string double_to_string(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<StudyRecord> parse_batch(std::istream& in, BatchFormat format,
                                     const ParseOptions& opts) {
  if (!(opts.threshold > 0.0 && opts.threshold < 1.0)) {
    throw std::invalid_argument("frequency threshold must lie in (0, 1)");
  }
  return format == BatchFormat::Csv ? parse_csv(in, opts) : parse_json(in, opts);
}

StudyRecord study_from_json(const nlohmann::json& j, const ParseOptions& opts) {
  if (!j.is_object()) throw ParseError("study entry must be a JSON object", 0, 0);

  static const std::set<std::string> base_keys = {
      "study_id", "label", "measure", "point", "lower", "upper",
      "margin",   "direction", "frequency"};
  static const std::set<std::string> count_keys = {
      "events_exposed", "n_exposed", "events_control", "n_control"};

  const std::string study_id = j.value("study_id", std::string());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!base_keys.count(key) && !count_keys.count(key)) {
      throw ValidationError("study '" + study_id + "': unknown field '" + key + "'",
                            study_id, key);
    }
  }
  for (const auto& key : base_keys) {
    if (!j.contains(key)) {
      throw ValidationError("study '" + study_id + "': missing field '" + key + "'",
                            study_id, key);
    }
  }

  const auto str = [&](const char* key) {
    if (!j.at(key).is_string()) {
      throw ValidationError("study '" + study_id + "': field '" + key + "' must be a string",
                            study_id, key);
    }
    return j.at(key).get<std::string>();
  };
  const auto num = [&](const char* key) {
    if (!j.at(key).is_number()) {
      throw ValidationError("study '" + study_id + "': field '" + key + "' must be a number",
                            study_id, key);
    }
    return j.at(key).get<double>();
  };

  if (str("study_id").empty()) {
    throw ValidationError("study_id must be non-empty", study_id, "study_id");
  }

  Measure measure = Measure::RR;
  try {
    measure = measure_from_string(str("measure"));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "measure");
  }
  Direction direction = Direction::Preventive;
  try {
    direction = direction_from_string(str("direction"));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "direction");
  }

  const double margin = num("margin");
  if (!std::isfinite(margin) || margin <= 0.0) {
    throw ValidationError("study '" + study_id + "': margin must be finite and positive",
                          study_id, "margin");
  }

  const std::string freq_kind = str("frequency");
  OutcomeFrequency frequency;
  if (freq_kind == "rare" || freq_kind == "common") {
    for (const auto& key : count_keys) {
      if (j.contains(key)) {
        throw ValidationError("study '" + study_id +
                                  "': count fields are only valid with frequency=from_counts",
                              study_id, key);
      }
    }
    frequency = freq_kind == "rare" ? OutcomeFrequency::rare() : OutcomeFrequency::common();
  } else if (freq_kind == "from_counts") {
    const auto count = [&](const char* key) {
      if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw ValidationError("study '" + study_id + "': frequency=from_counts requires integer '" +
                                  key + "'",
                              study_id, key);
      }
      return j.at(key).get<long>();
    };
    try {
      frequency = OutcomeFrequency::from_counts(
          {count("events_exposed"), count("n_exposed")},
          {count("events_control"), count("n_control")}, opts.threshold);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "counts");
    }
  } else {
    throw ValidationError("study '" + study_id + "': unknown frequency '" + freq_kind + "'",
                          study_id, "frequency");
  }

  try {
    EffectSummary estimate(measure, num("point"), num("lower"), num("upper"));
    return {str("study_id"), str("label"), estimate, margin, direction, frequency};
  } catch (const std::domain_error& e) {
    throw ValidationError("study '" + study_id + "': " + e.what(), study_id, "bounds");
  }
}

NieResult analyze(const StudyRecord& record) {
  try {
    const RrScale conv = to_rr_scale(record.estimate, record.margin, record.frequency);
    const RiskRatio limit = governing_limit(conv.estimate, record.direction);
    const RiskRatio margin_rr(conv.margin, "margin");
    const Kappa kappa_limit = kappa(limit, margin_rr);
    const Kappa kappa_point =
        kappa(RiskRatio(conv.estimate.point, "point estimate"), margin_rr);
    const EvalueResult nie_limit = nie(kappa_limit, Basis::ConfidenceLimit);
    const EvalueResult nie_point = nie(kappa_point, Basis::PointEstimate);

    NieResult out{record.study_id,
                  conv.estimate,
                  conv.margin,
                  limit.value(),
                  kappa_limit.value(),
                  nie_limit.evalue,
                  kappa_point.value(),
                  nie_point.evalue,
                  false,
                  {}};
    out.non_inferiority_established = record.direction == Direction::Preventive
                                          ? limit.value() < conv.margin
                                          : limit.value() > conv.margin;
    if (conv.conversion_applied) out.flags.insert(ResultFlag::ConversionApplied);
    if (std::fabs(limit.value() - conv.margin) <=
        1e-12 * std::max(limit.value(), conv.margin)) {
      out.flags.insert(ResultFlag::Boundary);
    }
    const bool atypical = record.direction == Direction::Causative
                              ? record.margin > 1.0
                              : record.margin < 1.0;
    if (atypical) out.flags.insert(ResultFlag::AtypicalMargin);
    if (nie_limit.already_at_or_beyond_reference ||
        nie_point.already_at_or_beyond_reference) {
      out.flags.insert(ResultFlag::AlreadyAtOrBeyondReference);
    }
    return out;
  } catch (const std::domain_error& e) {
    throw std::domain_error("study '" + record.study_id + "': " + e.what());
  }
}

nlohmann::ordered_json to_json(const StudyRecord& record) {
  nlohmann::ordered_json j{
      {"study_id", record.study_id},
      {"label", record.label},
      {"measure", to_string(record.estimate.measure)},
      {"point", record.estimate.point},
      {"lower", record.estimate.lower},
      {"upper", record.estimate.upper},
      {"margin", record.margin},
      {"direction", to_string(record.direction)},
  };
  switch (record.frequency.kind) {
    case OutcomeFrequency::Kind::Rare:
      j["frequency"] = "rare";
      break;
    case OutcomeFrequency::Kind::Common:
      j["frequency"] = "common";
      break;
    case OutcomeFrequency::Kind::FromCounts:
      j["frequency"] = "from_counts";
      j["events_exposed"] = record.frequency.exposed->events;
      j["n_exposed"] = record.frequency.exposed->n;
      j["events_control"] = record.frequency.control->events;
      j["n_control"] = record.frequency.control->n;
      break;
  }
  return j;
}

nlohmann::ordered_json to_json(const NieResult& result) {
  nlohmann::ordered_json flags = nlohmann::ordered_json::array();
  for (ResultFlag f : result.flags) flags.push_back(to_string(f));
  return nlohmann::ordered_json{
      {"study_id", result.study_id},
      {"converted_estimate",
       {{"measure", to_string(result.converted_estimate.measure)},
        {"point", result.converted_estimate.point},
        {"lower", result.converted_estimate.lower},
        {"upper", result.converted_estimate.upper}}},
      {"converted_margin", result.converted_margin},
      {"governing_limit", result.governing_limit},
      {"kappa_limit", result.kappa_limit},
      {"nie_limit", result.nie_limit},
      {"kappa_point", result.kappa_point},
      {"nie_point", result.nie_point},
      {"non_inferiority_established", result.non_inferiority_established},
      {"flags", flags},
  };
}

nlohmann::ordered_json to_json(const std::vector<NieResult>& results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  return arr;
}

std::string to_csv(const std::vector<StudyRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << csv_escape(r.study_id) << ',' << csv_escape(r.label) << ','
        << to_string(r.estimate.measure) << ',' << double_to_string(r.estimate.point)
        << ',' << double_to_string(r.estimate.lower) << ','
        << double_to_string(r.estimate.upper) << ',' << double_to_string(r.margin)
        << ',' << to_string(r.direction) << ',';
    switch (r.frequency.kind) {
      case OutcomeFrequency::Kind::Rare:
        out << "rare,,,,";
        break;
      case OutcomeFrequency::Kind::Common:
        out << "common,,,,";
        break;
      case OutcomeFrequency::Kind::FromCounts:
        out << "from_counts," << r.frequency.exposed->events << ','
            << r.frequency.exposed->n << ',' << r.frequency.control->events << ','
            << r.frequency.control->n;
        break;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace nievalue
