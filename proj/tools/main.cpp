// Command-line surface for non-inferiority E-value sensitivity analysis.
//
// Subcommands:
//   compute  one study from flags -> text/JSON report
//   batch    CSV/JSON study file  -> JSON results + summary table
//   plot     bias-factor contour figure (standalone SVG)
//   verify   brute-force check of the bounding inequalities
//
// Exit codes: 0 success, 1 input/usage error, 2 computation error,
// 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nievalue/conversion.hpp"
#include "nievalue/oracle.hpp"
#include "nievalue/report.hpp"
#include "nievalue/sensitivity.hpp"
#include "nievalue/study.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitComputation = 2;
constexpr int kExitVerification = 3;

struct CommonOptions {
  std::string format = "text";
  std::string output;
  int round_digits = 2;
  double threshold = 0.15;
};

struct StudyFlags {
  std::string study_id = "study";
  std::string label;
  std::string measure;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double margin = 0.0;
  std::string direction;
  std::string frequency = "rare";
  long events_exposed = -1;
  long n_exposed = -1;
  long events_control = -1;
  long n_control = -1;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--format", opts->format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", opts->output, "Write output to this path instead of stdout");
  cmd->add_option("--round", opts->round_digits, "Decimal digits in text output")
      ->check(CLI::Range(0, 12))
      ->capture_default_str();
  cmd->add_option("--threshold", opts->threshold,
                  "Outcome prevalence at or above which the outcome counts as common")
      ->check(CLI::Range(1e-9, 0.999999))
      ->capture_default_str();
}

void add_study_flags(CLI::App* cmd, StudyFlags* flags, bool required) {
  auto* measure = cmd->add_option("--measure", flags->measure, "Effect measure (RR or HR)")
                      ->check(CLI::IsMember({"RR", "HR", "rr", "hr"}));
  auto* point = cmd->add_option("--point", flags->point, "Point estimate");
  auto* lower = cmd->add_option("--lower", flags->lower, "Lower 95% CI bound");
  auto* upper = cmd->add_option("--upper", flags->upper, "Upper 95% CI bound");
  auto* margin = cmd->add_option("--margin", flags->margin,
                                 "Non-inferiority margin, same scale as the estimate");
  auto* direction = cmd->add_option("--direction", flags->direction, "Hypothesis direction")
                        ->check(CLI::IsMember({"causative", "preventive"}));
  if (required) {
    for (auto* opt : {measure, point, lower, upper, margin, direction}) opt->required();
  }
  cmd->add_option("--frequency", flags->frequency,
                  "Outcome frequency: rare, common or from_counts")
      ->check(CLI::IsMember({"rare", "common", "from_counts"}))
      ->capture_default_str();
  cmd->add_option("--events-exposed", flags->events_exposed, "Events in the exposed arm");
  cmd->add_option("--n-exposed", flags->n_exposed, "Size of the exposed arm");
  cmd->add_option("--events-control", flags->events_control, "Events in the control arm");
  cmd->add_option("--n-control", flags->n_control, "Size of the control arm");
  cmd->add_option("--study-id", flags->study_id, "Identifier used in reports")
      ->capture_default_str();
  cmd->add_option("--label", flags->label, "Human-readable study label");
}

nievalue::StudyRecord record_from_flags(const StudyFlags& flags, double threshold) {
  nievalue::OutcomeFrequency freq;
  if (flags.frequency == "rare") {
    freq = nievalue::OutcomeFrequency::rare();
  } else if (flags.frequency == "common") {
    freq = nievalue::OutcomeFrequency::common();
  } else {
    if (flags.events_exposed < 0 || flags.n_exposed < 0 || flags.events_control < 0 ||
        flags.n_control < 0) {
      throw std::invalid_argument(
          "--frequency from_counts requires --events-exposed, --n-exposed, "
          "--events-control and --n-control");
    }
    freq = nievalue::OutcomeFrequency::from_counts(
        {flags.events_exposed, flags.n_exposed},
        {flags.events_control, flags.n_control}, threshold);
  }
  nievalue::EffectSummary estimate(nievalue::measure_from_string(flags.measure),
                                   flags.point, flags.lower, flags.upper);
  return {flags.study_id, flags.label, estimate, flags.margin,
          nievalue::direction_from_string(flags.direction), freq};
}

void write_output(const CommonOptions& opts, const std::string& content) {
  if (opts.output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output path '" + opts.output + "'");
  }
  out << content;
  if (!out) {
    throw std::invalid_argument("failed writing output path '" + opts.output + "'");
  }
}

nievalue::BatchFormat batch_format(const std::string& declared, const std::string& path) {
  if (declared == "csv") return nievalue::BatchFormat::Csv;
  if (declared == "json") return nievalue::BatchFormat::Json;
  // auto: decide by extension, CSV otherwise
  return std::filesystem::path(path).extension() == ".json" ? nievalue::BatchFormat::Json
                                                            : nievalue::BatchFormat::Csv;
}

std::vector<nievalue::StudyRecord> load_batch(const std::string& path,
                                              const std::string& declared_format,
                                              double threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read input path '" + path + "'");
  return nievalue::parse_batch(in, batch_format(declared_format, path), {threshold});
}

int run_compute(const StudyFlags& flags, const CommonOptions& opts) {
  const nievalue::StudyRecord record = record_from_flags(flags, opts.threshold);
  const nievalue::NieResult result = nievalue::analyze(record);
  if (opts.format == "json") {
    write_output(opts, nievalue::to_json(result).dump(2) + "\n");
  } else {
    write_output(opts, nievalue::text_report(result, opts.round_digits));
  }
  return kExitOk;
}

int run_batch(const std::string& input, const std::string& input_format,
              const CommonOptions& opts) {
  const auto records = load_batch(input, input_format, opts.threshold);
  std::vector<nievalue::NieResult> results;
  results.reserve(records.size());
  for (const auto& record : records) results.push_back(nievalue::analyze(record));

  const std::string json_text = nievalue::to_json(results).dump(2) + "\n";
  if (opts.format == "json") {
    // JSON on stdout; --output additionally persists it.
    std::cout << json_text;
    if (!opts.output.empty()) write_output(opts, json_text);
  } else {
    std::cout << nievalue::summary_table(records, results, opts.round_digits);
    if (!opts.output.empty()) write_output(opts, json_text);
  }
  return kExitOk;
}

int run_plot(const StudyFlags& flags, const std::string& input,
             const std::string& input_format, const std::string& wanted_id,
             const std::string& title, double axis_max, int cells,
             const CommonOptions& opts) {
  std::optional<nievalue::StudyRecord> record;
  if (!input.empty()) {
    for (auto& r : load_batch(input, input_format, opts.threshold)) {
      if (wanted_id.empty() || r.study_id == wanted_id) {
        record = std::move(r);
        break;
      }
    }
    if (!record) {
      throw std::invalid_argument("study '" + wanted_id + "' not found in '" + input + "'");
    }
  } else {
    record = record_from_flags(flags, opts.threshold);
  }

  const nievalue::NieResult result = nievalue::analyze(*record);
  const std::string plot_title = title.empty()
                                     ? (record->label.empty() ? record->study_id : record->label)
                                     : title;
  const nievalue::PlotSpec spec =
      nievalue::make_plot_spec(result, plot_title, axis_max, cells);
  write_output(opts, nievalue::render_svg(spec));
  return kExitOk;
}

int run_verify(long long n, std::uint64_t seed, int grid_resolution,
               const CommonOptions& opts) {
  const nievalue::BoundCheckReport bounds = nievalue::verify_bound(n, seed);
  const std::vector<nievalue::SharpnessCheck> sharpness =
      nievalue::sharpness_checks({1.5, 2.0, 3.0}, grid_resolution);

  bool pass = bounds.violations == 0;
  for (const auto& c : sharpness) pass = pass && c.pass;

  if (opts.format == "json") {
    write_output(opts, nievalue::verify_report_json(bounds, sharpness).dump(2) + "\n");
  } else {
    const std::string text =
        nievalue::verify_report_text(bounds, sharpness, opts.round_digits);
    write_output(opts, text);
  }
  if (!pass) {
    std::cerr << "verification failed: " << bounds.violations
              << " bound violation(s); worst scenario "
              << nievalue::to_json(bounds.worst_scenario).dump() << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-inferiority E-values (NIE) for unmeasured-confounding "
               "sensitivity analysis"};
  app.require_subcommand(1);

  CommonOptions compute_opts, batch_opts, plot_opts, verify_opts;
  StudyFlags compute_flags, plot_flags;

  auto* compute = app.add_subcommand(
      "compute", "Analyze one study supplied via flags");
  add_study_flags(compute, &compute_flags, /*required=*/true);
  add_common_options(compute, &compute_opts);

  std::string batch_input, batch_input_format = "auto";
  auto* batch = app.add_subcommand("batch", "Analyze a CSV/JSON file of studies");
  batch->add_option("--input", batch_input, "Path to the study file")
      ->required();
  batch->add_option("--input-format", batch_input_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  add_common_options(batch, &batch_opts);

  std::string plot_input, plot_input_format = "auto", plot_study_id, plot_title;
  double plot_axis_max = 0.0;
  int plot_cells = 60;
  auto* plot = app.add_subcommand(
      "plot", "Render the bias-factor contour figure for one study as SVG");
  add_study_flags(plot, &plot_flags, /*required=*/false);
  plot->add_option("--input", plot_input,
                   "Take the study from this batch file instead of flags");
  plot->add_option("--input-format", plot_input_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  plot->add_option("--plot-study-id", plot_study_id,
                   "study_id to pick from --input (default: first record)");
  plot->add_option("--title", plot_title, "Figure title (default: study label)");
  plot->add_option("--axis-max", plot_axis_max,
                   "Upper axis bound; 0 selects max(10, 1.5*NIE_point)")
      ->capture_default_str();
  plot->add_option("--cells", plot_cells, "Heatmap resolution per axis")
      ->check(CLI::Range(1, 400))
      ->capture_default_str();
  add_common_options(plot, &plot_opts);

  long long verify_n = 10000;
  std::uint64_t verify_seed = 42;
  int verify_grid = 200;
  auto* verify = app.add_subcommand(
      "verify", "Brute-force check of the bounding inequalities and sharpness");
  verify->add_option("--n", verify_n, "Number of random scenarios")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "Scenario generator seed")
      ->capture_default_str();
  verify->add_option("--grid-resolution", verify_grid,
                     "Grid points per probability axis in the sharpness search")
      ->check(CLI::Range(10, 2000))
      ->capture_default_str();
  add_common_options(verify, &verify_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (compute->parsed()) return run_compute(compute_flags, compute_opts);
    if (batch->parsed()) return run_batch(batch_input, batch_input_format, batch_opts);
    if (plot->parsed()) {
      const bool from_file = !plot_input.empty();
      if (!from_file) {
        for (const char* opt : {"--measure", "--point", "--lower", "--upper",
                                "--margin", "--direction"}) {
          if (plot->count(opt) == 0) {
            std::cerr << "plot: " << opt << " is required unless --input is given\n";
            return kExitInput;
          }
        }
      }
      return run_plot(plot_flags, plot_input, plot_input_format, plot_study_id,
                      plot_title, plot_axis_max, plot_cells, plot_opts);
    }
    if (verify->parsed()) return run_verify(verify_n, verify_seed, verify_grid, verify_opts);
  } catch (const nievalue::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nievalue::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitOk;
}
