#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nievalue/contour.hpp"
#include "nievalue/conversion.hpp"
#include "nievalue/oracle.hpp"
#include "nievalue/report.hpp"
#include "nievalue/sensitivity.hpp"
#include "nievalue/study.hpp"

namespace py = pybind11;
using namespace nievalue;

namespace {

std::vector<std::string> flag_names(const std::set<ResultFlag>& flags) {
  std::vector<std::string> names;
  for (ResultFlag f : flags) names.push_back(to_string(f));
  return names;
}

OutcomeFrequency frequency_from_args(const std::string& kind,
                                     py::object events_exposed, py::object n_exposed,
                                     py::object events_control, py::object n_control,
                                     double threshold) {
  if (kind == "rare") return OutcomeFrequency::rare();
  if (kind == "common") return OutcomeFrequency::common();
  if (kind != "from_counts") {
    throw std::invalid_argument("frequency must be rare, common or from_counts");
  }
  for (const auto& [name, obj] :
       {std::pair<const char*, py::object&>{"events_exposed", events_exposed},
        {"n_exposed", n_exposed},
        {"events_control", events_control},
        {"n_control", n_control}}) {
    if (obj.is_none()) {
      throw std::invalid_argument(std::string("from_counts requires ") + name);
    }
  }
  return OutcomeFrequency::from_counts(
      {events_exposed.cast<long>(), n_exposed.cast<long>()},
      {events_control.cast<long>(), n_control.cast<long>()}, threshold);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-inferiority E-values (NIE) for unmeasured-confounding "
            "sensitivity analysis";

  py::enum_<Direction>(m, "Direction")
      .value("Causative", Direction::Causative)
      .value("Preventive", Direction::Preventive);
  py::enum_<Basis>(m, "Basis")
      .value("PointEstimate", Basis::PointEstimate)
      .value("ConfidenceLimit", Basis::ConfidenceLimit);
  py::enum_<Measure>(m, "Measure")
      .value("RR", Measure::RR)
      .value("HR", Measure::HR);
  py::enum_<Frequency>(m, "Frequency")
      .value("Rare", Frequency::Rare)
      .value("Common", Frequency::Common);
  py::enum_<ContourRegion>(m, "ContourRegion")
      .value("Insufficient", ContourRegion::Insufficient)
      .value("OnContour", ContourRegion::OnContour)
      .value("Sufficient", ContourRegion::Sufficient);

  py::class_<EvalueResult>(m, "EvalueResult")
      .def_readonly("evalue", &EvalueResult::evalue)
      .def_readonly("basis", &EvalueResult::basis)
      .def_property_readonly("kappa",
                             [](const EvalueResult& r) { return r.kappa.value(); })
      .def_readonly("already_at_or_beyond_reference",
                    &EvalueResult::already_at_or_beyond_reference)
      .def("__repr__", [](const EvalueResult& r) {
        std::ostringstream os;
        os << "EvalueResult(evalue=" << r.evalue << ", kappa=" << r.kappa.value()
           << ")";
        return os.str();
      });

  py::class_<EffectSummary>(m, "EffectSummary")
      .def(py::init<Measure, double, double, double>(), py::arg("measure"),
           py::arg("point"), py::arg("lower"), py::arg("upper"))
      .def_readonly("measure", &EffectSummary::measure)
      .def_readonly("point", &EffectSummary::point)
      .def_readonly("lower", &EffectSummary::lower)
      .def_readonly("upper", &EffectSummary::upper);

  py::class_<OutcomeFrequency>(m, "OutcomeFrequency")
      .def_static("rare", &OutcomeFrequency::rare)
      .def_static("common", &OutcomeFrequency::common)
      .def_static(
          "from_counts",
          [](long events_exposed, long n_exposed, long events_control, long n_control,
             double threshold) {
            return OutcomeFrequency::from_counts({events_exposed, n_exposed},
                                                 {events_control, n_control}, threshold);
          },
          py::arg("events_exposed"), py::arg("n_exposed"), py::arg("events_control"),
          py::arg("n_control"), py::arg("threshold") = 0.15);

  py::class_<StudyRecord>(m, "StudyRecord")
      .def(py::init([](const std::string& study_id, const std::string& label,
                       const std::string& measure, double point, double lower,
                       double upper, double margin, const std::string& direction,
                       const std::string& frequency, py::object events_exposed,
                       py::object n_exposed, py::object events_control,
                       py::object n_control, double threshold) {
             EffectSummary estimate(measure_from_string(measure), point, lower, upper);
             return StudyRecord{study_id,
                                label,
                                estimate,
                                margin,
                                direction_from_string(direction),
                                frequency_from_args(frequency, events_exposed, n_exposed,
                                                    events_control, n_control,
                                                    threshold)};
           }),
           py::arg("study_id"), py::arg("label") = "", py::arg("measure") = "RR",
           py::arg("point") = 1.0, py::arg("lower") = 1.0, py::arg("upper") = 1.0,
           py::arg("margin") = 1.0, py::arg("direction") = "preventive",
           py::arg("frequency") = "rare", py::arg("events_exposed") = py::none(),
           py::arg("n_exposed") = py::none(), py::arg("events_control") = py::none(),
           py::arg("n_control") = py::none(), py::arg("threshold") = 0.15)
      .def_readonly("study_id", &StudyRecord::study_id)
      .def_readonly("label", &StudyRecord::label)
      .def_readonly("estimate", &StudyRecord::estimate)
      .def_readonly("margin", &StudyRecord::margin)
      .def_readonly("direction", &StudyRecord::direction);

  py::class_<NieResult>(m, "NieResult")
      .def_readonly("study_id", &NieResult::study_id)
      .def_readonly("converted_estimate", &NieResult::converted_estimate)
      .def_readonly("converted_margin", &NieResult::converted_margin)
      .def_readonly("governing_limit", &NieResult::governing_limit)
      .def_readonly("kappa_limit", &NieResult::kappa_limit)
      .def_readonly("nie_limit", &NieResult::nie_limit)
      .def_readonly("kappa_point", &NieResult::kappa_point)
      .def_readonly("nie_point", &NieResult::nie_point)
      .def_readonly("non_inferiority_established",
                    &NieResult::non_inferiority_established)
      .def_property_readonly("flags",
                             [](const NieResult& r) { return flag_names(r.flags); })
      .def("to_json", [](const NieResult& r) { return to_json(r).dump(2); })
      .def("__repr__", [](const NieResult& r) {
        std::ostringstream os;
        os << "NieResult(study_id='" << r.study_id << "', nie_limit=" << r.nie_limit
           << ", nie_point=" << r.nie_point << ")";
        return os.str();
      });

  py::class_<ContourPoint>(m, "ContourPoint")
      .def_readonly("rr_eu", &ContourPoint::rr_eu)
      .def_readonly("rr_ud", &ContourPoint::rr_ud)
      .def("__repr__", [](const ContourPoint& p) {
        std::ostringstream os;
        os << "(" << p.rr_eu << ", " << p.rr_ud << ")";
        return os.str();
      });

  py::class_<ContourCurve>(m, "ContourCurve")
      .def_property_readonly("kappa",
                             [](const ContourCurve& c) { return c.kappa.value(); })
      .def_readonly("points", &ContourCurve::points)
      .def_readonly("equal_point", &ContourCurve::equal_point);

  py::class_<ConfounderScenario>(m, "ConfounderScenario")
      .def(py::init<double, double, double, double>(), py::arg("p_u_given_e1"),
           py::arg("p_u_given_e0"), py::arg("risk_d_given_u1"),
           py::arg("risk_d_given_u0"))
      .def_readonly("p_u_given_e1", &ConfounderScenario::p_u_given_e1)
      .def_readonly("p_u_given_e0", &ConfounderScenario::p_u_given_e0)
      .def_readonly("risk_d_given_u1", &ConfounderScenario::risk_d_given_u1)
      .def_readonly("risk_d_given_u0", &ConfounderScenario::risk_d_given_u0);

  py::class_<ScenarioAssociations>(m, "ScenarioAssociations")
      .def_readonly("rr_eu", &ScenarioAssociations::rr_eu)
      .def_readonly("rr_ud", &ScenarioAssociations::rr_ud)
      .def_readonly("rr_obs", &ScenarioAssociations::rr_obs);

  py::class_<GridSearchResult>(m, "GridSearchResult")
      .def_readonly("max_rr", &GridSearchResult::max_rr)
      .def_readonly("argmax", &GridSearchResult::argmax)
      .def_readonly("scenarios_evaluated", &GridSearchResult::scenarios_evaluated);

  py::class_<BoundCheckReport>(m, "BoundCheckReport")
      .def_readonly("n_scenarios", &BoundCheckReport::n_scenarios)
      .def_readonly("seed", &BoundCheckReport::seed)
      .def_readonly("checks", &BoundCheckReport::checks)
      .def_readonly("violations", &BoundCheckReport::violations)
      .def_readonly("worst_slack", &BoundCheckReport::worst_slack)
      .def_readonly("worst_scenario", &BoundCheckReport::worst_scenario);

  py::class_<SufficiencyProbe>(m, "SufficiencyProbe")
      .def_readonly("cap_eu", &SufficiencyProbe::cap_eu)
      .def_readonly("cap_ud", &SufficiencyProbe::cap_ud)
      .def_readonly("bias_factor_at_caps", &SufficiencyProbe::bias_factor_at_caps)
      .def_readonly("attained", &SufficiencyProbe::attained)
      .def_readonly("expect_sufficient", &SufficiencyProbe::expect_sufficient)
      .def_readonly("pass_", &SufficiencyProbe::pass);

  py::class_<SufficiencyReport>(m, "SufficiencyReport")
      .def_readonly("kappa", &SufficiencyReport::kappa)
      .def_readonly("grid_resolution", &SufficiencyReport::grid_resolution)
      .def_readonly("probes", &SufficiencyReport::probes)
      .def_readonly("all_pass", &SufficiencyReport::all_pass);

  m.def(
      "bias_factor",
      [](double rr_eu, double rr_ud) {
        return bias_factor(RiskRatio(rr_eu, "rr_eu"), RiskRatio(rr_ud, "rr_ud"));
      },
      py::arg("rr_eu"), py::arg("rr_ud"),
      "Bounding factor B = rr_eu*rr_ud/(rr_eu+rr_ud-1), both arguments >= 1.");
  m.def(
      "classical_evalue",
      [](double rr_obs, Direction direction, Basis basis) {
        return classical_evalue(RiskRatio(rr_obs, "rr_obs"), direction, basis);
      },
      py::arg("rr_obs"), py::arg("direction"),
      py::arg("basis") = Basis::PointEstimate);
  m.def(
      "generalized_evalue",
      [](double rr_obs, double rr_true, Direction direction, Basis basis) {
        return generalized_evalue(RiskRatio(rr_obs, "rr_obs"),
                                  RiskRatio(rr_true, "rr_true"), direction, basis);
      },
      py::arg("rr_obs"), py::arg("rr_true"), py::arg("direction"),
      py::arg("basis") = Basis::PointEstimate);
  m.def(
      "kappa",
      [](double c, double m_) {
        return kappa(RiskRatio(c, "confidence limit"), RiskRatio(m_, "margin")).value();
      },
      py::arg("c"), py::arg("m"),
      "Multiplicative distance max(c/m, m/c) between limit and margin.");
  m.def(
      "nie",
      [](double kappa_value, Basis basis) { return nie(Kappa(kappa_value), basis); },
      py::arg("kappa"), py::arg("basis") = Basis::ConfidenceLimit,
      "Non-inferiority E-value kappa + sqrt(kappa*(kappa-1)).");
  m.def(
      "governing_limit",
      [](const EffectSummary& estimate, Direction direction) {
        return governing_limit(estimate, direction).value();
      },
      py::arg("estimate"), py::arg("direction"));
  m.def("hr_to_rr", &hr_to_rr, py::arg("hr"),
        "Approximate RR implied by a hazard ratio for a common outcome.");
  m.def("classify_frequency", &classify_frequency, py::arg("frequency"));
  m.def(
      "to_rr_scale",
      [](const EffectSummary& estimate, double margin, const OutcomeFrequency& freq) {
        const RrScale out = to_rr_scale(estimate, margin, freq);
        return py::make_tuple(out.estimate, out.margin, out.conversion_applied);
      },
      py::arg("estimate"), py::arg("margin"), py::arg("frequency"),
      "Returns (estimate_rr, margin_rr, conversion_applied).");
  m.def(
      "contour_rr_ud",
      [](double kappa_value, double rr_eu) {
        return contour_rr_ud(Kappa(kappa_value), rr_eu);
      },
      py::arg("kappa"), py::arg("rr_eu"));
  m.def(
      "sample_contour",
      [](double kappa_value, int n_points, double rr_eu_max) {
        const Kappa k(kappa_value);
        return sample_contour(k, n_points,
                              rr_eu_max > 0 ? rr_eu_max : default_rr_eu_max(k));
      },
      py::arg("kappa"), py::arg("n_points") = 200, py::arg("rr_eu_max") = 0.0);
  m.def(
      "classify_point",
      [](double kappa_value, double rr_eu, double rr_ud) {
        return classify_point(Kappa(kappa_value), rr_eu, rr_ud);
      },
      py::arg("kappa"), py::arg("rr_eu"), py::arg("rr_ud"));
  m.def("observed_rr", &observed_rr, py::arg("scenario"));
  m.def("associations", &associations, py::arg("scenario"));
  m.def("max_observed_rr", &max_observed_rr, py::arg("cap_eu"), py::arg("cap_ud"),
        py::arg("grid_resolution") = 200);
  m.def("verify_bound", &verify_bound, py::arg("n_random") = 10000,
        py::arg("seed") = 42);
  m.def(
      "verify_nie_sufficiency",
      [](double kappa_value, int grid_resolution) {
        return verify_nie_sufficiency(Kappa(kappa_value), grid_resolution);
      },
      py::arg("kappa"), py::arg("grid_resolution") = 100);
  m.def("analyze", &analyze, py::arg("record"),
        "Full pipeline: conversion, governing limit, kappa and NIE values.");
  m.def(
      "analyze_batch_csv",
      [](const std::string& text, double threshold) {
        std::istringstream in(text);
        std::vector<NieResult> results;
        for (const auto& record : parse_batch(in, BatchFormat::Csv, {threshold})) {
          results.push_back(analyze(record));
        }
        return results;
      },
      py::arg("csv_text"), py::arg("threshold") = 0.15,
      "Parse CSV text (header required) and analyze every row.");
  m.def(
      "study_svg",
      [](const NieResult& result, const std::string& title, double axis_max,
         int cells) { return render_svg(make_plot_spec(result, title, axis_max, cells)); },
      py::arg("result"), py::arg("title") = "", py::arg("axis_max") = 0.0,
      py::arg("cells") = 60,
      "Standalone SVG of the bias-factor contours for a study result.");

  py::register_exception<ParseError>(m, "StudyParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "StudyValidationError", PyExc_ValueError);
}
