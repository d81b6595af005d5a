#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nievalue/contour.hpp"
#include "nievalue/oracle.hpp"
#include "nievalue/study.hpp"

namespace nievalue {

enum class CurveStyle { SolidLimit, DashedPoint };

/// Figure description: bias-factor heatmap with kappa-contours overlaid.
/// The solid curve belongs to the confidence-limit kappa, the dashed one to
/// the point-estimate kappa; markers sit at the equal points (NIE, NIE).
struct PlotSpec {
  struct Curve {
    ContourCurve contour;
    CurveStyle style;
    std::string label;
  };
  struct Marker {
    double x;
    double y;
    std::string label;
  };

  std::vector<Curve> curves;
  std::vector<Marker> markers;
  double axis_max = 10.0;  // both axes span [1, axis_max]
  int heatmap_cells = 60;
  std::string title;
};

/// Curves and markers for a study result. axis_max <= 0 selects the default
/// max(10, 1.5 * nie_point); coincident kappas yield a single solid curve.
PlotSpec make_plot_spec(const NieResult& result, const std::string& title = "",
                        double axis_max = 0.0, int heatmap_cells = 60);

/// Standalone deterministic SVG (no timestamps, no external resources).
/// The grayscale mapping of B is documented in the <desc> element.
std::string render_svg(const PlotSpec& spec);

std::string text_report(const NieResult& result, int round_digits = 2);

/// Fixed-width summary table over a batch: estimate, margin, and both NIEs.
std::string summary_table(const std::vector<StudyRecord>& records,
                          const std::vector<NieResult>& results,
                          int round_digits = 2);

nlohmann::ordered_json to_json(const ConfounderScenario& s);
nlohmann::ordered_json verify_report_json(const BoundCheckReport& bounds,
                                          const std::vector<SharpnessCheck>& sharpness);
std::string verify_report_text(const BoundCheckReport& bounds,
                               const std::vector<SharpnessCheck>& sharpness,
                               int round_digits = 2);

}  // namespace nievalue
