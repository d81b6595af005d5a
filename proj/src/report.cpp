#include "nievalue/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nievalue/sensitivity.hpp"

namespace nievalue {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string scenario_line(const ConfounderScenario& s) {
  std::ostringstream os;
  os << "p(U|E=1)=" << compact(s.p_u_given_e1) << " p(U|E=0)=" << compact(s.p_u_given_e0)
     << " r(D|U=1)=" << compact(s.risk_d_given_u1)
     << " r(D|U=0)=" << compact(s.risk_d_given_u0);
  return os.str();
}

// Largest "nice" tick step (1/2/2.5/5 x 10^k) giving at most six ticks.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

PlotSpec make_plot_spec(const NieResult& result, const std::string& title,
                        double axis_max, int heatmap_cells) {
  PlotSpec spec;
  spec.title = title.empty() ? result.study_id : title;
  spec.axis_max = axis_max > 1.0 ? axis_max : std::max(10.0, 1.5 * result.nie_point);
  spec.heatmap_cells = heatmap_cells;

  const Kappa k_limit(result.kappa_limit);
  const Kappa k_point(result.kappa_point);
  const int samples = 240;

  spec.curves.push_back({sample_contour(k_limit, samples, spec.axis_max),
                         CurveStyle::SolidLimit, "CI limit"});
  spec.markers.push_back({result.nie_limit, result.nie_limit,
                          "NIE " + fixed(result.nie_limit, 2) + " (CI limit)"});

  const bool coincident = std::fabs(result.kappa_point - result.kappa_limit) <=
                          1e-12 * std::max(result.kappa_point, result.kappa_limit);
  if (!coincident) {
    spec.curves.push_back({sample_contour(k_point, samples, spec.axis_max),
                           CurveStyle::DashedPoint, "point estimate"});
    spec.markers.push_back({result.nie_point, result.nie_point,
                            "NIE " + fixed(result.nie_point, 2) + " (point)"});
  }
  return spec;
}

std::string render_svg(const PlotSpec& spec) {
  // Fixed geometry: 520x520 plot area inside a 660x620 canvas.
  const double px0 = 90, px1 = 610, py0 = 50, py1 = 570;
  const double lo = 1.0, hi = spec.axis_max;
  const auto sx = [&](double v) { return px0 + (v - lo) / (hi - lo) * (px1 - px0); };
  const auto sy = [&](double v) { return py1 - (v - lo) / (hi - lo) * (py1 - py0); };

  const double b_max = hi * hi / (2.0 * hi - 1.0);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"620\" "
         "viewBox=\"0 0 660 620\">\n";
  svg << "<desc>Bias-factor contour plot. Shading: linear grayscale of "
         "B(RR_EU, RR_UD) = RR_EU*RR_UD/(RR_EU+RR_UD-1) from #f7f7f7 at B=1 to "
         "#4d4d4d at B=" << compact(b_max) << " (value at the axis corner). Axes span [1, "
      << compact(hi) << "]. Solid contour: confidence-limit kappa; dashed contour: "
         "point-estimate kappa; markers sit at the equal points (NIE, NIE).</desc>\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"660\" height=\"620\" fill=\"#ffffff\"/>\n";

  // Heatmap of B over the axis square, shaded cell by cell.
  const int cells = std::max(1, spec.heatmap_cells);
  const double step = (hi - lo) / cells;
  const double cell_px = (px1 - px0) / cells;
  svg << "<g shape-rendering=\"crispEdges\">\n";
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const double x = lo + (i + 0.5) * step;
      const double y = lo + (j + 0.5) * step;
      const double b = x * y / (x + y - 1.0);
      const double t = std::clamp((b - 1.0) / (b_max - 1.0), 0.0, 1.0);
      const int gray = static_cast<int>(std::lround(247.0 - t * 170.0));
      char fill[8];
      std::snprintf(fill, sizeof(fill), "#%02x%02x%02x", gray, gray, gray);
      svg << "<rect x=\"" << coord(px0 + i * cell_px) << "\" y=\""
          << coord(py1 - (j + 1) * cell_px) << "\" width=\"" << coord(cell_px)
          << "\" height=\"" << coord(cell_px) << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  svg << "</g>\n";

  // Contours, clipped to the axis square.
  for (const auto& curve : spec.curves) {
    const double kv = curve.contour.kappa.value();
    std::vector<ContourPoint> pts;
    bool clipped = false;
    for (const auto& p : curve.contour.points) {
      if (p.rr_ud > hi) {
        clipped = true;
        continue;
      }
      if (p.rr_eu > hi) continue;
      pts.push_back(p);
    }
    if (clipped && kv > 1.0 && hi > kv) {
      // Entry point where the steep branch crosses the top edge.
      pts.insert(pts.begin(), {kv * (hi - 1.0) / (hi - kv), hi});
    }
    if (pts.size() < 2) continue;
    svg << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"";
    if (curve.style == CurveStyle::DashedPoint) svg << " stroke-dasharray=\"7 5\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) svg << ' ';
      svg << coord(sx(pts[i].rr_eu)) << ',' << coord(sy(pts[i].rr_ud));
    }
    svg << "\"/>\n";
  }

  // Equal-point markers with labels.
  for (const auto& m : spec.markers) {
    if (m.x > hi || m.y > hi) continue;
    svg << "<circle cx=\"" << coord(sx(m.x)) << "\" cy=\"" << coord(sy(m.y))
        << "\" r=\"4\" fill=\"#000000\"/>\n";
    svg << "<text x=\"" << coord(sx(m.x) + 8) << "\" y=\"" << coord(sy(m.y) - 6)
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << m.label << "</text>\n";
  }

  // Frame, ticks, axis titles.
  svg << "<rect x=\"" << coord(px0) << "\" y=\"" << coord(py0) << "\" width=\""
      << coord(px1 - px0) << "\" height=\"" << coord(py1 - py0)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  const double ts = tick_step(hi - lo);
  for (double v = lo; v <= hi + 1e-9; v += ts) {
    const double vx = sx(std::min(v, hi));
    const double vy = sy(std::min(v, hi));
    svg << "<line x1=\"" << coord(vx) << "\" y1=\"" << coord(py1) << "\" x2=\""
        << coord(vx) << "\" y2=\"" << coord(py1 + 5) << "\" stroke=\"#000000\"/>\n";
    svg << "<text x=\"" << coord(vx) << "\" y=\"" << coord(py1 + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << compact(std::min(v, hi)) << "</text>\n";
    svg << "<line x1=\"" << coord(px0 - 5) << "\" y1=\"" << coord(vy) << "\" x2=\""
        << coord(px0) << "\" y2=\"" << coord(vy) << "\" stroke=\"#000000\"/>\n";
    svg << "<text x=\"" << coord(px0 - 9) << "\" y=\"" << coord(vy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << compact(std::min(v, hi)) << "</text>\n";
  }
  svg << "<text x=\"" << coord((px0 + px1) / 2) << "\" y=\"608\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">RR_EU</text>\n";
  svg << "<text x=\"22\" y=\"" << coord((py0 + py1) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 22 " << coord((py0 + py1) / 2) << ")\">RR_UD</text>\n";
  if (!spec.title.empty()) {
    svg << "<text x=\"" << coord((px0 + px1) / 2)
        << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" << spec.title << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string text_report(const NieResult& result, int round_digits) {
  const int d = round_digits;
  std::ostringstream os;
  os << "study                : " << result.study_id << "\n";
  os << "rr scale             : RR " << fixed(result.converted_estimate.point, d)
     << " [" << fixed(result.converted_estimate.lower, d) << ", "
     << fixed(result.converted_estimate.upper, d) << "], margin "
     << fixed(result.converted_margin, d) << "\n";
  os << "governing limit      : " << fixed(result.governing_limit, d) << "\n";
  os << "kappa                : limit " << fixed(result.kappa_limit, d) << ", point "
     << fixed(result.kappa_point, d) << "\n";
  os << "NIE                  : limit " << fixed(result.nie_limit, d) << ", point "
     << fixed(result.nie_point, d) << "\n";
  os << "non-inferiority      : "
     << (result.non_inferiority_established ? "established" : "not established")
     << "\n";
  os << "flags                : ";
  if (result.flags.empty()) {
    os << "(none)";
  } else {
    bool first = true;
    for (ResultFlag f : result.flags) {
      if (!first) os << ", ";
      os << to_string(f);
      first = false;
    }
  }
  os << "\n";
  return os.str();
}

std::string summary_table(const std::vector<StudyRecord>& records,
                          const std::vector<NieResult>& results, int round_digits) {
  const int d = round_digits;
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"study", "estimate (95% CI); margin", "NIE (CI limit)", "NIE (point)"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const StudyRecord& rec = records.at(i);
    const NieResult& res = results[i];
    std::string est = to_string(rec.estimate.measure) + " " + fixed(rec.estimate.point, d) +
                      " (" + fixed(rec.estimate.lower, d) + ", " +
                      fixed(rec.estimate.upper, d) + "); " + fixed(rec.margin, d);
    rows.push_back({rec.study_id, est, fixed(res.nie_limit, d), fixed(res.nie_point, d)});
  }

  std::array<std::size_t, 4> width{};
  for (const auto& row : rows) {
    for (int c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < 4; ++c) {
      os << rows[r][c] << std::string(width[c] - rows[r][c].size(), ' ');
      os << (c == 3 ? "" : "  ");
    }
    os << "\n";
    if (r == 0) {
      os << std::string(width[0] + width[1] + width[2] + width[3] + 6, '-') << "\n";
    }
  }
  return os.str();
}

nlohmann::ordered_json to_json(const ConfounderScenario& s) {
  return nlohmann::ordered_json{{"p_u_given_e1", s.p_u_given_e1},
                                {"p_u_given_e0", s.p_u_given_e0},
                                {"risk_d_given_u1", s.risk_d_given_u1},
                                {"risk_d_given_u0", s.risk_d_given_u0}};
}

nlohmann::ordered_json verify_report_json(const BoundCheckReport& bounds,
                                          const std::vector<SharpnessCheck>& sharpness) {
  nlohmann::ordered_json sharp = nlohmann::ordered_json::array();
  bool sharp_pass = true;
  for (const auto& c : sharpness) {
    sharp_pass = sharp_pass && c.pass;
    sharp.push_back({{"cap", c.cap},
                     {"grid_resolution", c.grid_resolution},
                     {"bias_factor", c.bias_factor_at_caps},
                     {"attained", c.attained},
                     {"gap", c.gap},
                     {"witness", to_json(c.witness)},
                     {"pass", c.pass}});
  }
  return nlohmann::ordered_json{
      {"n_scenarios", bounds.n_scenarios},
      {"seed", bounds.seed},
      {"checks", bounds.checks},
      {"violations", bounds.violations},
      {"worst_slack", bounds.worst_slack},
      {"worst_scenario", to_json(bounds.worst_scenario)},
      {"sharpness", sharp},
      {"passed", bounds.violations == 0 && sharp_pass},
  };
}

std::string verify_report_text(const BoundCheckReport& bounds,
                               const std::vector<SharpnessCheck>& sharpness,
                               int round_digits) {
  std::ostringstream os;
  os << "scenarios            : " << bounds.n_scenarios << " (seed " << bounds.seed
     << ")\n";
  os << "bound checks         : " << bounds.checks << "\n";
  os << "violations           : " << bounds.violations << "\n";
  os << "worst slack          : " << compact(bounds.worst_slack) << "\n";
  os << "worst scenario       : " << scenario_line(bounds.worst_scenario) << "\n";
  bool all_pass = bounds.violations == 0;
  for (const auto& c : sharpness) {
    all_pass = all_pass && c.pass;
    os << "sharpness cap " << fixed(c.cap, round_digits) << "   : B="
       << fixed(c.bias_factor_at_caps, 4) << " attained=" << fixed(c.attained, 4)
       << " gap=" << fixed(c.gap, 4) << (c.pass ? " pass" : " FAIL") << "\n";
  }
  os << "verdict              : " << (all_pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace nievalue
