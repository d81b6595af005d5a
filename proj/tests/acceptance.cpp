// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nievalue/contour.hpp"
#include "nievalue/conversion.hpp"
#include "nievalue/oracle.hpp"
#include "nievalue/report.hpp"
#include "nievalue/sensitivity.hpp"
#include "nievalue/study.hpp"

namespace fs = std::filesystem;
using namespace nievalue;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::printf("criterion %d %s: %s%s%s\n", criterion, pass ? "PASS" : "FAIL",
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

double rel_diff(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

std::vector<StudyRecord> load_fixture() {
  std::ifstream in(std::string(NIEVALUE_TEST_DATA_DIR) + "/table1.csv");
  if (!in) throw std::runtime_error("fixture table1.csv not readable");
  return parse_batch(in, BatchFormat::Csv);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Batch analysis of the four case studies reproduces the eight published
//    NIE values within +/-0.02, in under a second.
void criterion1() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream detail;
  try {
    const auto records = load_fixture();
    std::vector<NieResult> results;
    for (const auto& r : records) results.push_back(analyze(r));
    const double elapsed = seconds_since(start);

    const struct {
      const char* id;
      double nie_limit;
      double nie_point;
    } expected[] = {{"durand2024", 2.78, 3.66},
                    {"smeenk2025", 1.63, 2.00},
                    {"rydbeck2023", 1.34, 1.45},
                    {"zhong2024", 1.02, 2.53}};
    pass = results.size() == 4;
    for (int i = 0; i < 4 && pass; ++i) {
      pass = results[i].study_id == expected[i].id &&
             std::fabs(results[i].nie_limit - expected[i].nie_limit) <= 0.02 &&
             std::fabs(results[i].nie_point - expected[i].nie_point) <= 0.02;
      if (!pass) {
        detail << expected[i].id << " got " << results[i].nie_limit << "/"
               << results[i].nie_point;
      }
    }
    if (pass && elapsed >= 1.0) {
      pass = false;
      detail << "runtime " << elapsed << "s";
    } else if (pass) {
      detail << "8 NIE values within 0.02, " << elapsed << "s";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail << e.what();
  }
  report(1, "Table 1 replication", pass, detail.str());
}

// 2. hr_to_rr reproduces the in-text conversions within +/-0.01.
void criterion2() {
  const struct {
    double hr;
    double rr;
  } cases[] = {{1.38, 1.25},  {3.0, 2.12},  {0.91, 0.94}, {0.76, 0.83},
               {0.95, 0.97},  {1.329, 1.217}, {1.33, 1.218}, {0.69, 0.77}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    const double got = hr_to_rr(c.hr);
    if (std::fabs(got - c.rr) > 0.01) {
      pass = false;
      detail << "hr_to_rr(" << c.hr << ")=" << got << " wanted " << c.rr << "; ";
    }
  }
  if (pass) detail << "8 conversions within 0.01";
  report(2, "HR->RR conversion replication", pass, detail.str());
}

// 3. Classical reduction: the generalized pair, the classical formula and the
//    kappa route coincide at rr_true = 1, both directions, 1e-9 relative.
void criterion3() {
  bool pass = true;
  std::ostringstream detail;
  for (int i = 0; i < 1000 && pass; ++i) {
    const double x = 1.0 + 9.0 * i / 999.0;
    const double gen_c =
        generalized_evalue(RiskRatio(x), RiskRatio(1.0), Direction::Causative).evalue;
    const double cls_c = classical_evalue(RiskRatio(x), Direction::Causative).evalue;
    const double via_kappa = nie(kappa(RiskRatio(x), RiskRatio(1.0))).evalue;
    const double inv = 1.0 / x;
    const double gen_p =
        generalized_evalue(RiskRatio(inv), RiskRatio(1.0), Direction::Preventive).evalue;
    const double cls_p = classical_evalue(RiskRatio(inv), Direction::Preventive).evalue;
    const double via_kappa_p = nie(kappa(RiskRatio(inv), RiskRatio(1.0))).evalue;
    pass = rel_diff(gen_c, cls_c) <= 1e-9 && rel_diff(cls_c, via_kappa) <= 1e-9 &&
           rel_diff(gen_p, cls_p) <= 1e-9 && rel_diff(cls_p, via_kappa_p) <= 1e-9;
    if (!pass) detail << "x=" << x;
  }
  if (pass) detail << "1000 values, both directions, 1e-9 relative";
  report(3, "classical reduction", pass, detail.str());
}

// 4. Closure identity bias_factor(NIE, NIE) = kappa over [1, 50].
void criterion4() {
  bool pass = true;
  std::ostringstream detail;
  for (int i = 0; i < 1000 && pass; ++i) {
    const double kv = 1.0 + 49.0 * i / 999.0;
    const double e = nie(Kappa(kv)).evalue;
    const double back = bias_factor(RiskRatio(e), RiskRatio(e));
    pass = rel_diff(back, kv) <= 1e-9;
    if (!pass) detail << "kappa=" << kv << " back=" << back;
  }
  if (pass) detail << "1000 kappa values, 1e-9 relative";
  report(4, "closure identity", pass, detail.str());
}

// 5. Oracle: 10,000 seeded scenarios without a bound violation; grid-search
//    sharpness within 0.01 at caps 1.5/2/3, all in under 30 s.
void criterion5() {
  const auto start = Clock::now();
  bool pass = true;
  std::ostringstream detail;
  try {
    const BoundCheckReport bounds = verify_bound(10000, 42);
    pass = bounds.violations == 0;
    if (!pass) detail << bounds.violations << " violations";
    const auto sharp = sharpness_checks({1.5, 2.0, 3.0}, 200, 0.01);
    for (const auto& c : sharp) {
      if (!c.pass) {
        pass = false;
        detail << " cap " << c.cap << " gap " << c.gap << ";";
      }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 30.0) {
      pass = false;
      detail << " runtime " << elapsed << "s";
    }
    if (pass) {
      detail << "0 violations in " << bounds.checks << " checks, worst slack "
             << bounds.worst_slack << ", sharpness gaps";
      for (const auto& c : sharp) detail << " " << c.gap;
      detail << ", " << elapsed << "s";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail << e.what();
  }
  report(5, "oracle bound suite", pass, detail.str());
}

// 6. Every sampled contour point satisfies the contour identity at 1e-6
//    relative, and the equal point is (NIE, NIE).
void criterion6() {
  bool pass = true;
  std::ostringstream detail;
  for (double kv : {1.02, 1.34, 1.63, 2.12}) {
    const Kappa k(kv);
    const double e = nie(k).evalue;
    const ContourCurve curve = sample_contour(k, 200, std::max(10.0, 4.0 * e));
    if (rel_diff(curve.equal_point.rr_eu, e) > 1e-15 ||
        rel_diff(curve.equal_point.rr_ud, e) > 1e-15) {
      pass = false;
      detail << "equal point off for kappa=" << kv << "; ";
    }
    for (const auto& p : curve.points) {
      const double b = bias_factor(RiskRatio(p.rr_eu), RiskRatio(p.rr_ud));
      if (rel_diff(b, kv) > 1e-6) {
        pass = false;
        detail << "kappa=" << kv << " point (" << p.rr_eu << "," << p.rr_ud << "); ";
        break;
      }
    }
  }
  if (pass) detail << "4 contours x 200+ points, 1e-6 relative";
  report(6, "contour identity", pass, detail.str());
}

// 7. Invariance suite: exact reciprocal-coding invariance of kappa on pairs
//    with exactly representable reciprocals, hr_to_rr reciprocal symmetry at
//    1e-9, strict NIE monotonicity.
void criterion7() {
  bool pass = true;
  std::ostringstream detail;
  for (int i = 0; i < 1000 && pass; ++i) {
    const double c = std::ldexp(1.0, (i % 41) - 20);
    const double m = std::ldexp(1.0, ((i / 41) % 41) - 20);
    pass = kappa(RiskRatio(c), RiskRatio(m)).value() ==
           kappa(RiskRatio(1.0 / c), RiskRatio(1.0 / m)).value();
    if (!pass) detail << "kappa reciprocal at c=" << c << " m=" << m;
  }
  for (int i = 0; i <= 999 && pass; ++i) {
    const double h =
        std::exp(std::log(0.05) + (std::log(20.0) - std::log(0.05)) * i / 999.0);
    pass = std::fabs(hr_to_rr(h) * hr_to_rr(1.0 / h) - 1.0) <= 1e-9;
    if (!pass) detail << "hr recip at h=" << h;
  }
  double prev = nie(Kappa(1.0)).evalue;
  for (int i = 1; i < 1000 && pass; ++i) {
    const double cur = nie(Kappa(1.0 + 49.0 * i / 999.0)).evalue;
    pass = cur > prev;
    if (!pass) detail << "monotonicity at i=" << i;
    prev = cur;
  }
  if (pass) detail << "kappa exact, hr 1e-9, NIE strictly monotone (1000 each)";
  report(7, "invariance suite", pass, detail.str());
}

// 8. Byte-identical JSON and SVG from two CLI runs of batch + plot on the
//    Table 1 fixture.
void criterion8() {
  bool pass = true;
  std::ostringstream detail;
  try {
    const fs::path dir = fs::temp_directory_path() / "nievalue_acceptance";
    fs::create_directories(dir);
    const std::string fixture = std::string(NIEVALUE_TEST_DATA_DIR) + "/table1.csv";
    const auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream os;
      os << in.rdbuf();
      return os.str();
    };
    const auto run = [](const std::string& args) {
      const std::string cmd =
          std::string(NIEVALUE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
      return std::system(cmd.c_str());
    };

    std::string json[2], svg[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path jpath = dir / ("batch" + std::to_string(i) + ".json");
      const fs::path spath = dir / ("plot" + std::to_string(i) + ".svg");
      if (run("batch --input " + fixture + " --output " + jpath.string()) != 0) {
        throw std::runtime_error("batch run failed");
      }
      if (run("plot --input " + fixture + " --plot-study-id durand2024 --output " +
              spath.string()) != 0) {
        throw std::runtime_error("plot run failed");
      }
      json[i] = slurp(jpath);
      svg[i] = slurp(spath);
    }
    pass = !json[0].empty() && json[0] == json[1] && !svg[0].empty() && svg[0] == svg[1];
    if (pass) {
      detail << "json " << json[0].size() << " bytes, svg " << svg[0].size()
             << " bytes, identical across runs";
    } else {
      detail << "outputs differ between runs";
    }
  } catch (const std::exception& e) {
    pass = false;
    detail << e.what();
  }
  report(8, "I/O determinism", pass, detail.str());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures == 0) {
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
