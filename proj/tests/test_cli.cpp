#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(NIEVALUE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string fixture() { return std::string(NIEVALUE_TEST_DATA_DIR) + "/table1.csv"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nievalue_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("compute matches the published case") {
  const RunResult r = run_cli(
      "compute --measure HR --point 0.95 --lower 0.89 --upper 1.00 --margin 1.10 "
      "--direction preventive --frequency common");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("1.34") != std::string::npos);
  CHECK(r.out.find("1.45") != std::string::npos);
  CHECK(r.out.find("established") != std::string::npos);
}

TEST_CASE("compute boundary study") {
  const RunResult r = run_cli(
      "compute --measure RR --point 1.0 --lower 0.8 --upper 1.25 --margin 1.25 "
      "--direction preventive");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("limit 1.00") != std::string::npos);
  CHECK(r.out.find("boundary") != std::string::npos);
  CHECK(r.out.find("not established") != std::string::npos);
}

TEST_CASE("compute flag errors exit 1") {
  CHECK(run_cli("compute --measure HR --point 0.95 --lower 0.89 --margin 1.10 "
                "--direction preventive")
            .exit_code == 1);  // missing --upper
  CHECK(run_cli("compute").exit_code == 1);
  CHECK(run_cli("bogus-subcommand").exit_code == 1);
}

TEST_CASE("compute domain errors exit 2") {
  const RunResult r = run_cli(
      "compute --measure RR --point 1.0 --lower 0.8 --upper 1.2 --margin -3 "
      "--direction preventive");
  CHECK(r.exit_code == 2);
}

TEST_CASE("compute json output") {
  const RunResult r = run_cli(
      "compute --measure HR --point 0.95 --lower 0.89 --upper 1.00 --margin 1.10 "
      "--direction preventive --frequency common --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"nie_limit\"") != std::string::npos);
  CHECK(r.out.find("\"non_inferiority_established\": true") != std::string::npos);
}

TEST_CASE("batch analyzes the fixture and writes deterministic json") {
  const fs::path out1 = temp_file("batch1.json");
  const fs::path out2 = temp_file("batch2.json");
  const RunResult r1 =
      run_cli("batch --input " + fixture() + " --output " + out1.string());
  CHECK(r1.exit_code == 0);
  CHECK(r1.out.find("durand2024") != std::string::npos);
  CHECK(r1.out.find("2.78") != std::string::npos);
  const RunResult r2 =
      run_cli("batch --input " + fixture() + " --output " + out2.string());
  CHECK(r2.exit_code == 0);
  const std::string j1 = slurp(out1);
  CHECK_FALSE(j1.empty());
  CHECK(j1 == slurp(out2));
  CHECK(r1.out == r2.out);
}

TEST_CASE("batch failure writes nothing") {
  const fs::path bad_csv = temp_file("bad.csv");
  {
    std::ofstream out(bad_csv);
    out << "study_id,label,measure,point,lower,upper,margin,direction,frequency,"
           "events_exposed,n_exposed,events_control,n_control\n";
    out << "ok1,x,RR,1.0,0.8,1.2,2.0,preventive,rare,,,,\n";
    out << "ok2,x,RR,1.1,0.9,1.3,2.0,preventive,rare,,,,\n";
    out << "bad3,x,RR,1.0,1.4,1.2,2.0,preventive,rare,,,,\n";  // lower > upper
  }
  const fs::path out_json = temp_file("bad_out.json");
  fs::remove(out_json);
  const RunResult r =
      run_cli("batch --input " + bad_csv.string() + " --output " + out_json.string());
  CHECK(r.exit_code == 1);
  CHECK_FALSE(fs::exists(out_json));
}

TEST_CASE("batch of an empty file succeeds with empty results") {
  const fs::path empty_csv = temp_file("empty.csv");
  std::ofstream(empty_csv).close();
  const RunResult r = run_cli("batch --input " + empty_csv.string() + " --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[]") != std::string::npos);
}

TEST_CASE("batch missing input exits 1") {
  CHECK(run_cli("batch --input /nonexistent/nowhere.csv").exit_code == 1);
}

TEST_CASE("plot from the fixture is deterministic") {
  const fs::path svg1 = temp_file("durand1.svg");
  const fs::path svg2 = temp_file("durand2.svg");
  const std::string base = "plot --input " + fixture() + " --plot-study-id durand2024 ";
  CHECK(run_cli(base + "--output " + svg1.string()).exit_code == 0);
  CHECK(run_cli(base + "--output " + svg2.string()).exit_code == 0);
  const std::string svg = slurp(svg1);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("NIE 2.78 (CI limit)") != std::string::npos);
  CHECK(svg.find("NIE 3.66 (point)") != std::string::npos);
  CHECK(svg == slurp(svg2));
}

TEST_CASE("plot from flags") {
  const fs::path svg = temp_file("zhong.svg");
  const RunResult r = run_cli(
      "plot --measure HR --point 0.69 --lower 0.36 --upper 1.329 --margin 1.33 "
      "--direction preventive --frequency common --output " + svg.string());
  CHECK(r.exit_code == 0);
  const std::string content = slurp(svg);
  CHECK(content.find("NIE 1.02 (CI limit)") != std::string::npos);
  CHECK(content.find("NIE 2.53 (point)") != std::string::npos);
}

TEST_CASE("plot input errors exit 1") {
  CHECK(run_cli("plot --measure RR --point 1.0 --lower 0.8 --upper 1.2 --margin 2.0 "
                "--direction preventive --output /nonexistent-dir/x.svg")
            .exit_code == 1);
  CHECK(run_cli("plot --output /tmp/x.svg").exit_code == 1);  // no study given
  CHECK(run_cli("plot --input " + fixture() +
                " --plot-study-id missing --output /tmp/x.svg")
            .exit_code == 1);
}

TEST_CASE("verify small run exits 0 and reports") {
  const RunResult r = run_cli("verify --n 200 --seed 7 --grid-resolution 60");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("violations           : 0") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);

  const RunResult j = run_cli("verify --n 50 --seed 7 --grid-resolution 60 --format json");
  CHECK(j.exit_code == 0);
  CHECK(j.out.find("\"violations\": 0") != std::string::npos);
  CHECK(j.out.find("\"passed\": true") != std::string::npos);
  CHECK(j.out.find("\"p_u_given_e1\"") != std::string::npos);  // scenario serialized
}

TEST_CASE("verify rejects n = 0") {
  CHECK(run_cli("verify --n 0").exit_code == 1);
}
