#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result odlat(const std::string &args) {
  const std::string cmd = std::string(ODLAT_CLI_PATH) + " " + args + " 2>&1";
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path &p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string data(const std::string &name) { return std::string(ODLAT_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / "odlat_cli_test" / name;
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string &row) {
  std::vector<std::string> out;
  std::istringstream in(row);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(odlat("").code == 2);
  CHECK(odlat("frobnicate").code == 2);
  CHECK(odlat("analyze").code == 2);
  CHECK(odlat("analyze --preset nope").code == 2);
  CHECK(odlat("analyze --preset default-640x480-30 --format xml").code == 2);
  CHECK(odlat("sweep --preset default-640x480-30 --param speed --values 1").code == 2);
  CHECK(odlat("--help").code == 0);
}

TEST_CASE("analyze prints bounds for the default configuration") {
  const Result r = odlat("analyze --preset default-640x480-30");
  CHECK(r.code == 0);
  CHECK(r.out.find("vanilla(Q=4)") != std::string::npos);
  CHECK(r.out.find("case2") != std::string::npos);
  const Result csv = odlat("analyze --preset default-640x480-30 --format csv");
  CHECK(csv.out.rfind("variant,case,s_min", 0) == 0);
}

TEST_CASE("a zero-size queue analyzes exactly like on-demand capture") {
  const Result a = odlat("analyze " + data("q0.scn"));
  const Result b = odlat("analyze " + data("od.scn"));
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("missing profile file names the path") {
  const Result r = odlat("analyze " + data("missing_profile.scn"));
  CHECK(r.code == 2);
  CHECK(r.out.find("no_such_profile.csv") != std::string::npos);
  const Result k = odlat("analyze " + data("bad_key.scn"));
  CHECK(k.code == 2);
  CHECK(k.out.find("bad_key.scn:6") != std::string::npos);
}

TEST_CASE("simulate writes deterministic files") {
  const fs::path a = scratch("a"), b = scratch("b");
  REQUIRE(odlat("simulate " + data("file_profile.scn") + " --seed 5 --trace --out " + a.string()).code == 0);
  REQUIRE(odlat("simulate " + data("file_profile.scn") + " --seed 5 --trace --out " + b.string()).code == 0);
  std::size_t files = 0;
  for (const auto &e : fs::directory_iterator(a)) {
    ++files;
    CAPTURE(e.path().filename().string());
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files >= 13);
  const std::string hist = slurp(a / "vanilla_q2_e2e_hist.csv");
  CHECK(hist.rfind("bin_start_ms,count\n", 0) == 0);
  CHECK(slurp(a / "on_demand_summary.json").find("\"seed\": 5") != std::string::npos);
  const fs::path c = scratch("c");
  REQUIRE(odlat("simulate " + data("file_profile.scn") + " --seed 6 --out " + c.string()).code == 0);
  CHECK(slurp(c / "vanilla_q2_e2e_samples.csv") != slurp(a / "vanilla_q2_e2e_samples.csv"));
}

TEST_CASE("simulate summary for a camera-bound detector") {
  const Result r = odlat("simulate --preset case1-fast-detector --format csv");
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() >= 2);
  const auto f = fields(rows[1]);
  REQUIRE(f.size() >= 8);
  CHECK(std::stod(f[6]) == doctest::Approx(50.0).epsilon(0.01));
  CHECK(std::stod(f[7]) == 0.0);
}

TEST_CASE("trace of the micro-scenario") {
  const Result r = odlat("simulate " + data("micro.scn") + " --trace");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("375000\tfetch_start\t0\t0\n") != std::string::npos);
  CHECK(r.out.find("8000000\tinfer_start\t0\t1\n") != std::string::npos);
  CHECK(r.out.find("17000000\tdisplay_end\t0\t2\n") != std::string::npos);
  CHECK(r.out.find("17.000") != std::string::npos);
}

TEST_CASE("validate exit codes") {
  CHECK(odlat("validate --preset default-640x480-30").code == 0);
  CHECK(odlat("validate --preset default-640x480-30 --shrink-bounds 1").code == 1);
  const Result c3 = odlat("validate --preset case3-balanced");
  CHECK(c3.code == 0);
  CHECK(c3.out.find("[0, case2 max] envelope") != std::string::npos);
  CHECK(odlat("validate " + data("micro.scn")).code == 0);
}

TEST_CASE("queue size sweep") {
  const Result r =
      odlat("sweep --preset xavier-yolov3-calibrated --param queue_size --values 4,0,2,1,3 --format csv");
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "queue_size,mean_delay_ms,mean_cycle_ms");
  for (int i = 1; i < 6; ++i) CHECK(fields(rows[static_cast<std::size_t>(i)])[0] == std::to_string(i - 1));
  for (int i = 2; i < 6; ++i)
    CHECK(std::stod(fields(rows[static_cast<std::size_t>(i)])[1]) >
          std::stod(fields(rows[static_cast<std::size_t>(i - 1)])[1]));

  const Result range =
      odlat("sweep --preset xavier-yolov3-calibrated --param queue_size --values 0..4 --format csv");
  CHECK(range.out == r.out);
}

TEST_CASE("single-value sweep matches simulate") {
  const Result sw =
      odlat("sweep --preset default-640x480-30 --param queue_size --values 4 --format csv");
  const Result sim = odlat("simulate --preset default-640x480-30 --format csv");
  REQUIRE(sw.code == 0);
  REQUIRE(sim.code == 0);
  const auto s = fields(lines(sw.out)[1]);
  const auto m = fields(lines(sim.out)[1]);
  CHECK(s[1] == m[2]);
  CHECK(s[2] == m[6]);
}

TEST_CASE("other sweep parameters") {
  const Result t = odlat("sweep --preset xavier-yolov3-calibrated --param theta --values 0..120:40");
  CHECK(t.code == 0);
  const Result n =
      odlat("sweep --preset xavier-yolov3-calibrated --param nn_resolution --values 608,320,416 --format csv");
  REQUIRE(n.code == 0);
  const auto rows = lines(n.out);
  REQUIRE(rows.size() == 4);
  CHECK(fields(rows[1])[0] == "320");
  CHECK(std::stod(fields(rows[1])[2]) < std::stod(fields(rows[3])[2]));
  CHECK(odlat("sweep --preset xavier-yolov3-calibrated --param frame_rate --values 15,30").code == 0);
  CHECK(odlat("sweep --preset xavier-yolov3-calibrated --param nn_resolution --values 999").code == 2);
}

TEST_CASE("analyze --compare reports staged reductions") {
  const Result r = odlat("analyze --preset xavier-yolov3-calibrated --compare --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("variant,total_min,total_max,sim_mean_e2e") != std::string::npos);
  CHECK(r.out.find("contention_free,") != std::string::npos);
}
