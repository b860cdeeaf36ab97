// End-to-end checks of the command-line tool: exit codes, emitted files,
// stdout reporting, and manifest digests recomputed independently.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct run_result {
  int code = -1;
  std::string out; // stdout and stderr interleaved
};

run_result run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture =
      (fs::temp_directory_path() / ("l2b_cli_out_" + std::to_string(counter++) + ".txt")).string();
  const std::string cmd = std::string(L2B_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int raw = std::system(cmd.c_str());
  run_result r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream f(capture, std::ios::binary);
  std::ostringstream buf;
  buf << f.rdbuf();
  r.out = buf.str();
  f.close();
  std::remove(capture.c_str());
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

long count_lines(const std::string& text) {
  long lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  return lines;
}

// same digest the tool claims to write; recomputed here from the file bytes
std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_data_csv(const fs::path& dir) {
  const fs::path path = dir / "data.csv";
  std::ofstream f(path);
  f << "x1,x2,x3,x4,y\n";
  double state = 0.25;
  auto next = [&state] {
    state = std::fmod(state * 997.0 + 0.1234, 1.0);
    return state * 2.0 - 1.0;
  };
  for (int i = 0; i < 40; ++i) {
    const double a = next(), b = next(), c = next(), d = next();
    const double y = 3.0 * a - 2.0 * b + 0.25 * d;
    f << a << ',' << b << ',' << c << ',' << d << ',' << y << '\n';
  }
  return path;
}

void check_manifest(const fs::path& manifest_path, const std::string& subcommand) {
  const json m = json::parse(slurp(manifest_path));
  CHECK(m.at("subcommand").get<std::string>() == subcommand);
  CHECK(!m.at("tool_version").get<std::string>().empty());
  CHECK(m.contains("config"));
  for (const char* section : {"inputs", "outputs"}) {
    for (const auto& entry : m.at(section)) {
      const std::string path = entry.at("path").get<std::string>();
      const std::string claimed = entry.at("fnv1a64").get<std::string>();
      INFO("digest of " << path);
      CHECK(hex16(fnv1a64(slurp(path))) == claimed);
    }
  }
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("version and usage errors") {
  CHECK(run_cli("--version").code == 0);
  CHECK(run_cli("").code == 2);              // a subcommand is required
  CHECK(run_cli("frobnicate").code == 2);    // unknown subcommand
  CHECK(run_cli("fit --data x.csv").code == 2); // --response is required
  const run_result bad_flag = run_cli("theory --no-such-flag");
  CHECK(bad_flag.code == 2);
}

TEST_CASE("fit emits coefficients, path, predictions, and an honest manifest") {
  const fs::path dir = fresh_dir("l2b_cli_fit");
  const fs::path data = write_data_csv(dir);

  const run_result r = run_cli("fit --data " + data.string() + " --response y --method ba" +
                               " --stop fixed --m 6 --out-dir " + dir.string());
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("in_sample_mse ") != std::string::npos);
  CHECK(r.out.find("stop_step 6") != std::string::npos);
  CHECK(r.out.find("stop_reason fixed-steps") != std::string::npos);
  CHECK(r.out.find("support_size ") != std::string::npos);

  const std::string coef = slurp(dir / "fit_coefficients.csv");
  CHECK(coef.rfind("name,standardized,raw\n", 0) == 0);
  CHECK(coef.find("(intercept)") != std::string::npos);
  CHECK(coef.find("x1,") != std::string::npos);

  const std::string path_csv = slurp(dir / "fit_path.csv");
  CHECK(path_csv.rfind("m,j,gamma,residual_sq,pred_sq,label\n", 0) == 0);
  CHECK(count_lines(path_csv) == 7); // header + six recorded steps

  const std::string pred = slurp(dir / "fit_predictions.csv");
  CHECK(pred.rfind("row,actual,predicted\n", 0) == 0);
  CHECK(count_lines(pred) == 41);

  check_manifest(dir / "fit_manifest.json", "fit");
  fs::remove_all(dir);
}

TEST_CASE("fit reports holdout error and honors the split seed") {
  const fs::path dir = fresh_dir("l2b_cli_split");
  const fs::path data = write_data_csv(dir);
  const std::string base = "fit --data " + data.string() + " --response y --method oba" +
                           " --test-frac 0.25 --out-dir " + dir.string();

  const run_result a = run_cli(base + " --seed 11");
  REQUIRE(a.code == 0);
  CHECK(a.out.find("holdout_mse ") != std::string::npos);
  const run_result b = run_cli(base + " --seed 11");
  const run_result c = run_cli(base + " --seed 12");
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  fs::remove_all(dir);
}

TEST_CASE("fit lasso prints its penalty and skips the path file") {
  const fs::path dir = fresh_dir("l2b_cli_lasso");
  const fs::path data = write_data_csv(dir);

  const run_result r = run_cli("fit --data " + data.string() + " --response y --method lasso" +
                               " --penalty plugin --out-dir " + dir.string());
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("lambda ") != std::string::npos);
  CHECK(!fs::exists(dir / "fit_path.csv"));
  CHECK(fs::exists(dir / "fit_coefficients.csv"));
  check_manifest(dir / "fit_manifest.json", "fit");
  fs::remove_all(dir);
}

TEST_CASE("fit failures map onto the documented exit codes") {
  const fs::path dir = fresh_dir("l2b_cli_fail");
  const fs::path data = write_data_csv(dir);
  // configuration problems exit 2
  CHECK(run_cli("fit --data /no/such.csv --response y --out-dir " + dir.string()).code == 2);
  CHECK(run_cli("fit --data " + data.string() + " --response zzz --out-dir " + dir.string()).code ==
        2);
  CHECK(run_cli("fit --data " + data.string() + " --response y --method ba --stop ratio --cu -1" +
                " --out-dir " + dir.string())
            .code == 2);
  CHECK(run_cli("fit --data " + data.string() + " --response y --method nonsense --out-dir " +
                dir.string())
            .code == 2);
  // the oracle rule needs attached truth, which a plain CSV cannot carry
  const run_result oracle = run_cli("fit --data " + data.string() +
                                    " --response y --method ba --stop oracle --out-dir " +
                                    dir.string());
  CHECK(oracle.code == 2);
  fs::remove_all(dir);
}

TEST_CASE("simulate runs a spec file deterministically") {
  const fs::path dir = fresh_dir("l2b_cli_sim");
  const fs::path spec = dir / "spec.json";
  {
    std::ofstream f(spec);
    f << R"({"dgp": {"n": 25, "p": 8, "s": 2, "holdout": 15},
             "methods": [{"estimator": "ba", "stop": "oracle"},
                         {"estimator": "oba", "stop": "oracle"}],
             "repetitions": 3, "master_seed": 42, "max_steps": 20})";
  }

  const run_result r =
      run_cli("simulate --spec " + spec.string() + " --out-dir " + dir.string());
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("rows 2") != std::string::npos);

  const std::string table = slurp(dir / "simulate_table.csv");
  CHECK(count_lines(table) == 3); // header + one row per method
  CHECK(table.find("ba-oracle") != std::string::npos);
  CHECK(table.find("oba-oracle") != std::string::npos);
  check_manifest(dir / "simulate_manifest.json", "simulate");

  // reruns byte-identical; a different seed moves the numbers
  const fs::path dir2 = fresh_dir("l2b_cli_sim2");
  const run_result r2 =
      run_cli("simulate --spec " + spec.string() + " --out-dir " + dir2.string());
  REQUIRE(r2.code == 0);
  CHECK(slurp(dir2 / "simulate_table.csv") == table);
  const fs::path dir3 = fresh_dir("l2b_cli_sim3");
  const run_result r3 = run_cli("simulate --spec " + spec.string() + " --seed 43 --out-dir " +
                                dir3.string());
  REQUIRE(r3.code == 0);
  CHECK(slurp(dir3 / "simulate_table.csv") != table);

  CHECK(run_cli("simulate --spec /no/such.json --out-dir " + dir.string()).code == 2);
  fs::remove_all(dir);
  fs::remove_all(dir2);
  fs::remove_all(dir3);
}

TEST_CASE("curve preset accepts scale-down overrides") {
  const fs::path dir = fresh_dir("l2b_cli_curve");
  const run_result r = run_cli("curve --preset illustrative --reps 4 --max-steps 6 --seed 7" +
                               std::string(" --out-dir ") + dir.string());
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("min_mse_out ") != std::string::npos);
  CHECK(r.out.find("ratio_stop_step ") != std::string::npos);
  CHECK(r.out.find("ols_ref ") != std::string::npos); // n=20 > p=10, so OLS exists

  const std::string csv = slurp(dir / "curve.csv");
  CHECK(count_lines(csv) == 8); // header + steps 0..6
  check_manifest(dir / "curve_manifest.json", "curve");

  CHECK(run_cli("curve --preset nonsense --out-dir " + dir.string()).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("theory prints the constants grid and flags empty domains") {
  const run_result r = run_cli("theory --c-min 0 --c-max 0.3 --c-step 0.1");
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("c,mu_a,mu_e,zeta_star,lambda_star,rate\n", 0) == 0);
  CHECK(count_lines(r.out) == 5); // header + c in {0, 0.1, 0.2, 0.3}

  // first data row carries the c = 0 constants
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream cells(row);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(cells, cell, ',')) vals.push_back(std::stod(cell));
  REQUIRE(vals.size() == 6);
  CHECK(vals[1] == doctest::Approx(0.5).epsilon(1e-9));         // mu_a
  CHECK(vals[3] == doctest::Approx(1.1867).epsilon(2e-4));      // zeta_star
  CHECK(vals[5] == doctest::Approx(0.5427).epsilon(2e-4));      // rate

  // far past the usable range every optimized column goes blank, yet exit is 0
  const run_result wide = run_cli("theory --c-min 0.9 --c-max 0.9 --c-step 0.1");
  REQUIRE(wide.code == 0);
  CHECK(wide.out.find("0.9,") != std::string::npos);
  CHECK(wide.out.find(",,") != std::string::npos);
}

TEST_CASE("eigen scans a csv design") {
  const fs::path dir = fresh_dir("l2b_cli_eigen");
  const fs::path data = write_data_csv(dir);
  const run_result r = run_cli("eigen --data " + data.string() + " --response y --s-max 3" +
                               " --budget 200 --out-dir " + dir.string());
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p 4") != std::string::npos);
  CHECK(r.out.find("s_max 3") != std::string::npos);

  const std::string csv = slurp(dir / "eigen.csv");
  CHECK(csv.rfind("s,phi_small,phi_large,exhaustive,c_running\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  check_manifest(dir / "eigen_manifest.json", "eigen");
  fs::remove_all(dir);
}

TEST_CASE("pga-analyze checks the greedy bounds on both presets") {
  const fs::path dir = fresh_dir("l2b_cli_pga");
  const run_result r = run_cli("pga-analyze --preset orthonormal --size 6 --s 3 --out-dir " +
                               dir.string());
  CAPTURE(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("models 3") != std::string::npos); // exact recovery in s steps
  CHECK(r.out.find("bound step-ratio holds") != std::string::npos);
  CHECK(r.out.find("bound revisit-floor-finite holds") != std::string::npos);
  CHECK(r.out.find("VIOLATED") == std::string::npos);
  CHECK(fs::exists(dir / "pga_path.csv"));
  CHECK(fs::exists(dir / "pga_eigen.csv"));
  CHECK(fs::exists(dir / "pga_bounds.csv"));
  check_manifest(dir / "pga_manifest.json", "pga-analyze");

  const run_result rnd = run_cli("pga-analyze --preset random --n 40 --p 8 --s 3 --seed 5" +
                                 std::string(" --max-steps 12 --s-max 6 --out-dir ") +
                                 dir.string() + " --prefix rnd");
  CAPTURE(rnd.out);
  REQUIRE(rnd.code == 0);
  CHECK(rnd.out.find("bound step-ratio") != std::string::npos);
  CHECK(fs::exists(dir / "rnd_bounds.csv"));

  CHECK(run_cli("pga-analyze --preset nonsense --out-dir " + dir.string()).code == 2);
  fs::remove_all(dir);
}

TEST_SUITE_END();
