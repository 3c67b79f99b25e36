#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

std::string bin() {
  static const std::string b = [] {
    const char* e = std::getenv("ALMG_BIN");
    if (e == nullptr) {
      std::fprintf(stderr, "ALMG_BIN must point at the almg executable\n");
      std::exit(1);
    }
    return std::string(e);
  }();
  return b;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "almg_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const fs::path log = work_dir() / "last_output.txt";
  const std::string cmd = bin() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log, std::ios::binary);
  r.output.assign(std::istreambuf_iterator<char>(in), {});
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
      const size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("spectrum command output and determinism") {
  const fs::path a = work_dir() / "spec_a";
  const fs::path b = work_dir() / "spec_b";
  CHECK(run("spectrum --N 2 --xi 0 --alpha 0 -o " + a.string()).exit_code == 0);
  CHECK(run("spectrum --N 2 --xi 0 --alpha 0 -o " + b.string()).exit_code == 0);

  const auto rows = read_csv(a / "spectrum.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"index", "parity", "sector_index", "E", "eps"});
  CHECK(rows[1][3] == "0");
  CHECK(rows[2][3] == "1");
  CHECK(rows[3][3] == "2");
  CHECK(rows[2][1] == "-1");

  CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));

  const std::string manifest = slurp(a / "manifest.json");
  CHECK(manifest.find("\"spectrum.csv\"") != std::string::npos);
  CHECK(manifest.find("\"fnv1a64\"") != std::string::npos);
  CHECK(manifest.find("\"command\": \"spectrum\"") != std::string::npos);
}

TEST_CASE("invalid input exits with code 2") {
  CHECK(run("spectrum --xi 1.5 -o " + (work_dir() / "bad").string()).exit_code == 2);
  CHECK(run("quench --N 20 --xi1 0.6 -o " + (work_dir() / "bad").string()).exit_code == 2);
  CHECK(run("echo --N 20 --states nonsense -o " + (work_dir() / "bad").string()).exit_code == 2);
  CHECK(run("nonsense").exit_code == 2);
  CHECK(run("").exit_code == 2);
}

TEST_CASE("critical command prints the intersection") {
  const RunResult r =
      run("critical --alpha 0 --xi1 0.6 --from ground -o " + (work_dir() / "crit").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("xi_c = 0.2998") != std::string::npos);
  const auto rows = read_csv(work_dir() / "crit" / "critical.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "ground");

  const RunResult formal = run("critical --alpha 0 --xi1 0.6 --from highest --eps0 1.0 -o " +
                               (work_dir() / "crit2").string());
  CHECK(formal.exit_code == 0);
  CHECK(formal.output.find("formal") != std::string::npos);
}

TEST_CASE("verify recomputes and compares checksums") {
  const fs::path d = work_dir() / "verify";
  const std::string base = "quench --N 20 --alpha -0.6 --xi1 0.6 --xi2 0.4 --n-points 50 -o " +
                           d.string();
  REQUIRE(run(base).exit_code == 0);
  CHECK(run(base + " --verify").exit_code == 0);

  {
    std::ofstream out(d / "survival.csv", std::ios::binary | std::ios::app);
    out << "tampered\n";
  }
  const RunResult bad = run(base + " --verify");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("MISMATCH") != std::string::npos);

  CHECK(run(base).exit_code == 0);
  CHECK(run(base + " --verify").exit_code == 0);

  // Verifying an empty directory is a usage error.
  CHECK(run("spectrum --N 20 --verify -o " + (work_dir() / "empty").string()).exit_code == 2);
}

TEST_CASE("echo command writes per-state series and sector averages") {
  const fs::path d = work_dir() / "echo";
  CHECK(run("echo --N 20 --xi 0.5 --alpha -0.6 --delta 0.01 --states even:0,odd:1 "
            "--t-max 10 --n-points 20 -o " +
            d.string())
            .exit_code == 0);
  CHECK(fs::exists(d / "echo_even_0.csv"));
  CHECK(fs::exists(d / "echo_odd_1.csv"));
  const auto avg = read_csv(d / "echo_avg.csv");
  CHECK(avg.size() == 22);  // header + N + 1 states
  CHECK(avg[0][0] == "j");
}

TEST_CASE("otoc command emits steady-state values") {
  const fs::path d = work_dir() / "otoc";
  CHECK(run("otoc --N 20 --xi 0.5 --alpha -0.6 --W sp --V sm --states even:0 "
            "--t-max 5 --n-points 10 -o " +
            d.string())
            .exit_code == 0);
  CHECK(fs::exists(d / "otoc_even_0.csv"));
  const auto steady = read_csv(d / "otoc_steady.csv");
  REQUIRE(steady.size() == 2);
  CHECK(steady[0] == std::vector<std::string>{"parity", "index", "E", "eps", "F_bar"});
}

TEST_CASE("environment variable sets the default output directory") {
  const fs::path d = work_dir() / "env_out";
  setenv("ALMG_OUTPUT_DIR", d.string().c_str(), 1);
  CHECK(run("spectrum --N 2 --xi 0 --alpha 0").exit_code == 0);
  unsetenv("ALMG_OUTPUT_DIR");
  CHECK(fs::exists(d / "spectrum.csv"));
}

TEST_CASE("config file provides defaults that flags override") {
  const fs::path cfgfile = work_dir() / "run.ini";
  {
    std::ofstream out(cfgfile);
    out << "N = 20\nxi = 0.25\nalpha = -0.6\n";
  }
  const fs::path d1 = work_dir() / "cfg1";
  const fs::path d2 = work_dir() / "cfg2";
  CHECK(run("spectrum --config " + cfgfile.string() + " -o " + d1.string()).exit_code == 0);
  const auto rows1 = read_csv(d1 / "spectrum.csv");
  CHECK(rows1.size() == 22);  // header + 21 states

  CHECK(run("spectrum --config " + cfgfile.string() + " --N 10 -o " + d2.string()).exit_code ==
        0);
  const auto rows2 = read_csv(d2 / "spectrum.csv");
  CHECK(rows2.size() == 12);

  CHECK(run("spectrum --config " + (work_dir() / "missing.ini").string()).exit_code == 2);
}

TEST_CASE("diagram command covers the grid") {
  const fs::path d = work_dir() / "diagram";
  CHECK(run("diagram --N 10 --alpha -0.6 --xi-grid 0:1:0.5 --W sp --V sm -o " + d.string())
            .exit_code == 0);
  const auto rows = read_csv(d / "diagram.csv");
  REQUIRE(rows.size() == 1 + 3 * 11);
  CHECK(rows[0][0] == "xi");
  CHECK(rows[1][0] == "0");
  CHECK(rows.back()[0] == "1");
}
