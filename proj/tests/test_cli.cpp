#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <doctest.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(OPSCHWARZ_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("opschwarz_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int lines(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("monolithic, run, sweep and render") {
  const fs::path dir = fresh("flow");
  std::ofstream(dir / "small.cfg") << "nx = 10\nny = 10\ndt = 0.02\noverlap = 2\nr = 3\ndata = 20\n";
  const std::string base = "--config " + (dir / "small.cfg").string() + " --out " + dir.string();

  CHECK(run("run " + base) == 3);  // no reference yet
  REQUIRE(run("monolithic " + base) == 0);
  CHECK(lines(dir / "monolithic.csv") == 122);
  CHECK(fs::exists(dir / "boundary_history.csv"));

  CHECK(run("run " + base) == 0);
  CHECK(run("run " + base + " --set models=rom --repeats 2") == 0);
  CHECK(lines(dir / "stats.csv") == 3);
  CHECK(fs::exists(dir / "vertical_fom_o2_merged.csv"));
  CHECK(fs::exists(dir / "vertical_fom_o2_steps.csv"));
  CHECK(slurp(dir / "vertical_fom_o2_steps.csv").rfind("step,t,sweeps,eps_abs,eps_rel\n", 0) == 0);
  CHECK(fs::exists(dir / "vertical_rom_o2_r3_d20_sub1_K.csv"));

  CHECK(run("sweep " + base + " --set models=rom --axis data --values 10,20,30") == 0);
  CHECK(lines(dir / "sweep_data.csv") == 4);
  CHECK(lines(dir / "pareto.csv") == 4);

  // r = 40 exceeds the training window: the row records the error, the file is still written
  CHECK(run("sweep " + base + " --set models=rom --axis rank --values 2,40") == 2);
  const std::string rank = slurp(dir / "sweep_rank.csv");
  CHECK(lines(dir / "sweep_rank.csv") == 3);
  CHECK(rank.find("error: ") != std::string::npos);

  CHECK(run("render " + base + " --time 1 --scale 2") == 0);
  const std::string img = slurp(dir / "monolithic_t1.pgm");
  CHECK(img.rfind("P5\n22 22\n255\n", 0) == 0);
  CHECK(run("render " + base + " --time 0.013") == 1);
  CHECK(run("render " + base + " --time 1 --input " + (dir / "nothing.csv").string()) == 3);
}

TEST_CASE("exit codes for bad input") {
  const fs::path dir = fresh("bad");
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("monolithic --config " + (dir / "missing.cfg").string()) == 3);
  std::ofstream(dir / "bad.cfg") << "nx = 7\nlayout = vertical\n";
  CHECK(run("monolithic --config " + (dir / "bad.cfg").string()) == 1);
  CHECK(run("sweep --out " + dir.string() + " --axis colour --values 1") == 1);
}

TEST_CASE("non-convergence exits with the numerical code") {
  const fs::path dir = fresh("nonconv");
  std::ofstream(dir / "c.cfg") << "nx = 10\nny = 10\noverlap = 1\nmax_sweeps = 1\n";
  const std::string base = "--config " + (dir / "c.cfg").string() + " --out " + dir.string();
  REQUIRE(run("monolithic " + base) == 0);
  CHECK(run("run " + base) == 2);
}
