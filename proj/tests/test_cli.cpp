#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "dgff/gaussian.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::current_path() / "cli_runs";
[[maybe_unused]] const auto kCleaned = fs::remove_all(kRoot);

int run(const std::string& args) {
  fs::create_directories(kRoot);
  const std::string cmd = std::string(DGFF_CLI_PATH) + " " + args + " >>" + (kRoot / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string out(const std::string& name) { return "--out " + (kRoot / name).string(); }

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("--ensemble-n 0 " + out("e0") + " sample") == 2);
  CHECK(run(out("e1") + " verify --suite nonsense") == 2);
  CHECK(run(out("e2") + " --ensemble-n 10 verify --suite driving") == 2);
  CHECK(run(out("e3") + " interface") == 2);
  CHECK(run(out("e4") + " --lattice kagome sample") == 2);
  CHECK(run(out("e5") + " sample --no-such-flag") == 2);
  CHECK(run("") == 2);
  const fs::path bad = kRoot / "bad.toml";
  std::ofstream(bad) << "seed = 3\nbogus_key = 1\n";
  CHECK(run("--config " + bad.string() + " " + out("e6") + " sample") == 2);
}

TEST_CASE("sample: 90x90 rhombus with the lattice gap on the boundary") {
  REQUIRE(run("--m 90 --n 90 --seed 1 " + out("s90") + " sample") == 0);
  std::ifstream is(kRoot / "s90" / "field.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("# dgff-sle schema=field/1 config_hash=", 0) == 0);
  CHECK(line.find(" seed=1") != std::string::npos);
  std::getline(is, line);
  CHECK(line == "vertex_id,i,j,x,y,h");
  std::size_t rows = 0, edge = 0;
  while (std::getline(is, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string cell[6];
    for (auto& c : cell) std::getline(ls, c, ',');
    const int i = std::stoi(cell[1]), j = std::stoi(cell[2]);
    const double h = std::stod(cell[5]);
    CHECK(std::isfinite(h));
    if (i == 0 || j == 0 || i == 90 || j == 90) {
      ++edge;
      CHECK(std::abs(h) == dgff::kLambdaTG);
    }
  }
  CHECK(rows == 91u * 91u);
  CHECK(edge == 4u * 90u);
}

TEST_CASE("sample is deterministic across reruns and thread counts") {
  REQUIRE(run("--m 25 --n 20 --seed 9 --ensemble-n 3 --threads 1 " + out("d1") + " sample") == 0);
  REQUIRE(run("--m 25 --n 20 --seed 9 --ensemble-n 3 --threads 1 " + out("d2") + " sample") == 0);
  REQUIRE(run("--m 25 --n 20 --seed 9 --ensemble-n 3 --threads 4 " + out("d3") + " sample") == 0);
  REQUIRE(run("--m 25 --n 20 --seed 10 --ensemble-n 3 " + out("d4") + " sample") == 0);
  for (const char* f : {"field_0000.csv", "field_0001.csv", "field_0002.csv"}) {
    const std::string a = slurp(kRoot / "d1" / f);
    CHECK(!a.empty());
    CHECK(a == slurp(kRoot / "d2" / f));
    CHECK(a == slurp(kRoot / "d3" / f));
    CHECK(a != slurp(kRoot / "d4" / f));
  }
  CHECK(slurp(kRoot / "d1" / "field_0000.csv") != slurp(kRoot / "d1" / "field_0001.csv"));
}

TEST_CASE("config file values match the equivalent flags, and flags win") {
  const fs::path cfg = kRoot / "run.toml";
  std::ofstream(cfg) << "m = 12\nn = 8\nseed = 5\nsvg = true\n";
  REQUIRE(run("--config " + cfg.string() + " " + out("c1") + " sample") == 0);
  REQUIRE(run("--m 12 --n 8 --seed 5 --svg " + out("c2") + " sample") == 0);
  CHECK(slurp(kRoot / "c1" / "field.csv") == slurp(kRoot / "c2" / "field.csv"));
  CHECK(fs::exists(kRoot / "c1" / "field.svg"));
  REQUIRE(run("--config " + cfg.string() + " --seed 6 " + out("c3") + " sample") == 0);
  CHECK(slurp(kRoot / "c1" / "field.csv") != slurp(kRoot / "c3" / "field.csv"));
}

TEST_CASE("interface files") {
  REQUIRE(run("--m 30 --n 30 --seed 2 " + out("i1") + " sample") == 0);
  REQUIRE(run("--m 30 --n 30 --seed 2 " + out("i1") + " --svg interface --field " +
              (kRoot / "i1" / "field.csv").string()) == 0);
  CHECK(fs::exists(kRoot / "i1" / "interface.csv"));
  CHECK(fs::exists(kRoot / "i1" / "interface.svg"));
  CHECK_FALSE(fs::exists(kRoot / "i1" / "zero_arcs.csv"));

  REQUIRE(run("--m 30 --n 30 --a 0 --b 0 --seed 2 " + out("i0") + " sample") == 0);
  REQUIRE(run("--m 30 --n 30 --a 0 --b 0 --seed 2 " + out("i0") + " interface --field " +
              (kRoot / "i0" / "field.csv").string()) == 0);
  CHECK(fs::exists(kRoot / "i0" / "interface.csv"));
  const std::string arcs = slurp(kRoot / "i0" / "zero_arcs.csv");
  CHECK(arcs.rfind("# dgff-sle schema=zero_arcs/1", 0) == 0);
  CHECK(arcs.find("arc,closed,step,x,y") != std::string::npos);

  // a field written for another domain is rejected
  CHECK(run("--m 20 --n 30 " + out("i2") + " interface --field " + (kRoot / "i1" / "field.csv").string()) == 2);
}

TEST_CASE("verify exact") {
  CHECK(run("--seed 1 " + out("v") + " verify --suite exact") == 0);
  const std::string json = slurp(kRoot / "v" / "verify_exact.json");
  CHECK(json.find("\"pass\": false") == std::string::npos);
  CHECK(json.find("green_covariance") != std::string::npos);
}
