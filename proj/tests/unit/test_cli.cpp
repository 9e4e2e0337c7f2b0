#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hqoc/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "hqoc_cli_tests";
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(HQOC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli exit codes") {
  const fs::path dir = scratch();
  CHECK(run("tradeoff --n 10 --m 10 --s 100 --epsilon 0.1") == 0);
  CHECK(run("bogus") == 1);
  CHECK(run("prep --delta 0.3 --n 3") == 1);

  std::ofstream(dir / "bad.json") << R"({"m":1,"r":0,"gates":[{"kind":"disp_p","mode":4,"t":1.0}]})";
  CHECK(run("analyze " + (dir / "bad.json").string()) == 1);
  std::ofstream(dir / "broken.json") << "{not json";
  CHECK(run("analyze " + (dir / "broken.json").string()) == 1);

  CHECK(run("prep --n 12 --delta 0.0001 --simulate --mem-cap-mb 1") == 2);
}

TEST_CASE("cli prep emits the closed-form gate count") {
  const fs::path out = scratch() / "prep.json";
  REQUIRE(run("prep --n 3 --delta 0.01 --emit " + out.string()) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  const auto& circuit = doc.contains("circuit") ? doc["circuit"] : doc;
  CHECK(static_cast<long>(circuit["gates"].size()) == hqoc::prep_circuit_size(3, 0.01));
}

TEST_CASE("cli sampling is reproducible") {
  const fs::path dir = scratch();
  const std::string base = "sample --n 2 --m 1 --delta 0.05 --shots 200 --seed 11 --x 1 --report ";
  REQUIRE(run(base + (dir / "a.json").string() + " --out " + (dir / "a.csv").string()) == 0);
  REQUIRE(run(base + (dir / "b.json").string() + " --out " + (dir / "b.csv").string()) == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a.rfind("y_1,", 0) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(report.dump().find("eps_prep") != std::string::npos);
}
