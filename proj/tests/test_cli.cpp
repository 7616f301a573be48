#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "simdeck/cli.hpp"
#include "simdeck/store.hpp"

namespace fs = std::filesystem;
using simdeck::cli_main;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  fs::path old;
  TempDir() {
    path = fs::temp_directory_path() / ("simdeck_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
    old = fs::current_path();
    fs::current_path(path);
  }
  ~TempDir() {
    fs::current_path(old);
    fs::remove_all(path);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

}  // namespace

TEST_CASE("unknown demo exits 2") {
  TempDir t;
  const auto r = run({"host", "no_such_demo", "--headless", "--steps", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown demo") != std::string::npos);
  CHECK_FALSE(fs::exists("no_such_demo.db"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"host"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"host", "decay", "--port", "notanumber"}).code == 2);
  CHECK(run({"host", "decay", "--port", "70000"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("headless decay run creates default db and reports ten steps") {
  TempDir t;
  const auto r = run({"host", "decay", "--headless", "--steps", "10"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists("decay.db"));
  CHECK(r.out.rfind("step=10\n", 0) == 0);
  std::smatch m;
  REQUIRE(std::regex_search(r.out, m, std::regex("x=([0-9.eE+-]+)")));
  const double x = std::stod(m[1]);
  const double expect = 100.0 * std::pow(0.9, 10);
  CHECK(std::abs(x - expect) <= 1e-9 * expect);
  CHECK(r.out.find("step=10\nx=") != std::string::npos);

  auto store = simdeck::Store::open("decay.db");
  CHECK(store.has_context("decay"));
}

TEST_CASE("headless run honours explicit db path and png dir") {
  TempDir t;
  const auto r = run({"host", "lif_scope", "sub/lif.db", "--headless", "--steps", "3", "--png-dir", "png"});
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(fs::exists("sub/lif.db"));
  CHECK_FALSE(fs::exists("lif_scope.db"));
  CHECK(fs::exists("png/Scope.png"));
  CHECK(r.out.rfind("step=3\n", 0) == 0);
}

TEST_CASE("list-demos prints every registered demo") {
  const auto r = run({"list-demos"});
  CHECK(r.code == 0);
  for (const char* n : {"decay", "lif_scope", "lif_plot", "datagen", "classifiers"})
    CHECK(r.out.find(std::string(n) + "\t") != std::string::npos);
}

TEST_CASE("parse subcommand merges directives and preserves state unless overwriting") {
  TempDir t;
  {
    std::ofstream f("app.py");
    f << "#@IVISIT:SIMULATION & demo\n"
         "#@IVISIT:SLIDER & Gain & [100,1] & [0,10,5,1] & gain & -1 & float & 2\n"
         "x = 1\n"
         "#@IVISIT:TEXT_OUT & Log & [20,3] & just_left & log\n";
  }
  auto r = run({"parse", "app.py"});
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("context demo: created 2, updated 0, unchanged 0") != std::string::npos);
  CHECK(fs::exists("app.db"));

  r = run({"parse", "app.py"});
  CHECK(r.code == 0);
  CHECK(r.out.find("created 0") != std::string::npos);
  CHECK(r.out.find("unchanged 2") != std::string::npos);

  r = run({"parse", "app.py", "--db", "other.db", "--overwrite"});
  CHECK(r.code == 0);
  CHECK(fs::exists("other.db"));
  CHECK(r.out.find("created 2") != std::string::npos);
}

TEST_CASE("parse subcommand reports bad directives with exit 1") {
  TempDir t;
  {
    std::ofstream f("bad.py");
    f << "#@IVISIT:SIMULATION & demo\n#@IVISIT:SLIDER & Gain & [100,1]\n";
  }
  const auto r = run({"parse", "bad.py"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(run({"parse", "missing.py"}).code == 1);
}
