#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "airy/kr_distance.hpp"
#include "airy/measure.hpp"
#include "airy/serialize.hpp"

using namespace airy;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "airy_ldp_cli_test";
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(AIRY_LDP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json load(const fs::path& p) { return Json::parse(read_text_file(p.string())); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sample-sao reruns are byte-identical") {
  const fs::path d = scratch();
  const std::string a = (d / "sao_a.json").string(), b = (d / "sao_b.json").string();
  REQUIRE(run("sample-sao --beta 2 --lambda-max 6 --seed 7 --out " + a) == 0);
  REQUIRE(run("sample-sao --beta 2 --lambda-max 6 --seed 7 --out " + b) == 0);
  const std::string first = read_text_file(a);
  std::string ta = first, tb = read_text_file(b);
  // the output path is part of the recorded spec
  const auto pos = ta.find("sao_a.json");
  REQUIRE(pos != std::string::npos);
  ta.replace(pos, 10, "sao_b.json");
  CHECK(ta == tb);
  const Json j = load(b);
  CHECK(j.at("schema") == "airy-ldp/1");
  CHECK(j.contains("version"));
  CHECK(j.at("spec").at("seed") == 7);
  CHECK(j.at("tolerances").at("dt") == 1e-3);
  CHECK(j.at("result").at("eigenvalues").is_array());
  REQUIRE(run("sample-sao --beta 2 --lambda-max 6 --seed 7 --out " + a) == 0);
  CHECK(read_text_file(a) == first);
}

TEST_CASE("thread count does not change the output") {
  const fs::path d = scratch();
  const std::string a = (d / "tails.csv").string();
  REQUIRE(run("tails --t 1 --reps 10000 --seed 3 --threads 1 --format csv --out " + a) == 0);
  const std::string one = read_text_file(a);
  REQUIRE(run("tails --t 1 --reps 10000 --seed 3 --threads 4 --format csv --out " + a) == 0);
  CHECK(read_text_file(a) == one);
  CHECK(one.rfind("# schema: airy-ldp/1", 0) == 0);
  CHECK(one.find("# tolerances: ") != std::string::npos);
}

TEST_CASE("distance equals the library value") {
  const fs::path d = scratch();
  const SignedMeasure a({{-1.0, 0.5}, {2.25, 0.3}}, {-4.0, -2.0, 1.0}, {0.1, -0.2});
  const SignedMeasure b({{0.5, 1.0}}, {0.0, 3.0}, {0.25});
  write_text_file((d / "a.json").string(), measure_to_json(a).dump());
  write_text_file((d / "b.json").string(), measure_to_json(b).dump());
  const std::string out = (d / "dist.json").string(), wit = (d / "witness.csv").string();
  REQUIRE(run("distance --a " + (d / "a.json").string() + " --b " + (d / "b.json").string() + " --r 10 --out " +
              out + " --witness " + wit) == 0);
  const Json j = load(out);
  CHECK(j.at("result").at("value").get<double>() == kr_distance(a, b, 10.0, 0.01).value);
  CHECK(fs::exists(wit));
}

TEST_CASE("exit codes") {
  const fs::path d = scratch();
  CHECK(run("sample-sao --beta -1") == 2);
  CHECK(run("tails --reps 10") == 2);
  CHECK(run("sample-gbe --n 1") == 2);
  CHECK(run("distance --a /nonexistent.json --b /nonexistent.json") == 2);
  CHECK(run("ldp-trend --delta 0.3 --reps 10 --shift 0.5 --target x.json") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("sample-sao --lambda-max 800 --out " + (d / "fail.json").string()) == 3);
  CHECK(load(d / "fail.json").at("error") == "numerical");
  CHECK(run("verify --quick --criteria 4 --out " + (d / "verify.json").string()) == 0);
  CHECK(load(d / "verify.json").at("result").at("passed") == true);
}

}
