#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <json.hpp>
#include <sstream>

#include "wem/cli.hpp"

using nlohmann::json;
using namespace wem;

namespace {

struct Outcome {
  int code;
  json report;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = runCli(args, out, err);
  json report;
  try {
    report = json::parse(out.str());
  } catch (const json::exception&) {
    report = out.str();
  }
  return {code, report, err.str()};
}

std::string writeTemp(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "wem_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path.string();
}

const std::string kT = R"({"dimension": 2, "halfspaces": [{"normal": [1, 0], "offset": 0},
  {"normal": [0, 1], "offset": 0}, {"normal": [-2, -1], "offset": 2}]})";
const std::string kSquare = R"({"dimension": 2, "halfspaces": [{"normal": [1, 0], "offset": 0},
  {"normal": [0, 1], "offset": 0}, {"normal": [-1, 0], "offset": 1}, {"normal": [0, -1], "offset": 1}]})";

}  // namespace

TEST_CASE("verify") {
  const auto t = run({"verify", writeTemp("t.json", kT)});
  CHECK(t.code == 0);
  CHECK(t.report["result"]["vertices"].size() == 3);
  CHECK(t.report["result"]["regular"] == false);

  const auto redundant = run({"verify", writeTemp("redundant.json", R"({"dimension": 2, "halfspaces": [
    {"normal": [1, 0], "offset": 0}, {"normal": [0, 1], "offset": 0}, {"normal": [-1, 0], "offset": 1},
    {"normal": [0, -1], "offset": 1}, {"normal": [-1, 0], "offset": 2}]})")});
  CHECK(redundant.code == 1);
  CHECK(redundant.report["error"]["kind"] == "redundant");
  CHECK(redundant.report["error"]["message"].get<std::string>().find("4") != std::string::npos);

  const auto halfDiamond = run({"verify", writeTemp("half.json", R"({"dimension": 2, "halfspaces": [
    {"normal": [1, 0], "offset": 0}, {"normal": [0, 1], "offset": 0}, {"normal": [-2, -2], "offset": 1}]})")});
  CHECK(halfDiamond.code == 1);
  CHECK(halfDiamond.report["error"]["kind"] == "non-primitive");

  const auto malformed = run({"verify", writeTemp("bad.json", R"({"dimension": 2, "halfspaces": [)")});
  CHECK(malformed.code == 2);
  CHECK(malformed.report["error"]["type"] == "input");
  CHECK(run({"verify", "/nonexistent/polytope.json"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("sum") {
  const auto square = writeTemp("square.json", kSquare);
  const auto t = writeTemp("t.json", kT);
  CHECK(run({"sum", square, "--q", "1/2"}).report["result"]["value"] == "1");
  CHECK(run({"sum", t, "--q", "1"}).report["result"]["value"] == "4");
  CHECK(run({"sum", t, "--q", "0"}).report["result"]["value"] == "0");
  // x + y over T at q = 1: (1,0), (0,1), (0,2)
  CHECK(run({"sum", t, "--q", "1", "--poly", R"([{"exponents": [1, 0], "coefficient": 1},
    {"exponents": [0, 1], "coefficient": 1}])"}).report["result"]["value"] == "4");
  CHECK(run({"sum", t, "--q", "1/0"}).code == 2);
  CHECK(run({"sum", t, "--q", "1", "--poly", R"([{"exponents": [1], "coefficient": 1}])"}).code == 2);
}

TEST_CASE("em exact path") {
  const auto t = writeTemp("t.json", kT);
  const auto square = writeTemp("square.json", kSquare);
  const std::string xy = R"([{"exponents": [1, 1], "coefficient": "3/2"}, {"exponents": [0, 2], "coefficient": 1}])";
  for (const std::string q : {"0", "1/3", "1/2", "1", "2"}) {
    const auto r = run({"em", t, "--q", q, "--poly", xy, "--compare-oracle"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["oracleMatch"] == true);
    CHECK(r.report["result"]["remainder"] == "0");
    CHECK(r.report["manifest"]["ambientOrder"] == 2);
  }
  // one (F, gamma) per face of the polytope plus the Z/2 element at (1, 0)
  const auto r = run({"em", t, "--q", "1/3", "--poly", xy});
  CHECK(r.report["result"]["contributions"].size() == 2);
  CHECK(r.report["result"]["contributions"][1]["facets"] == json::array({1, 2}));

  // too small an order misses the oracle
  const auto low = run({"em", t, "--q", "1/3", "--poly", xy, "--k", "2", "--compare-oracle"});
  CHECK(low.code == 1);
  CHECK(low.report["result"]["oracleMatch"] == false);

  const auto fast = run({"em", square, "--q", "2/7", "--poly", xy, "--regular-fastpath"});
  CHECK(fast.code == 0);
  CHECK(fast.report["result"]["regularFastPath"]["agreesWithGeneric"] == true);
  CHECK(fast.report["result"]["regularFastPath"]["mainTerm"] == fast.report["result"]["mainTerm"]);
  CHECK(run({"em", t, "--q", "1/3", "--poly", xy, "--regular-fastpath"}).code == 2);

  const auto half = run({"em", square, "--q", "1/2", "--poly", R"([{"exponents": [0, 0], "coefficient": 1}])"});
  CHECK(half.report["result"]["operator"] == "L");
  CHECK(half.report["result"]["mainTerm"] == "1");

  CHECK(run({"em", t, "--q", "1/3"}).code == 2);
  CHECK(run({"em", t, "--q", "1/3", "--poly", xy, "--xi", "1,0"}).code == 2);
}

TEST_CASE("em is identical across thread counts and replays from its manifest") {
  const auto t = writeTemp("t.json", kT);
  const std::vector<std::string> args{"em", t, "--q", "1/3", "--poly", R"([{"exponents": [2, 1], "coefficient": 5}])"};
  setenv("WEM_THREADS", "1", 1);
  const auto one = run(args);
  setenv("WEM_THREADS", "4", 1);
  const auto four = run(args);
  unsetenv("WEM_THREADS");
  CHECK(one.report["manifest"]["threads"] == 1);
  CHECK(four.report["manifest"]["threads"] == 4);
  CHECK(one.report["result"].dump() == four.report["result"].dump());

  const auto replay = run(one.report["manifest"]["arguments"].get<std::vector<std::string>>());
  CHECK(replay.report["result"].dump() == one.report["result"].dump());
  CHECK(one.report["manifest"]["version"].get<std::string>().size() > 0);
  CHECK(one.report["manifest"]["input"]["polytope"]["dimension"] == 2);
  CHECK(one.report["manifest"]["tolerances"]["exact"] == 0);
}

TEST_CASE("em smooth path") {
  const auto t = writeTemp("t.json", kT);
  const std::string bump = R"({"family": "centroid", "scale": 2.5})";
  const auto a = run({"em", t, "--q", "1/3", "--k", "3", "--bump", bump, "--xi", "1,3"});
  const auto b = run({"em", t, "--q", "1/3", "--k", "3", "--bump", bump, "--xi", "-2,5"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.report["manifest"]["xi"] == json::array({"1", "3"}));
  const auto& ra = a.report["result"];
  const auto& rb = b.report["result"];
  CHECK(ra["achievedTolerance"].get<double>() < 1e-9);
  CHECK(ra["mainTerm"]["re"].get<double>() == doctest::Approx(rb["mainTerm"]["re"].get<double>()).epsilon(1e-9));
  CHECK(ra["remainderByCones"]["re"].get<double>() ==
        doctest::Approx(ra["remainderByDifference"]["re"].get<double>()).epsilon(1e-6));
  CHECK(std::abs(ra["weightedSum"].get<double>() - ra["mainTerm"]["re"].get<double>() -
                 ra["remainderByDifference"]["re"].get<double>()) < 1e-12);
  CHECK(run({"em", t, "--q", "1/3", "--bump", bump, "--compare-oracle"}).code == 2);
  CHECK(run({"em", t, "--q", "1/3", "--bump", R"({"family": "nope"})"}).code == 2);
}

TEST_CASE("groups and decompose") {
  const auto t = run({"groups", writeTemp("t.json", kT)});
  CHECK(t.code == 0);
  CHECK(t.report["result"]["ambientOrder"] == 2);
  int nontrivial = 0;
  for (const auto& f : t.report["result"]["faces"]) {
    if (f["order"] == 1) continue;
    ++nontrivial;
    CHECK(f["facets"] == json::array({1, 2}));
    CHECK(f["invariantFactors"] == json::array({2}));
    CHECK(f["elements"][1]["rotations"] == json::array({"1/2", "1/2"}));
    CHECK(f["elements"][1]["flat"] == true);
    CHECK(f["elements"][0]["flat"] == false);
  }
  CHECK(nontrivial == 1);

  const auto square = writeTemp("square.json", kSquare);
  for (const std::string xi : {"1,2", "-3,1", ""}) {
    std::vector<std::string> args{"decompose", square};
    if (!xi.empty()) args.insert(args.end(), {"--xi", xi});
    const auto d = run(args);
    REQUIRE(d.code == 0);
    std::multiset<int> flips;
    for (const auto& c : d.report["result"]["cones"]) flips.insert(c["flips"].get<int>());
    CHECK(flips == std::multiset<int>{0, 1, 1, 2});
  }
  CHECK(run({"decompose", square, "--xi", "0,1"}).code == 2);
}

TEST_CASE("em1d") {
  const auto r = run({"em1d", "--a", "0", "--b", "5", "--q", "1/3"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["exactWeightedSum"] == "14/3");
  CHECK(r.report["result"]["exactMainTerm"] == "14/3");

  const auto ray = run({"em1d", "--a", "0", "--q", "1/2", "--m", "4", "--function", R"({"center": 1.3, "radius": 2.0})"});
  CHECK(ray.code == 0);
  CHECK(ray.report["result"]["kind"] == "ray");
  CHECK(std::abs(ray.report["result"]["remainderByDifference"]["re"].get<double>() -
                 ray.report["result"]["remainderByIntegral"]["re"].get<double>()) < 1e-8);

  const auto twisted = run({"em1d", "--a", "0", "--q", "1/3", "--m", "3", "--twist", "1/4", "--function",
                            R"({"center": 0.4, "radius": 1.5, "multiplier": [1, 2]})"});
  CHECK(twisted.code == 0);
  CHECK(twisted.report["result"]["kind"] == "twisted-ray");
  CHECK(std::abs(twisted.report["result"]["remainderByDifference"]["im"].get<double>() -
                 twisted.report["result"]["remainderByIntegral"]["im"].get<double>()) < 1e-8);

  CHECK(run({"em1d", "--a", "0", "--q", "1/3"}).code == 2);
  CHECK(run({"em1d", "--a", "3", "--b", "1", "--q", "1/3"}).code == 2);
}
