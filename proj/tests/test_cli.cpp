#include <cmath>
#include <sstream>

#include "blochjac/cli.hpp"
#include "blochjac/fixtures.hpp"
#include "doctest.h"

using namespace blochjac;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string example(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"example"};
  full.insert(full.end(), args.begin(), args.end());
  Run r = run(full);
  REQUIRE(r.code == 0);
  return r.out;
}

bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

}  // namespace

TEST_CASE("example documents") {
  json d = json::parse(example({"example3", "--t", "1"}));
  CHECK(d["schema"] == "blochjac/1");
  CHECK(d["p"] == 2);
  CHECK(d["m"] == 2);
  // b_n = (α_{2n} β_{2n}; β_{2n} α_{2n+1}): b_1 = (-1 0; 0 0), b_2 = b_0 = (1 1; 1 0)
  CHECK(d["b"][0] == json::parse(R"([["-1","0"],["0","0"]])"));
  CHECK(d["b"][1] == json::parse(R"([["1","1"],["1","0"]])"));
  // a_1 = (1 β1; 0 1), a_2 = (1 β3; 0 1)
  CHECK(d["a"][0] == json::parse(R"([["1","0"],["0","1"]])"));

  d = json::parse(example({"example4", "--t", "0"}));
  CHECK(d["b"][0] == json::parse(R"([["0","0"],["0","1"]])"));
  CHECK(d["b"][1] == json::parse(R"([["0","0"],["0","1"]])"));

  d = json::parse(example({"free", "--p", "2", "--m", "2"}));
  CHECK(d["a"][1] == json::parse(R"([["1","0"],["0","1"]])"));
  CHECK(d["b"][1] == json::parse(R"([["0","0"],["0","0"]])"));

  // parsing the emitted document gives the same operator back
  PeriodicOperator op = cli::operator_from_json(json::parse(example({"example2-const", "--beta", "0.5"})));
  PeriodicOperator want = example2_const(Rational(1, 2));
  for (int n = 0; n < 2; ++n) {
    CHECK(op.a[n] == want.a[n]);
    CHECK(op.b[n] == want.b[n]);
  }
  CHECK(run({"example", "nope"}).code == 2);
}

TEST_CASE("bands command") {
  Run r = run({"bands"}, example({"example4", "--t", "0"}));
  REQUIRE(r.code == 0);
  json p = r.doc()["payload"];
  // branch bands [-2, 2] and [-1, 3]
  std::vector<std::pair<double, double>> bands;
  for (const auto& b : p["branch_bands"])
    for (const auto& iv : b) bands.emplace_back(iv[0].get<double>(), iv[1].get<double>());
  std::sort(bands.begin(), bands.end());
  REQUIRE(bands.size() == 2);
  CHECK(close(bands[0].first, -2));
  CHECK(close(bands[0].second, 2));
  CHECK(close(bands[1].first, -1));
  CHECK(close(bands[1].second, 3));
  CHECK(p["segments"].size() == 3);
  CHECK(p["segments"][1]["multiplicity"] == 2);

  r = run({"bands"}, example({"free", "--p", "2", "--m", "1"}));
  REQUIRE(r.code == 0);
  p = r.doc()["payload"];
  REQUIRE(p["segments"].size() == 1);
  CHECK(close(p["segments"][0]["lo"], -2));
  CHECK(close(p["segments"][0]["hi"], 2));

  // Example 3, t = 1: every edge is a periodic or antiperiodic eigenvalue
  r = run({"bands", "--grid", "129"}, example({"example3", "--t", "1"}));
  REQUIRE(r.code == 0);
  p = r.doc()["payload"];
  CHECK(p["edges"].size() == 8);
  for (const auto& e : p["edges"]) {
    bool classical = false;
    for (const auto& k : e["kinds"]) classical = classical || k == "periodic" || k == "antiperiodic";
    CHECK(classical);
  }
  CHECK(p["determinant"]["c"] == "1");
}

TEST_CASE("resonances command") {
  json p = run({"resonances"}, example({"example3", "--t", "0.5"})).doc()["payload"];
  REQUIRE(p["zeros"].size() == 2);
  CHECK(p["zeros"][0]["real"] == false);
  CHECK(close(p["zeros"][0]["value"][1].get<double>(), -p["zeros"][1]["value"][1].get<double>()));

  p = run({"resonances"}, example({"example3", "--t", "2"})).doc()["payload"];
  REQUIRE(p["zeros"].size() == 2);
  const double s = std::sqrt(1 - 0.25);
  CHECK(close(p["zeros"][0]["value"][0], (-1 - s) / 2));
  CHECK(close(p["zeros"][1]["value"][0], (-1 + s) / 2));
  CHECK(p["zeros"][1]["real"] == true);

  p = run({"resonances"}, example({"free", "--p", "2", "--m", "2"})).doc()["payload"];
  CHECK(p["degenerate"] == true);
  p = run({"resonances"}, example({"free", "--p", "3", "--m", "1"})).doc()["payload"];
  CHECK(p["rho"]["coefficients"] == json::parse(R"(["1"])"));
  CHECK(p["zeros"].empty());
}

TEST_CASE("lyapunov command") {
  // Example 3, t = 1: Δ = (z² - z - 3)/2 and (z² + z - 2)/2
  json p = run({"lyapunov", "--z", "0.5"}, example({"example3", "--t", "1"})).doc()["payload"];
  REQUIRE(p["points"].size() == 1);
  json br = p["points"][0]["branches"];
  CHECK(close(br[0]["value"][0], (0.25 - 0.5 - 3) / 2));
  CHECK(close(br[1]["value"][0], (0.25 + 0.5 - 2) / 2));
  json mult = p["points"][0]["multipliers"];
  CHECK(mult[0]["on_circle"] == false);
  CHECK(mult[1]["on_circle"] == true);

  // free scalar: Δ = z/2 at complex z
  p = run({"lyapunov", "--z", "1,1"}, example({"free", "--p", "1", "--m", "1"})).doc()["payload"];
  CHECK(close(p["points"][0]["branches"][0]["value"][0], 0.5));
  CHECK(close(p["points"][0]["branches"][0]["value"][1], 0.5));

  p = run({"lyapunov", "--z-grid", "-1:1:5"}, example({"example4", "--t", "0"})).doc()["payload"];
  REQUIRE(p["points"].size() == 5);
  CHECK(close(p["points"][2]["z"][0], 0));

  CHECK(run({"lyapunov"}, example({"example4", "--t", "0"})).code == 2);
}

TEST_CASE("recover command") {
  const std::string op = example({"example3", "--t", "1"});
  Run sd = run({"spectral-data", "--kappas", "0,pi,pi/2", "--rule", "descending"}, op);
  REQUIRE(sd.code == 0);
  Run r = run({"recover"}, sd.out);
  REQUIRE(r.code == 0);
  json p = r.doc()["payload"];
  REQUIRE(!p["exact"].is_null());
  json direct = run({"bands"}, op).doc()["payload"];
  CHECK(p["exact"]["D"] == direct["determinant"]["D"]);
  REQUIRE(p["bands"]["segments"].size() == direct["segments"].size());

  // free scalar, c = -1
  sd = run({"spectral-data"}, example({"free", "--p", "2", "--m", "1"}));
  p = run({"recover"}, sd.out).doc()["payload"];
  CHECK(close(p["c"], -1));
  CHECK(p["exact"]["c"] == "-1");

  json bad = json::parse(run({"spectral-data"}, op).out);
  bad["lambda"][0][0] = json::array({bad["lambda"][0][0], 0.5});
  r = run({"recover"}, bad.dump());
  CHECK(r.code == 4);
  CHECK(r.doc()["error"]["residuals"].size() == 3);

  bad = json::parse(run({"spectral-data"}, op).out);
  bad["lambda"][1].erase(0);
  CHECK(run({"recover"}, bad.dump()).code == 2);
}

TEST_CASE("verify command") {
  Run r = run({"verify"}, example({"free", "--p", "3", "--m", "2"}));
  CHECK(r.code == 0);
  CHECK(r.doc()["payload"]["ok"] == true);

  std::mt19937_64 rng(5);
  r = run({"verify", "--seed", "4"}, cli::operator_to_json(random_operator(rng, 2, 2)).dump());
  CHECK(r.code == 0);

  json asym = json::parse(example({"example4", "--t", "1"}));
  asym["b"][0][0][1] = "3";
  r = run({"verify"}, asym.dump());
  CHECK(r.code == 2);
  CHECK(r.doc()["error"]["violations"].size() == 1);
}

TEST_CASE("invalid documents") {
  CHECK(run({"bands"}, "not json").code == 2);
  CHECK(run({"bands"}, R"({"p": 1, "m": 1, "a": [[["1"]]], "b": [[[0.5]]]})").code == 2);
  CHECK(run({"bands"}, R"({"p": 1, "m": 1, "a": [[["0"]]], "b": [[["0"]]]})").code == 2);
  CHECK(run({"bands"}, R"({"schema": "other", "p": 1, "m": 1, "a": [[["1"]]], "b": [[["0"]]]})").code == 2);
  CHECK(run({"bands"}, R"({"p": 1, "m": 1, "a": [[["1"]]], "b": [[["1/3"]]]})").code == 0);
  CHECK(run({"bands", "--grid", "x"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("deterministic output") {
  const std::string op = example({"example4", "--t", "1/2"});
  for (const char* cmd : {"bands", "resonances", "verify"}) {
    Run a = run({cmd}, op), b = run({cmd}, op);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  CHECK(run({"bands"}, op).doc()["input_digest"] == cli::digest(op));
  CHECK(cli::digest("") == "cbf29ce484222325");
}

TEST_CASE("angles") {
  CHECK(close(cli::parse_angle("pi/2"), M_PI / 2));
  CHECK(close(cli::parse_angle("2pi/3"), 2 * M_PI / 3));
  CHECK(close(cli::parse_angle("-pi"), -M_PI));
  CHECK(close(cli::parse_angle("0.25"), 0.25));
  CHECK_THROWS(cli::parse_angle("pie"));
}
