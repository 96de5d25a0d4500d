#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qsu2/cli.hpp"

using namespace qsu2;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double qnum(double q, double x) { return (std::pow(q, -x) - std::pow(q, x)) / (1 / q - q); }

}  // namespace

TEST_CASE("zeta command") {
  const Run r = run({"zeta", "--q", "1/2", "--a", "2", "--b", "1", "--z", "5"});
  CHECK(r.code == kExitPass);
  const Json j = r.json();
  CHECK(j["schema"] == "qsu2/1");
  CHECK(j["command"] == "zeta");
  CHECK(std::isfinite(j["value_re"].get<double>()));
  CHECK(j["value_im"].get<double>() == 0.0);
  CHECK(j["tail_bound"].get<double>() < 1e-20);
  CHECK(j["k_truncation"].get<unsigned>() > 0);

  // b = 0 is fine for evaluation
  CHECK(run({"zeta", "--q", "1/2", "--a", "2", "--b", "0", "--z", "5"}).code == kExitPass);

  const Run pole = run({"zeta", "--z", "3", "--a", "2", "--b", "1"});
  CHECK(pole.code == kExitPole);
  const Json pj = pole.json();
  CHECK(pj["status"] == "pole_hit");
  CHECK(pj["pole"]["location"].get<double>() == doctest::Approx(3.0));
  CHECK(pj["pole"]["order"] == "simple");
  CHECK(pj["exit_code"] == 3);
  CHECK(!pole.err.empty());

  const Run div = run({"zeta", "--a", "1", "--b", "1", "--z", "5"});
  CHECK(div.code == kExitInvalid);
  CHECK(div.json()["error"]["type"] == "DivergentParameters");
}

TEST_CASE("residue command") {
  const Run n = run({"residue", "--at", "n", "--a", "2", "--b", "1", "--q", "1/2"});
  CHECK(n.code == kExitPass);
  const Json j = n.json();
  CHECK(j["residue_re"].get<double>() == doctest::Approx(14.6074).epsilon(1e-5));
  CHECK(j["order"] == "simple");
  CHECK(j["cross_check_ok"] == true);

  const Run n2 = run({"residue", "--at", "n-2", "--a", "2"});
  CHECK(n2.code == kExitPass);
  CHECK(std::abs(n2.json()["residue_re"].get<double>()) < 1e-10);

  const Run dbl = run({"residue", "--at", "n", "--b", "0"});
  CHECK(dbl.code == kExitInvalid);
  CHECK(dbl.json()["error"]["type"] == "DoublePole");

  const Run g = run({"residue", "--at", "4.5", "--a", "2.5", "--gamma", "--mode", "fast"});
  CHECK(g.code == kExitPass);
  // Gamma(7/2) = 15 sqrt(pi) / 8
  const Json gj = g.json();
  CHECK(gj["gamma_weighted"]["re"].get<double>() ==
        doctest::Approx(gj["residue_re"].get<double>() * 15.0 * std::sqrt(M_PI) / 8.0));

  CHECK(run({"residue", "--at", "nowhere"}).code == kExitInvalid);
}

TEST_CASE("haar command") {
  const Run bc = run({"haar", "--expr", "b c", "--a", "2", "--q", "1/4"});
  CHECK(bc.code == kExitPass);
  const Json j = bc.json();
  CHECK(j["phi_tilde"]["re"].get<double>() == doctest::Approx(-4.0 / 17.0).epsilon(1e-12));
  CHECK(j["haar_exact"] == "-4/17");
  CHECK(j["pass"] == true);
  CHECK(j["a_independent"] == true);

  const Json one = run({"haar", "--expr", "1"}).json();
  CHECK(one["phi_tilde"]["re"].get<double>() == 1.0);
  CHECK(one["haar"].get<double>() == 1.0);
  CHECK(one["pass"] == true);

  const Json ab = run({"haar", "--expr", "a b"}).json();
  CHECK(ab["phi_tilde"]["re"].get<double>() == 0.0);
  CHECK(ab["haar"].get<double>() == 0.0);
  CHECK(ab["pass"] == true);

  const Json mixed = run({"haar", "--expr", "2 b c - a d", "--q", "1/2"}).json();
  CHECK(mixed["terms"].size() == 2);
  CHECK(mixed["haar"].get<double>() == doctest::Approx(-2.0 / qnum(0.5, 2) - (1.0 - 0.5 / qnum(0.5, 2))));

  const Run bad = run({"haar", "--expr", "a x"});
  CHECK(bad.code == kExitInvalid);
  CHECK(bad.json()["error"]["type"] == "ParseError");
}

TEST_CASE("verify and scan-a2 commands") {
  const Run alg = run({"verify", "--suite", "algebra", "--q", "1/4"});
  CHECK(alg.code == kExitPass);
  const Json j = alg.json();
  CHECK(j["pass"] == true);
  CHECK(j["passed"] == j["total"]);
  for (const auto& c : j["checks"]) CHECK_MESSAGE(c["pass"] == true, c["name"].get<std::string>());

  const Run integ = run({"verify", "--suite", "integral", "--q", "1/2"});
  CHECK(integ.code == kExitPass);

  const Run scan = run({"scan-a2", "--q", "1/2", "--a-min", "1.5", "--a-max", "3"});
  CHECK(scan.code == kExitPass);
  const Json sj = scan.json();
  REQUIRE(sj["roots"].size() == 1);
  CHECK(std::abs(sj["roots"][0].get<double>() - 2.0) < 1e-8);

  CHECK(run({"scan-a2", "--a-min", "0.5"}).code == kExitInvalid);
}

TEST_CASE("output is byte-identical for identical config and seed") {
  const std::vector<std::vector<std::string>> cmds{
      {"verify", "--suite", "algebra", "--q", "9/16", "--seed", "7"},
      {"zeta", "--q", "3/10", "--z", "4", "--zi", "0.5"},
      {"haar", "--expr", "a^2 d^2 - b c", "--output", "csv"},
      {"residue", "--at", "n", "--output", "table"},
  };
  for (const auto& c : cmds) {
    const Run x = run(c), y = run(c);
    CHECK(x.code == y.code);
    CHECK(x.out == y.out);
  }
  // the seed only changes which random elements are drawn
  const Json s1 = run({"verify", "--suite", "algebra", "--seed", "1"}).json();
  const Json s2 = run({"verify", "--suite", "algebra", "--seed", "2"}).json();
  CHECK(s1["pass"] == true);
  CHECK(s2["pass"] == true);
  CHECK(s1["config"]["seed"] == 1);
  CHECK(s2["config"]["seed"] == 2);
}

TEST_CASE("output formats") {
  const Run csv = run({"zeta", "--z", "5", "--output", "csv"});
  CHECK(csv.out.rfind("key,value\nschema,qsu2/1\n", 0) == 0);
  CHECK(csv.out.find("\nvalue.re_str,") != std::string::npos);
  const Run table = run({"haar", "--expr", "b c", "--output", "table"});
  CHECK(table.out.rfind("schema", 0) == 0);
  CHECK(table.out.find("terms.0.monomial") != std::string::npos);
  CHECK(run({"zeta", "--z", "5", "--output", "xml"}).code == kExitInvalid);
}

TEST_CASE("invalid parameters and exit codes") {
  CHECK(run({"zeta", "--z", "5", "--q", "2"}).code == kExitInvalid);
  CHECK(run({"zeta", "--z", "5", "--q", "0"}).code == kExitInvalid);
  CHECK(run({"zeta", "--z", "5", "--prec", "32"}).code == kExitInvalid);
  CHECK(run({"zeta", "--z", "5", "--q", "one half"}).code == kExitInvalid);
  CHECK(run({"verify", "--lmax", "1/3"}).code == kExitInvalid);
  CHECK(run({"verify", "--suite", "everything"}).code == kExitInvalid);
  CHECK(run({}).code == kExitInvalid);
  CHECK(run({"frobnicate"}).code == kExitInvalid);
  CHECK(run({"zeta"}).code == kExitInvalid);
  CHECK(run({"--help"}).code == kExitPass);
}

TEST_CASE("config file merged under flags") {
  const std::string path = "test_cli_config.ini";
  {
    std::ofstream f(path);
    f << "q = 1/4\na = 3\n";
  }
  const Json j = run({"haar", "--expr", "b c", "--config", path}).json();
  CHECK(j["config"]["q"] == "1/4");
  CHECK(j["config"]["a"].get<double>() == 3.0);
  CHECK(j["haar_exact"] == "-4/17");
  const Json k = run({"haar", "--expr", "b c", "--config", path, "--q", "1/2"}).json();
  CHECK(k["config"]["q"] == "1/2");
  CHECK(k["config"]["a"].get<double>() == 3.0);
  std::remove(path.c_str());
  CHECK(run({"haar", "--config", "no_such_file.ini"}).code == kExitInvalid);
}
