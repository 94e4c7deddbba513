#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "heights/cli.hpp"
#include "heights/enumerate.hpp"
#include "heights/igusa.hpp"
#include "json.hpp"

using namespace heights;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = std::string(HEIGHTS_TMP_DIR) + "/" + name;
  std::ofstream(path) << content;
  return path;
}

const std::string kDatum = std::string(HEIGHTS_DATA_DIR) + "/p1-anticanonical.json";

}  // namespace

TEST_CASE("count") {
  auto r = run({"count", "--pn", "1", "--B", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out == "B,N\n1,4\n2,8\n");
  auto again = CountSeries::from_csv(r.out);
  CHECK(again.entries().back().second == 8);

  const std::string spec = temp_file("conic.json", R"({"n":2,"polys":[{"terms":[{"c":1,"e":[1,0,1]},{"c":-1,"e":[0,2,0]}]}]})");
  auto c = run({"count", "--spec", spec, "--B", "1,10,100", "--threads", "2"});
  CHECK(c.code == 0);
  const std::int64_t bs[] = {1, 10, 100};
  CHECK(c.out == count_series(VarietySpec::from_json(nlohmann::json::parse(std::ifstream(spec))), bs).to_csv());

  CHECK(run({"count", "--pn", "1", "--B", "2,1"}).code == 2);
  CHECK(run({"count", "--pn", "1", "--B", "x"}).code == 2);
  CHECK(run({"count", "--B", "4"}).code == 2);
  CHECK(run({"count", "--pn", "1", "--spec", spec, "--B", "4"}).code == 2);
}

TEST_CASE("height") {
  auto r = run({"height", "--point", "3,5,15"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["H"] == "15");
  CHECK(j["h"].get<double>() == doctest::Approx(std::log(15.0)));
  CHECK(j["section"] == 2);
  double product = 1;
  for (const auto& f : j["local_factors"]) product *= f["value"].get<double>();
  CHECK(product == doctest::Approx(1.0 / 15));

  auto q = nlohmann::json::parse(run({"height", "--point", "1/2,-3/4,0.5"}).out);
  CHECK(q["point"] == nlohmann::json::array({2, -3, 2}));
  CHECK(q["H"] == "3");

  auto fs = nlohmann::json::parse(run({"height", "--point", "3,4", "--metric", "fs"}).out);
  CHECK(fs["h"].get<double>() == doctest::Approx(std::log(5.0)));

  CHECK(run({"height", "--point", "0,0"}).code == 2);
  CHECK(run({"height", "--point", "1,2", "--metric", "l2"}).code == 2);
  CHECK(run({"height", "--point", "0,2", "--section", "0"}).code == 2);
}

TEST_CASE("enumerate") {
  auto r = run({"enumerate", "--pn", "1", "--B", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "x0,x1,H\n0,1,1\n1,-1,1\n1,0,1\n1,1,1\n");
  auto j = nlohmann::json::parse(run({"enumerate", "--pn", "1", "--B", "2", "--format", "json"}).out);
  CHECK(j.size() == 8);
  CHECK(run({"enumerate", "--pn", "1", "--B", "2", "--format", "xml"}).code == 2);
}

TEST_CASE("circle") {
  CHECK(run({"circle", "--B", "10"}).out == "317\n");
  CHECK(run({"circle", "--B", "5/2"}).out == "21\n");
  CHECK(run({"circle", "--B", "2.5"}).out == "21\n");
  CHECK(run({"circle", "--n", "3", "--B", "1", "--norm", "sup"}).out == "27\n");
  CHECK(run({"circle", "--B", "2.x"}).code == 2);
}

TEST_CASE("zeta") {
  auto r = run({"zeta", "--pn", "1", "--s", "4", "--B", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out == "B,re,im\n1,4.0,0.0\n2,4.25,0.0\n");
  auto grid = run({"zeta", "--pn", "1", "--s", "0,1.5-2i", "--B", "3"});
  CHECK(grid.out.rfind("s_re,s_im,B,re,im\n0.0,0.0,3,", 0) == 0);
  CHECK(grid.out.find("\n1.5,-2.0,3,") != std::string::npos);
  CHECK(run({"zeta", "--pn", "1", "--s", "1+", "--B", "3"}).code == 2);
}

TEST_CASE("fit") {
  const auto series = run({"count", "--pn", "1", "--B", "10,30,100,300,1000,3000,10000,30000"}).out;
  const auto path = temp_file("series.csv", series);
  auto r = run({"fit", "--series", path});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["t"] == 1);
  CHECK(j["a"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(j["c"].get<double>() == doctest::Approx(12 / (std::numbers::pi * std::numbers::pi)).epsilon(0.05));
  for (const char* key : {"c", "a", "t", "residual"}) CHECK(j.contains(key));

  auto ab = nlohmann::json::parse(run({"fit", "--series", path, "--abscissa"}).out);
  CHECK(ab["slope"].get<double>() == doctest::Approx(2.0).epsilon(0.02));

  CHECK(run({"fit", "--series", temp_file("short.csv", "B,N\n1,4\n2,8\n")}).code == 2);
  CHECK(run({"fit", "--series", temp_file("bad.csv", "B;N\n")}).code == 2);
  CHECK(run({"fit", "--series", "/nonexistent/file.csv"}).code == 2);
}

TEST_CASE("igusa-local") {
  auto r = run({"igusa-local", "--datum", kDatum, "--q", "5", "--s", "1"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["exact"] == "6/5");
  CHECK(j["re"].get<double>() == doctest::Approx(1.2));

  auto two = nlohmann::json::parse(run({"igusa-local", "--datum", kDatum, "--q", "5", "--s", "2"}).out);
  CHECK(two["exact"] == "156/155");

  auto pole = run({"igusa-local", "--datum", kDatum, "--q", "5", "--s", "0.5"});
  CHECK(pole.code == 3);
  CHECK(pole.err.find("alpha") != std::string::npos);

  CHECK(run({"igusa-local", "--datum", kDatum, "--q", "4", "--s", "1"}).code == 2);
}

TEST_CASE("malformed JSON reports line and column") {
  const auto path = temp_file("broken.json", "{\"dim\": 1,\n  \"components\": [,]\n}");
  auto r = run({"igusa-local", "--datum", path, "--q", "5", "--s", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find(path + ":2:18:") != std::string::npos);
}

TEST_CASE("igusa-global") {
  auto r = run({"igusa-global", "--datum", kDatum, "--cutoff", "100000", "--B", "1000000", "--s", "1"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const double want = 12 / (std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(j["leading_constant"].get<double>() / want - 1) < 0.01);
  CHECK(j["volume"][0]["V"].get<double>() == doctest::Approx(want * 1e6).epsilon(0.01));
  CHECK(j["product"]["assembled"].is_null());
  CHECK(j["product"]["leading"].get<double>() == doctest::Approx(j["leading_constant"].get<double>()));

  auto resource = run({"igusa-global", "--datum", kDatum, "--cutoff", "1000000000"});
  CHECK(resource.code == 3);
}

TEST_CASE("strata") {
  const auto spec = temp_file("p1.json", R"({"n":1,"polys":[],"boundary":[{"terms":[{"c":1,"e":[1,0]}]}],"labels":["alpha"]})");
  auto r = run({"strata", "--spec", spec, "--p", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"p\":5,\"strata\":{\"\":5,\"alpha\":1}}\n");
  CHECK(run({"strata", "--spec", spec, "--p", "5", "--bad", "5"}).code == 2);
  const auto big = temp_file("p3.json", R"({"n":3,"polys":[]})");
  CHECK(run({"strata", "--spec", big, "--p", "1009"}).code == 3);
}

TEST_CASE("flags, help and threads") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("igusa-global") != std::string::npos);

  const std::vector<std::string> args = {"count", "--pn", "2", "--B", "5,10,20", "--threads", "1"};
  CHECK(run(args).out == run(args).out);
  CHECK(run(args).out == run({"count", "--pn", "2", "--B", "5,10,20", "--threads", "4"}).out);

  ::setenv("HEIGHTS_THREADS", "3", 1);
  CHECK(run({"count", "--pn", "1", "--B", "1,2"}).code == 0);
  ::setenv("HEIGHTS_THREADS", "many", 1);
  CHECK(run({"count", "--pn", "1", "--B", "1,2"}).code == 2);
  ::unsetenv("HEIGHTS_THREADS");
}
