#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bihc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = bihc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json strip_time(nlohmann::json doc) {
  doc.erase("wall_time_ms");
  return doc;
}

}  // namespace

using bihc::cli::kExitInput;
using bihc::cli::kExitOk;
using bihc::cli::kExitRefused;

TEST_CASE("gen then exact on a star") {
  REQUIRE(run({"gen", "--family", "star_center_L", "--k", "2", "--out", "cli_star.txt"}).code == kExitOk);
  const Result r = run({"exact", "cli_star.txt", "--lambda-l", "1", "--lambda-r", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("Z = 5\n", 0) == 0);

  const Result j = run({"exact", "cli_star.txt", "--json", "--set", "R0,R1"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["Z"].get<double>() == doctest::Approx(5.0));
  CHECK(doc["queries"][0]["marginal"].get<double>() == doctest::Approx(0.2));
}

TEST_CASE("complex exact") {
  REQUIRE(run({"gen", "--family", "complete_bipartite", "--a", "1", "--b", "1", "--out", "cli_k11.txt"}).code == kExitOk);
  const Result r = run({"exact", "cli_k11.txt", "--json", "--lambda-l-re", "-12", "--lambda-r-re", "0.1"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["Z_re"].get<double>() == doctest::Approx(-10.9));
}

TEST_CASE("check on a biregular graph") {
  REQUIRE(run({"gen", "--family", "random_biregular", "--d-l", "2", "--d-r", "4", "--n-l", "4",
               "--seed", "1", "--out", "cli_bireg.txt"})
              .code == kExitOk);
  const Result r = run({"check", "cli_bireg.txt", "--lambda-l", "50", "--lambda-r", "0.1", "--json"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["main_condition"]["holds"].get<bool>());
  CHECK(doc["certificate"]["mode"] == "analytic");
  CHECK(doc["certificate"]["eta"].get<double>() == 0.1);
}

TEST_CASE("count emits the result schema") {
  const Result r = run({"count", "cli_bireg.txt", "--lambda-l", "50", "--lambda-r", "0.1", "--eps", "0.3"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  for (const char* key : {"log_Z_estimate", "epsilon", "m_used", "eta", "certificate_mode",
                          "error_bound", "n_L", "n_R", "wall_time_ms"})
    CHECK(doc.contains(key));
  CHECK(doc.size() == 9);

  const Result again = run({"count", "cli_bireg.txt", "--lambda-l", "50", "--lambda-r", "0.1", "--eps", "0.3"});
  CHECK(strip_time(nlohmann::json::parse(again.out)) == strip_time(doc));

  const Result exact = run({"exact", "cli_bireg.txt", "--lambda-l", "50", "--lambda-r", "0.1", "--json"});
  CHECK(std::abs(nlohmann::json::parse(exact.out)["log_Z"].get<double>() -
                 doc["log_Z_estimate"].get<double>()) <= 0.3);
}

TEST_CASE("count refuses without a certificate") {
  const Result r = run({"count", "cli_star.txt", "--lambda-l", "1", "--lambda-r", "1", "--eps", "0.1"});
  CHECK(r.code == kExitRefused);
  CHECK(r.err.find("certification failed; try `exact`") != std::string::npos);
}

TEST_CASE("input errors") {
  CHECK(run({"exact", "does_not_exist.txt"}).code == kExitInput);
  CHECK(run({"count", "cli_star.txt", "--bogus"}).code == kExitInput);
  CHECK(run({"frobnicate"}).code == kExitInput);

  {
    std::ofstream bad("cli_bad.txt");
    bad << "2 1\n0 0\n0 0\n";
  }
  const Result r = run({"exact", "cli_bad.txt", "--json"});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("line 3") != std::string::npos);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["exit_code"] == kExitInput);
  CHECK(doc.contains("error"));

  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("sample writes JSON lines") {
  const Result r = run({"sample", "cli_bireg.txt", "--lambda-l", "50", "--lambda-r", "0.1",
                        "--eps", "0.1", "--n", "20", "--seed", "4"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  int draws = 0;
  nlohmann::json last;
  while (std::getline(lines, line)) {
    last = nlohmann::json::parse(line);
    if (last.is_array()) ++draws;
  }
  CHECK(draws == 20);
  CHECK(last["summary"]["draws"] == 20);
  CHECK(run({"sample", "cli_bireg.txt", "--lambda-l", "50", "--lambda-r", "0.1", "--eps", "0.1",
             "--n", "20", "--seed", "4"})
            .out == r.out);
  CHECK(run({"sample", "cli_star.txt", "--n", "5"}).code == kExitRefused);
  CHECK(run({"sample", "cli_star.txt", "--n", "5", "--backend", "exact"}).code == kExitOk);
}

TEST_CASE("decay and zeros") {
  REQUIRE(run({"gen", "--family", "even_cycle", "--length", "12", "--out", "cli_c12.txt"}).code == kExitOk);
  const Result d = run({"decay", "cli_c12.txt", "--lambda-l", "50", "--lambda-r", "0.1", "--m", "6", "--max-set", "2"});
  REQUIRE(d.code == kExitOk);
  CHECK(d.out.rfind("query_id,kind,distance_or_mst,value,bound,satisfied\n", 0) == 0);
  CHECK(d.out.find(",false") == std::string::npos);

  const Result z = run({"zeros", "cli_c12.txt", "--region-l", "50", "--region-r", "0.1",
                        "--samples", "100", "--seed", "2", "--json"});
  REQUIRE(z.code == kExitOk);
  CHECK(nlohmann::json::parse(z.out)["zeros_found"] == 0);
  CHECK(run({"zeros", "cli_star.txt", "--region-l", "0.5", "--region-r", "5"}).code == kExitRefused);
}
