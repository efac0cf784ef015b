#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "steckin/cli.hpp"

using namespace steckin;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "steckin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);)
    if (!l.empty()) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  return v;
}

std::string shell(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, f)) out.append(buf, n);
  pclose(f);
  return out;
}

}  // namespace

TEST_CASE("criteria examples and exit codes") {
  const auto lemma = run({"criteria", "--family", "lemma1", "--summary-only"});
  CHECK(lemma.code == 0);
  const auto h36 = run({"criteria", "--family", "h36", "--alpha", "1", "--p", "0.25"});
  CHECK(h36.code == 0);
  const auto ls = lines(h36.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == cli::kCsvHeader);
  CHECK(std::stod(fields(ls[1])[8]) == doctest::Approx(26.0).epsilon(1e-12));
  CHECK(run({"criteria", "--family", "crit14", "--p", "0.35"}).code == 1);
  CHECK(run({"criteria", "--family", "crit14", "--p", "0.34"}).code == 0);
  const auto bad = run({"criteria", "--family", "nonsense"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("every csv row has the header's column count") {
  const auto o = run({"criteria", "--family", "phi45", "--p", "0.3", "--r", "0.3", "--grid-count",
                      "101"});
  const auto ls = lines(o.out);
  REQUIRE(ls.size() > 2);
  const auto width = fields(cli::kCsvHeader).size();
  for (const auto& l : ls) CHECK(fields(l).size() == width);
}

TEST_CASE("threshold") {
  const auto o = run({"threshold", "--target", "p-star"});
  CHECK(o.code == 0);
  const auto ls = lines(o.out);
  REQUIRE(ls.size() == 4);
  const double v = std::stod(fields(ls[1])[8]);
  CHECK(v >= 0.346);
  CHECK(v <= 0.35);
  // Bracketing evidence: sign-opposite margins.
  CHECK(std::stod(fields(ls[2])[10]) >= 0.0);
  CHECK(std::stod(fields(ls[3])[10]) < 0.0);

  const auto a = run({"threshold", "--target", "alpha0-super-one", "--p", "2"});
  CHECK(a.code == 0);
  CHECK(std::stod(fields(lines(a.out)[1])[8]) == doctest::Approx(1.1972).epsilon(1e-3));
  CHECK(run({"threshold", "--target", "alpha0-sub-half", "--p", "0.5"}).code == 2);
  CHECK(run({"threshold", "--target", "unknown"}).code == 2);
}

TEST_CASE("construct") {
  const auto ok = run({"construct", "--construction", "main", "--p", "0.34"});
  CHECK(ok.code == 0);
  const auto chain = lines(ok.out);
  REQUIRE(chain.size() == 10002);
  CHECK(chain[0] == "n,b,w,nu,slack");
  CHECK(lines(ok.err)[0] == cli::kCsvHeader);

  const auto fail = run({"construct", "--construction", "main", "--p", "0.36", "--N", "100"});
  CHECK(fail.code == 1);
  CHECK(fields(lines(fail.err)[1])[8] == "1");

  CHECK(run({"construct", "--construction", "section4", "--p", "0.2", "--alpha", "1", "--N",
             "1000"})
            .code == 0);
  CHECK(run({"construct", "--construction", "main", "--p", "1.5"}).code == 2);
}

TEST_CASE("oracle examples") {
  const auto ce = run({"oracle", "--family", "reverse-hardy", "--p", "0.6", "--counterexample",
                       "--format", "json"});
  CHECK(ce.code == 1);
  const auto j = nlohmann::json::parse(ce.out);
  CHECK(j["pass"] == false);
  CHECK(j["certificate"]["unit_vector"] == 1);

  CHECK(run({"oracle", "--family", "weighted-reverse", "--p", "0.3", "--r", "0.3"}).code == 0);
  CHECK(run({"oracle", "--family", "dual", "--p", "0.346"}).code == 0);
  CHECK(run({"oracle", "--family", "reverse-hardy", "--p", "1.5"}).code == 2);
}

TEST_CASE("matnorm examples") {
  CHECK(run({"matnorm", "--generator", "power-weights(1.1)", "--check", "thm31", "--p", "2"})
            .code == 0);
  CHECK(run({"matnorm", "--generator", "power-weights(1.5)", "--check", "thm31", "--p", "2"})
            .code == 1);
  const auto rows = run({"matnorm", "--generator", "power-weights(1.1)", "--check", "cor1",
                         "--p", "2", "--N", "50", "--rows"});
  CHECK(rows.code == 0);
  CHECK(lines(rows.out).size() == 52);
  CHECK(run({"matnorm", "--generator", "bogus"}).code == 2);
}

TEST_CASE("json report shape") {
  const auto o = run({"criteria", "--family", "crit14", "--p", "0.34", "--format", "json"});
  const auto j = nlohmann::json::parse(o.out);
  REQUIRE(j.contains("pass"));
  REQUIRE(j.contains("rows"));
  const auto& row = j["rows"][0];
  for (const char* k : {"check_id", "p", "r", "alpha", "beta", "a", "N", "seed", "value",
                        "constant", "margin", "pass", "runtime_ms"})
    CHECK(row.contains(k));
}

TEST_CASE("seed, config file and jobs") {
  const std::vector<std::string> base = {"matnorm", "--check", "norm", "--p", "3", "--N", "300"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return fields(lines(run(a).out)[1]);
  };
  const auto s1 = with({"--seed", "7"});
  CHECK(s1[7] == "7");
  CHECK(with({"--seed", "7", "--jobs", "4"})[8] == s1[8]);

  const auto cfg = std::filesystem::temp_directory_path() / "steckin_test.ini";
  {
    std::ofstream f(cfg);
    f << "seed = 7\n";
  }
  CHECK(with({"--config", cfg.string()})[7] == "7");
  std::filesystem::remove(cfg);

  const auto oa = run({"oracle", "--family", "weighted-reverse", "--p", "0.3", "--r", "0.3",
                       "--N", "50", "--jobs", "1"});
  const auto ob = run({"oracle", "--family", "weighted-reverse", "--p", "0.3", "--r", "0.3",
                       "--N", "50", "--jobs", "3"});
  CHECK(fields(lines(oa.out)[1])[8] == fields(lines(ob.out)[1])[8]);

  const char* exe = std::getenv("STECKIN_CLI");
  if (exe != nullptr) {
    const std::string cmd = std::string("STECKIN_SEED=99 ") + exe +
                            " criteria --family crit14 --p 0.34";
    CHECK(fields(lines(shell(cmd))[1])[7] == "99");
  }
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "steckin_out.csv";
  const auto o = run({"criteria", "--family", "crit14", "--p", "0.34", "--out", path.string()});
  CHECK(o.code == 0);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == cli::kCsvHeader);
  std::filesystem::remove(path);
}
