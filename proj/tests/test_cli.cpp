#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using alladi::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "alladi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("integer flags accept scientific notation") {
  using alladi::cli::parse_integer_flag;
  CHECK(parse_integer_flag("10000000") == 10000000);
  CHECK(parse_integer_flag("1e7") == 10000000);
  CHECK(parse_integer_flag("2.5e6") == 2500000);
  CHECK(parse_integer_flag("1E9") == 1000000000);
  CHECK_THROWS_AS(parse_integer_flag("12.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_integer_flag("-3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_integer_flag("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_integer_flag("10x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_integer_flag("1e40"), std::invalid_argument);
}

TEST_CASE("expsum text output") {
  CHECK(run({"expsum", "--x", "10", "--h", "1", "--q", "3"}).out == "1.00 + 0.00 i\n");
  CHECK(run({"expsum", "--x", "100", "--h", "0", "--q", "5"}).out == "100.00 + 0.00 i\n");
  const auto big = run({"expsum", "--x", "1e7", "--h", "1", "--q", "3"});
  CHECK(big.code == 0);
  CHECK(big.out == "-98423.00 + 55650.79 i\n");
  CHECK(run({"expsum", "--x", "10", "--h", "-1", "--q", "3"}).out == "1.00 + 0.00 i\n");
}

TEST_CASE("invalid flags exit with 2") {
  CHECK(run({"expsum", "--x", "10", "--q", "0"}).code == 2);
  CHECK(run({"expsum", "--x", "10.5", "--q", "3"}).code == 2);
  CHECK(run({"expsum", "--q", "3"}).code == 2);
  CHECK(run({"expsum", "--x", "10", "--q", "3", "--bogus"}).code == 2);
  CHECK(run({"expsum", "--x", "10", "--q", "3", "--format", "xml"}).code == 2);
  CHECK(run({"predict", "--x", "1e7", "--h", "3", "--q", "9"}).code == 2);
  CHECK(run({"predict", "--x", "10", "--h", "1", "--q", "3"}).code == 2);
  CHECK(run({"predict", "--x", "1e7", "--q", "3", "--method", "simpson"}).code == 2);
  CHECK(run({"verify", "everything"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("checkpoint mismatch exits with 3") {
  const auto path = (std::filesystem::temp_directory_path() / "alladi_cli.ckpt").string();
  std::filesystem::remove(path);
  CHECK(run({"expsum", "--x", "50000", "--q", "3", "--segment", "10000", "--checkpoint", path}).code == 0);
  const auto again = run({"expsum", "--x", "50000", "--q", "3", "--segment", "10000", "--checkpoint", path});
  CHECK(again.code == 0);
  CHECK(again.out == run({"expsum", "--x", "50000", "--q", "3"}).out);
  CHECK(run({"expsum", "--x", "60000", "--q", "3", "--segment", "10000", "--checkpoint", path}).code == 3);
  std::filesystem::remove(path);
}

TEST_CASE("JSON output carries the documented fields and round-trips") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"expsum", "--x", "1000", "--h", "1", "--q", "3", "--format", "json"},
           {"predict", "--x", "1e7", "--h", "1", "--q", "3", "--format", "json"},
           {"predict", "--x", "1e7", "--h", "1", "--q", "9", "--format", "json"},
           {"constants", "--h", "1", "--q", "3", "--P", "1e6", "--format", "json"},
           {"counts", "--x", "1000", "--q", "4", "--format", "json"},
           {"verify", "mod2", "--s", "3", "--N", "1e4", "--format", "json"},
           {"report", "--x", "1e5", "--h", "1", "--q", "3", "--P", "1e6", "--format", "json"}}) {
    const auto r = run(args);
    REQUIRE_MESSAGE(r.code == 0, args[0] << ": " << r.err);
    const auto j = nlohmann::ordered_json::parse(r.out);
    for (const char* key : {"command", "inputs", "value_re", "value_im", "tail_bound", "runtime_ms", "config"}) {
      CHECK_MESSAGE(j.contains(key), args[0] << " lacks " << key);
    }
    for (const char* key : {"prime_bound", "power_bound", "target_abs_error", "segment_size", "threads"}) {
      CHECK(j["config"].contains(key));
    }
    CHECK(j.dump(2) + "\n" == r.out);
  }
  const auto j = nlohmann::json::parse(run({"constants", "--h", "1", "--q", "3", "--format", "json"}).out);
  CHECK(j["tail_bound"].get<double>() <= 1e-6);
  CHECK(j["value_re"].get<double>() == doctest::Approx(-0.503073).epsilon(1e-4));
  CHECK(j["config"]["prime_bound"] == 10000000);
  CHECK(j["config"]["power_bound"] == 64);
  CHECK(j["config"]["segment_size"] == 4194304);
  CHECK(j["config"]["target_abs_error"] == 1e-6);
}

TEST_CASE("CSV output has a header row") {
  const auto r = run({"expsum", "--x", "1000", "--h", "1", "--q", "3", "--format", "csv"});
  CHECK(r.out.rfind("x,h,q,value_re,value_im\n1000,1,3,", 0) == 0);
  const auto c = run({"counts", "--x", "10", "--q", "3", "--format", "csv"});
  CHECK(c.out == "a,count\n0,4\n1,3\n2,3\n");
}

TEST_CASE("thread count honours the environment") {
  ::setenv("ALLADI_THREADS", "3", 1);
  const auto j = nlohmann::json::parse(run({"counts", "--x", "100", "--q", "3", "--format", "json"}).out);
  CHECK(j["config"]["threads"] == 3);
  ::unsetenv("ALLADI_THREADS");
  const auto k = nlohmann::json::parse(run({"counts", "--x", "100", "--q", "3", "--threads", "2", "--format", "json"}).out);
  CHECK(k["config"]["threads"] == 2);
}

TEST_CASE("verify commands") {
  const auto mod2 = run({"verify", "mod2", "--s", "2", "--N", "1000000"});
  CHECK(mod2.code == 0);
  CHECK(mod2.out.rfind("PASS", 0) == 0);
  const auto lemma = run({"verify", "lemma22", "--qmax", "60"});
  CHECK(lemma.code == 0);
  CHECK(run({"verify", "gauss", "--qmax", "30"}).code == 0);
  CHECK(run({"verify", "identity", "--s", "2", "--h", "1", "--q", "9"}).code == 0);
  CHECK(run({"verify", "mod2", "--s", "1.5", "--N", "1000"}).code == 0);
}

TEST_CASE("predict and constants text output") {
  const auto p = run({"predict", "--x", "1e7", "--h", "1", "--q", "9"});
  CHECK(p.code == 0);
  CHECK(p.out.find("O(x exp(-c0 sqrt(log x)))") != std::string::npos);
  const auto c = run({"constants", "--h", "1", "--q", "3"});
  CHECK(c.out.find("C = -0.50304") == 0);
  CHECK(c.out.find("tail_bound") != std::string::npos);
  const auto r = run({"report", "--x", "1e5", "--h", "1", "--q", "3", "--method", "zeta"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[zeta_integral]") != std::string::npos);
}
