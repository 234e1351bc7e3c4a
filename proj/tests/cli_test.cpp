#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ulam/cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ulam");
  std::ostringstream out, err;
  Result r;
  r.code = ulam::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ulam_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("exact prints reduced fractions") {
  const auto r = run({"exact", "--N", "5", "--n", "3"});
  CHECK(r.code == ulam::cli::kSuccess);
  CHECK(r.out.find("# ulam exact schema_version=1") == 0);
  CHECK(r.out.find("3,103/120,") != std::string::npos);

  const auto j = run({"exact", "--N", "3", "--all-n", "--json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["rows"][0]["q"] == "1/6");
  CHECK(doc["rows"][1]["q"] == "5/6");
  CHECK(doc["rows"][2]["q"] == "1/1");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == ulam::cli::kUsage);
  CHECK(run({"nonsense"}).code == ulam::cli::kUsage);
  CHECK(run({"exact", "--n", "3"}).code == ulam::cli::kUsage);
  CHECK(run({"exact", "--N", "5", "--n", "3", "--all-n"}).code == ulam::cli::kUsage);
  CHECK(run({"exact", "--N", "61", "--n", "3"}).code == ulam::cli::kDomain);
  const auto zero = run({"poisson", "--n", "3", "--lambda", "0"});
  CHECK(zero.code == ulam::cli::kDomain);
  CHECK(zero.err.find("lambda") != std::string::npos);
  CHECK(run({"poisson", "--n", "3", "--lambda", "100", "--routes", "kappa", "--k-max", "10"}).code == ulam::cli::kNumerical);
  CHECK(run({"rates", "--x", "-1"}).code == ulam::cli::kDomain);
  CHECK(run({"equilibrium", "--gamma", "-1"}).code == ulam::cli::kDomain);
  CHECK(run({"tw", "--tmin", "-20", "--no-cache"}).code == ulam::cli::kDomain);
  CHECK(run({"--help"}).code == ulam::cli::kSuccess);
}

TEST_CASE("poisson routes agree and report deltas") {
  const auto r = run({"poisson", "--n", "6", "--lambda", "4", "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["deltas"]["det_kappa"].get<double>() <= 1e-9);
  CHECK(doc["deltas"]["det_series"].get<double>() <= 1e-9 + doc["routes"]["series"]["tail_bound"].get<double>());
  CHECK(doc["routes"]["det"]["condition_estimate"].get<double>() < 1e12);
}

TEST_CASE("rates leave undefined cells empty") {
  const auto r = run({"rates", "--x", "2", "--x", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\n2,0,0,0\n") != std::string::npos);
  CHECK(r.out.find("\n3,,1.30") != std::string::npos);
  const auto j = nlohmann::json::parse(run({"rates", "--x", "1", "--json"}).out);
  CHECK(j["rows"][0]["I"].is_null());
}

TEST_CASE("sampling output is deterministic and independent of shards") {
  const auto a = run({"sample", "--N", "300", "--samples", "200", "--seed", "5", "--json"});
  const auto b = run({"sample", "--N", "300", "--samples", "200", "--seed", "5", "--shards", "3", "--json"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  auto da = nlohmann::json::parse(a.out), db = nlohmann::json::parse(b.out);
  CHECK(da["stats"] == db["stats"]);
  CHECK(run({"sample", "--N", "300", "--samples", "200", "--seed", "5", "--json"}).out == a.out);

  const auto dir = scratch_dir("raw");
  const auto raw = (dir / "samples.txt").string();
  const auto out = (dir / "summary.json").string();
  REQUIRE(run({"hammersley", "--lambda", "30", "--samples", "50", "--shards", "2", "--raw", raw, "--json", "-o", out}).code == 0);
  std::ifstream header_file(raw);
  std::string header;
  std::getline(header_file, header);
  const auto h = nlohmann::json::parse(header);
  CHECK(h["kind"] == "hammersley");
  CHECK(h["shard_map"].size() == 2);
  int lines = 0;
  for (std::string line; std::getline(header_file, line);) ++lines;
  CHECK(lines == 50);
  std::ifstream summary(out);
  CHECK(nlohmann::json::parse(summary)["stats"]["count"] == 50);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tw and verify use the solution cache") {
  const auto dir = scratch_dir("cache");
  const auto first = run({"tw", "--step", "0.5", "--cache-dir", dir.string()});
  REQUIRE(first.code == 0);
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
  const auto second = run({"tw", "--step", "0.5", "--cache-dir", dir.string()});
  CHECK(second.out == first.out);
  CHECK(first.out.find("t,F,density") != std::string::npos);
  CHECK(first.out.find("\"mean\":-1.77") != std::string::npos);

  const auto v = run({"verify", "--quick", "--json", "--cache-dir", dir.string()});
  CHECK(v.code == ulam::cli::kSuccess);
  const auto doc = nlohmann::json::parse(v.out);
  CHECK(doc["passed"] == true);
  CHECK(doc["checks"].size() >= 12);
  std::filesystem::remove_all(dir);
}

TEST_CASE("equilibrium reports the support") {
  const auto r = run({"equilibrium", "--gamma", "2", "--points", "3", "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["measure"]["theta_c"].get<double>() == doctest::Approx(1.5707963267948966));
  CHECK(doc["density"].size() == 3);
}
