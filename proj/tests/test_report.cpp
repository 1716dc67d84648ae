#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bianchi/report.hpp"

using namespace bianchi;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.D = 3;
  c.ideal = "3";
  c.m_min = 0;
  c.m_max = 2;
  c.variants = {LatticeKind::Barred, LatticeKind::Standard, LatticeKind::Dual};
  return c;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("bianchi_test_report_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out(1);
  for (char ch : s) {
    if (ch == ',')
      out.emplace_back();
    else
      out.back() += ch;
  }
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  RunConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.m_min = 3;
  c.m_max = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.ideal = "1";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.D = 5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.variants.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.jobs = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.ideal = "3+";
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config JSON round trip") {
  RunConfig c = small_config();
  c.jobs = 3;
  c.band.c1 = 4;
  c.snf_method = SnfMethod::Euclidean;
  RunConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(config_from_json(nlohmann::json::object()).D == RunConfig{}.D);
  nlohmann::json bad = to_json(c);
  bad["unknown_key"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = to_json(c);
  bad["m_max"] = "two";
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  CHECK(lattice_kind_from_string("dual") == LatticeKind::Dual);
  CHECK_THROWS(lattice_kind_from_string("other"));
}

TEST_CASE("run report for D=3 level 3") {
  RunConfig c = small_config();
  RunReport r = run(c);
  CHECK(r.ok());
  REQUIRE(r.runs.size() == 3);
  CHECK(r.subgroup.index == 648);
  CHECK(r.subgroup.cusps_formula == 12);
  CHECK(r.subgroup.cusp_volume_identity);
  CHECK(r.subgroup.volume == doctest::Approx(54.8068).epsilon(1e-5));
  for (const auto& run : r.runs) {
    CAPTURE(run.m);
    CHECK_FALSE(run.error.has_value());
    REQUIRE(run.barred.has_value());
    REQUIRE(run.standard.has_value());
    REQUIRE(run.dual.has_value());
    CHECK(run.barred->h1_torsion_log ==
          doctest::Approx(run.standard->h1_torsion_log + run.dual->h1_torsion_log));
    if (run.m >= 1) {
      CHECK(run.barred->h1.betti == 4 * 12);
      REQUIRE(run.split_prime.has_value());
      CHECK(run.split_prime->betti1 == 12);
      REQUIRE(run.gabber_soule.has_value());
      CHECK(run.gabber_soule->formula_holds);
      REQUIRE(run.h0_bound.has_value());
      CHECK(run.h0_bound->squared_holds);
    } else {
      CHECK(run.barred->h1.betti == 4 * r.subgroup.abelianization.betti);
    }
  }
  // three points are too few for a growth fit
  CHECK_FALSE(r.growth.has_value());

  SUBCASE("deterministic apart from run_info") {
    RunReport again = run(c);
    CHECK(to_json(r, false) == to_json(again, false));
    nlohmann::json j = to_json(r);
    CHECK(j.at("schema") == kReportSchema);
    CHECK(j.at("schema_version") == kReportSchemaVersion);
    CHECK(j.contains("run_info"));
    CHECK_FALSE(to_json(r, false).contains("run_info"));
    CHECK(j.at("verdicts").at("ok") == true);
  }

  SUBCASE("CSV table") {
    auto rows = lines(report_csv({r}));
    REQUIRE(rows.size() == 4);
    auto header = split(rows[0]);
    CHECK(header.front() == "D");
    CHECK(header.back() == "error");
    int m_col = -1, m2_col = -1;
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "m") m_col = static_cast<int>(i);
      if (header[i] == "m2") m2_col = static_cast<int>(i);
    }
    REQUIRE(m_col >= 0);
    REQUIRE(m2_col >= 0);
    for (size_t k = 1; k < rows.size(); ++k) {
      auto f = split(rows[k]);
      CHECK(f.size() == header.size());
      int m = std::stoi(f[m_col]);
      CHECK(m == static_cast<int>(k) - 1);
      CHECK(std::stoi(f[m2_col]) == m * m);
    }
  }
}

TEST_CASE("growth fields appear with four points") {
  RunConfig c = small_config();
  c.variants = {LatticeKind::Barred};
  c.m_min = 1;
  c.m_max = 4;
  c.jobs = 2;
  RunReport r = run(c);
  CHECK(r.ok());
  REQUIRE(r.growth.has_value());
  CHECK(r.growth->slope > 0);
  CHECK(r.growth->predicted_slope == doctest::Approx(r.subgroup.volume / 3.141592653589793));
  auto rows = lines(report_csv({r}));
  auto header = split(rows[0]);
  size_t slope_col = std::find(header.begin(), header.end(), "growth_slope") - header.begin();
  REQUIRE(slope_col < header.size());
  CHECK(std::stod(split(rows[1])[slope_col]) == doctest::Approx(r.growth->slope).epsilon(1e-8));
}

TEST_CASE("checkpoints are reused") {
  RunConfig c = small_config();
  c.m_min = 1;
  c.m_max = 2;
  c.output_dir = fresh_dir("ckpt").string();
  RunReport first = run(c);
  write_outputs(first);
  CHECK(fs::exists(fs::path(c.output_dir) / "report.json"));
  CHECK(fs::exists(fs::path(c.output_dir) / "table.csv"));
  for (const auto& r : first.runs) CHECK_FALSE(r.from_checkpoint);
  RunReport second = run(c);
  for (const auto& r : second.runs) CHECK(r.from_checkpoint);
  CHECK(to_json(first, false) == to_json(second, false));
  c.resume = false;
  RunReport third = run(c);
  for (const auto& r : third.runs) CHECK_FALSE(r.from_checkpoint);
  // a different configuration does not pick up the old files
  c.resume = true;
  c.variants = {LatticeKind::Barred};
  RunReport fourth = run(c);
  for (const auto& r : fourth.runs) CHECK_FALSE(r.from_checkpoint);
  fs::remove_all(c.output_dir);
}

TEST_CASE("D=11 level 3") {
  RunConfig c;
  c.D = 11;
  c.m_min = 0;
  c.m_max = 1;
  RunReport r = run(c);
  CHECK(r.ok());
  CHECK(r.subgroup.cusps_formula == 32);
  CHECK(r.subgroup.cusps_orbits == 32);
  REQUIRE(r.runs.size() == 2);
  CHECK(r.runs[1].barred->h1.betti == 128);
  CHECK(r.runs[1].split_prime->betti1 == 32);
  CHECK_FALSE(r.advisories.empty());
}
