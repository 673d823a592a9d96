#include <catch2/catch_amalgamated.hpp>

#include "monodromic/suites.hpp"

using namespace monodromic;

TEST_CASE("every suite passes on seeded random data") {
  GeneratorConfig cfg;
  cfg.seed = 0;
  cfg.case_count = 30;
  for (const std::string& name : suite_names()) {
    SuiteResult res = run_suite(name, cfg);
    INFO(name);
    CAPTURE(res.report["failures"].dump(2));
    REQUIRE(res.cases == 30);
    REQUIRE(res.failures == 0);
    REQUIRE(res.passed);
    REQUIRE(res.report["results"].size() == 30);
    REQUIRE(res.report["pass"].get<bool>());
  }
}

TEST_CASE("the aggregate suite merges all six") {
  GeneratorConfig cfg;
  cfg.seed = 1;
  cfg.case_count = 8;
  SuiteResult res = run_suite("all", cfg);
  CAPTURE(res.report.dump(2));
  REQUIRE(res.passed);
  REQUIRE(res.cases == 8 * 6);
  REQUIRE(res.report["suites"].size() == 6);
  for (const Json& sub : res.report["suites"]) REQUIRE(sub["pass"].get<bool>());
}

TEST_CASE("unknown suite names and bad configs are rejected") {
  GeneratorConfig cfg;
  REQUIRE_THROWS_AS(run_suite("everything", cfg), SchemaError);
  cfg.eigen_denominators.clear();
  REQUIRE_THROWS_AS(run_suite("roundtrip", cfg), SchemaError);
}

TEST_CASE("an empty case set passes vacuously") {
  GeneratorConfig cfg;
  cfg.case_count = 0;
  SuiteResult res = run_suite("roundtrip", cfg);
  REQUIRE(res.passed);
  REQUIRE(res.cases == 0);
  REQUIRE(res.report["results"].empty());
}

TEST_CASE("suite reports are reproducible apart from timing") {
  GeneratorConfig cfg;
  cfg.seed = 5;
  cfg.case_count = 12;
  Json a = run_suite("dual", cfg).report;
  Json b = run_suite("dual", cfg).report;
  a.erase("wall_ms");
  b.erase("wall_ms");
  REQUIRE(a == b);
}
