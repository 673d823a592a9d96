#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "monodromic/generate.hpp"
#include "monodromic/io.hpp"
#include "monodromic/mhm.hpp"

using namespace monodromic;

namespace {

bool gluing_identical(const GluingDatum& a, const GluingDatum& b) {
  return a.psi == b.psi && a.phi == b.phi && a.c == b.c && a.v == b.v;
}

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(MONODROMIC_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.case_count = 25;
  auto a = generate_gluings(cfg);
  auto b = generate_gluings(cfg);
  REQUIRE(a.size() == 25);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(gluing_identical(a[i], b[i]));

  cfg.seed = 8;
  auto c = generate_gluings(cfg);
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!gluing_identical(a[i], c[i])) ++differing;
  REQUIRE(differing > 0);
}

TEST_CASE("every generated datum passes the validator") {
  GeneratorConfig cfg;
  cfg.seed = 0;
  cfg.case_count = 60;
  for (const GluingDatum& g : generate_gluings(cfg)) {
    Diagnostics diag = validate_gluing(g);
    CAPTURE(diag.joined());
    REQUIRE(diag.ok());
  }
}

TEST_CASE("generated levels respect the configured bounds") {
  GeneratorConfig cfg;
  cfg.seed = 3;
  cfg.case_count = 40;
  for (const GluingDatum& g : generate_gluings(cfg)) {
    for (const auto& [alpha, comp] : g.psi) {
      REQUIRE(alpha > Rational(-1));
      REQUIRE(alpha <= Rational(0));
      REQUIRE(den(alpha) <= 6);
      REQUIRE(comp.mhs.dim >= 1);
      REQUIRE(comp.mhs.dim <= cfg.max_dim);
    }
  }
}

TEST_CASE("generated data roundtrip through the two functors") {
  GeneratorConfig cfg;
  cfg.seed = 11;
  cfg.case_count = 30;
  for (const GluingDatum& g : generate_gluings(cfg)) {
    Diagnostics module_diag = validate_mmhm(functor_g(g));
    CAPTURE(module_diag.joined());
    REQUIRE(module_diag.ok());
    RoundtripReport rep = roundtrip_check(g);
    CAPTURE(rep.issues.joined());
    REQUIRE(rep.gluing_restored);
    REQUIRE(rep.module_restored);
  }
}

TEST_CASE("zero dimension budget yields the zero datum") {
  GeneratorConfig cfg;
  cfg.max_dim = 0;
  cfg.case_count = 5;
  for (const GluingDatum& g : generate_gluings(cfg)) {
    REQUIRE(gluing_identical(g, GluingDatum{}));
    REQUIRE(validate_gluing(g).ok());
  }
}

TEST_CASE("generator configuration is validated") {
  GeneratorConfig cfg;
  cfg.eigen_denominators.clear();
  REQUIRE_THROWS_AS(generate_gluings(cfg), SchemaError);

  cfg = GeneratorConfig{};
  cfg.eigen_denominators = {0, 2};
  REQUIRE_THROWS_AS(generate_gluings(cfg), SchemaError);

  cfg = GeneratorConfig{};
  cfg.max_dim = -1;
  REQUIRE_THROWS_AS(generate_gluings(cfg), SchemaError);

  cfg = GeneratorConfig{};
  cfg.case_count = -1;
  REQUIRE_THROWS_AS(generate_gluings(cfg), SchemaError);

  cfg = GeneratorConfig{};
  cfg.max_weight_span = -1;
  REQUIRE_THROWS_AS(generate_gluings(cfg), SchemaError);
}

TEST_CASE("seed zero first case is frozen") {
  GeneratorConfig cfg;
  cfg.case_count = 1;
  REQUIRE(emit_document(generate_gluings(cfg)[0]) == read_file("seed0_case0.json"));
}
