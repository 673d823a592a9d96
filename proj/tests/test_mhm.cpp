#include <catch2/catch_amalgamated.hpp>

#include "monodromic/mhm.hpp"

using namespace monodromic;

namespace {

RationalMatrix jordan(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i + 1 < n; ++i) m.at(i, i + 1) = 1;
  return m;
}

Subspace coords(int ambient, std::initializer_list<int> idx) {
  RationalMatrix g(ambient, static_cast<int>(idx.size()));
  int j = 0;
  for (int i : idx) g.at(i, j++) = 1;
  return Subspace::span(g);
}

Filtration step_at(int ambient, long long k) { return Filtration::step(ambient, k); }

// Middle extension of the rank-two unipotent block: level 0 carries the
// Jordan block (F jumps {0: e2, 1: all}, module W jumps {-1: e1, 1: all});
// since N_0 = w∘u must factor through level -1, that level carries the image
// line of N (F jump at 1, weight 0), with u = (0 1) and w = (1 0)^T.
MonodromicMHM block2_mmhm() {
  MonodromicMHM m;
  m.core.set_component(Rational(0), jordan(2));
  m.core.set_component(Rational(-1), RationalMatrix::zero(1, 1));
  RationalMatrix u(1, 2), w(2, 1);
  u.at(0, 1) = 1;
  w.at(0, 0) = 1;
  m.core.set_connectors(u, w);
  std::map<long long, Subspace> f{{0, coords(2, {1})}, {1, Subspace::full(2)}};
  std::map<long long, Subspace> wt{{-1, coords(2, {0})}, {1, Subspace::full(2)}};
  m.filt[Rational(0)] =
      FiltrationPair{Filtration::from_levels(2, f), Filtration::from_levels(2, wt)};
  m.filt[Rational(-1)] = FiltrationPair{Filtration::step(1, 1), Filtration::step(1, 0)};
  return m;
}

// Rank-one module with both junction levels: u = 1, w = 0, Hodge jump at 0 on
// level 0 and at 1 on level -1, weights 1 and 0.
MonodromicMHM delta_mmhm() {
  MonodromicMHM m;
  m.core.set_component(Rational(0), RationalMatrix::zero(1, 1));
  m.core.set_component(Rational(-1), RationalMatrix::zero(1, 1));
  m.core.set_connectors(RationalMatrix::identity(1), RationalMatrix::zero(1, 1));
  m.filt[Rational(0)] = FiltrationPair{step_at(1, 0), step_at(1, 1)};
  m.filt[Rational(-1)] = FiltrationPair{step_at(1, 1), step_at(1, 0)};
  return m;
}

}  // namespace

TEST_CASE("shift_twist moves Hodge jumps up and weight jumps down twice") {
  std::map<long long, Subspace> f{{0, coords(2, {0})}, {1, Subspace::full(2)}};
  std::map<long long, Subspace> w{{-1, coords(2, {0})}, {1, Subspace::full(2)}};
  FiltrationPair p{Filtration::from_levels(2, f), Filtration::from_levels(2, w)};

  FiltrationPair t = shift_twist(p, 1);
  CHECK(t.F.min_jump() == 1);
  CHECK(t.F.max_jump() == 2);
  CHECK(t.W.min_jump() == -3);
  CHECK(t.W.max_jump() == -1);
  CHECK(t.F.value(1) == coords(2, {0}));
  CHECK(t.W.value(-3) == coords(2, {0}));

  CHECK(shift_twist(t, -1) == p);
  CHECK(shift_twist(shift_twist(p, 2), 3) == shift_twist(p, 5));
}

TEST_CASE("graded_dims reads jump sizes") {
  std::map<long long, Subspace> f{{0, coords(3, {0})}, {2, Subspace::full(3)}};
  auto g = graded_dims(Filtration::from_levels(3, f));
  REQUIRE(g.size() == 2);
  CHECK(g.at(0) == 1);
  CHECK(g.at(2) == 2);
}

TEST_CASE("relative monodromy: zero operator with matching filtrations") {
  Filtration l = step_at(2, 0);
  CHECK(check_relative_monodromy(RationalMatrix::zero(2, 2), l, l).ok());
}

TEST_CASE("relative monodromy: weight filtration of a Jordan block over a trivial base") {
  RationalMatrix n = jordan(3);
  Filtration l = step_at(3, 0);
  Filtration w = monodromy_weight_filtration(n, 0);
  CHECK(check_relative_monodromy(n, l, w).ok());

  // Off-center or collapsed weights break the axioms.
  CHECK_FALSE(check_relative_monodromy(n, l, monodromy_weight_filtration(n, 1)).ok());
  Diagnostics bad = check_relative_monodromy(jordan(2), step_at(2, 0), step_at(2, 0));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.front().find("axiom (i)") != std::string::npos);
  CHECK(bad.violations.front().find("W_0") != std::string::npos);
}

TEST_CASE("relative monodromy: taking W equal to L leaves only the lowering axiom") {
  // W = L with several jumps: condition (ii) is vacuous, so any operator
  // moving W_k into W_{k-2} passes.
  RationalMatrix n(3, 3);
  n.at(0, 2) = 1;  // e3 -> e1 drops two weight steps
  std::map<long long, Subspace> lv{
      {-1, coords(3, {0})}, {0, coords(3, {0, 1})}, {1, Subspace::full(3)}};
  Filtration l = Filtration::from_levels(3, lv);
  CHECK(check_relative_monodromy(n, l, l).ok());
  CHECK_FALSE(check_relative_monodromy(jordan(3), l, l).ok());
}

TEST_CASE("relative monodromy rejects bad input") {
  CHECK_THROWS_AS(check_relative_monodromy(RationalMatrix::identity(2), step_at(2, 0), step_at(2, 0)),
                  NotNilpotent);
  CHECK_THROWS_AS(check_relative_monodromy(RationalMatrix::zero(2, 2), step_at(3, 0), step_at(2, 0)),
                  AmbientMismatch);
}

TEST_CASE("MHS morphisms must be filtered and strict") {
  MHSModel src{1, FiltrationPair{step_at(1, 0), step_at(1, 0)}, 0};
  MHSModel tgt{1, FiltrationPair{step_at(1, 1), step_at(1, 0)}, 0};

  MHSMorphismModel id0{RationalMatrix::identity(1), 0, 0};
  CHECK(validate_mhs_morphism(id0, src, src).ok());

  // Into a target whose Hodge jump sits one higher: fails at shift 0, works
  // at shift 1.
  CHECK_FALSE(validate_mhs_morphism(id0, src, tgt).ok());
  MHSMorphismModel id1{RationalMatrix::identity(1), 1, 0};
  CHECK(validate_mhs_morphism(id1, src, tgt).ok());

  MHSMorphismModel wrong_shape{RationalMatrix::identity(2), 0, 0};
  CHECK_FALSE(validate_mhs_morphism(wrong_shape, src, tgt).ok());
}

TEST_CASE("tate twist of an MHS accumulates its label") {
  MHSModel m{1, FiltrationPair{step_at(1, 0), step_at(1, 0)}, 0};
  MHSModel t = tate_twist(m, 2);
  CHECK(t.twist_label == 2);
  CHECK(t.filt.F.min_jump() == 2);
  CHECK(t.filt.W.min_jump() == -4);
  CHECK(tate_twist(t, -2) == m);
  CHECK(validate_mhs(t).ok());
}

TEST_CASE("validate_mmhm accepts the centered Jordan block") {
  MonodromicMHM m = block2_mmhm();
  REQUIRE(validate_mmhm(m).joined() == "");

  SECTION("weight filtration too high for the monodromy") {
    m.filt[Rational(0)].W = step_at(2, 0);
    Diagnostics diag = validate_mmhm(m);
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.joined().find("(W, -2)-strict") != std::string::npos);
    CHECK(diag.joined().find("axiom (i)") != std::string::npos);
  }
  SECTION("Hodge filtration blind to the monodromy") {
    m.filt[Rational(0)].F = step_at(2, 0);
    Diagnostics diag = validate_mmhm(m);
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.joined().find("(F, +1)-strict") != std::string::npos);
  }
  SECTION("missing filtrations") {
    m.filt.erase(Rational(0));
    CHECK_FALSE(validate_mmhm(m).ok());
  }
  SECTION("filtrations at an absent level") {
    m.filt[Rational(-1, 2)] = FiltrationPair{};
    Diagnostics diag = validate_mmhm(m);
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.joined().find("absent level") != std::string::npos);
  }
}

TEST_CASE("validate_mmhm checks the junction maps") {
  MonodromicMHM m = delta_mmhm();
  REQUIRE(validate_mmhm(m).joined() == "");

  SECTION("can must be strict of bidegree (0, 0)") {
    m.filt[Rational(-1)].F = step_at(1, 0);
    Diagnostics diag = validate_mmhm(m);
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.joined().find("can is not (F, 0)-strict") != std::string::npos);
  }
  SECTION("weights off by one break can") {
    m.filt[Rational(-1)].W = step_at(1, 1);
    Diagnostics diag = validate_mmhm(m);
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.joined().find("can is not (W, 0)-strict") != std::string::npos);
  }
}

TEST_CASE("tate twist of a module moves every component pair together") {
  MonodromicMHM m = block2_mmhm();
  MonodromicMHM t = tate_twist_mmhm(m, 2);
  CHECK(t.core == m.core);
  CHECK(t.filt.at(Rational(0)).F.min_jump() == 2);
  CHECK(t.filt.at(Rational(0)).F.max_jump() == 3);
  CHECK(t.filt.at(Rational(0)).W.min_jump() == -5);
  CHECK(t.filt.at(Rational(0)).W.max_jump() == -3);
  CHECK(validate_mmhm(t).ok());
  CHECK(tate_twist_mmhm(t, -2) == m);
}

TEST_CASE("propagated Hodge filtration: single middle line") {
  MonodromicMHM m;
  m.core.set_component(Rational(-1, 2), RationalMatrix::zero(1, 1));
  m.core.set_connectors(RationalMatrix(0, 0), RationalMatrix(0, 0));
  m.filt[Rational(-1, 2)] = FiltrationPair{step_at(1, 0), step_at(1, 0)};
  REQUIRE(validate_mmhm(m).ok());

  PropagatedWindow pw = propagate_filtration(m, 1);
  REQUIRE(pw.win.levels.size() == 3);
  CHECK(pw.hodge.at(Rational(1, 2)).min_jump() == 0);   // multiplication keeps F
  CHECK(pw.hodge.at(Rational(-1, 2)).min_jump() == 0);
  CHECK(pw.hodge.at(Rational(-3, 2)).min_jump() == 1);  // one step below: F_{p-1}
  CHECK(check_specializability(pw).ok());
}

TEST_CASE("propagated Hodge filtration: junction chain") {
  MonodromicMHM m = delta_mmhm();
  PropagatedWindow pw = propagate_filtration(m, 2);
  CHECK(pw.hodge.at(Rational(2)).min_jump() == 0);
  CHECK(pw.hodge.at(Rational(0)).min_jump() == 0);
  CHECK(pw.hodge.at(Rational(-1)).min_jump() == 1);
  CHECK(pw.hodge.at(Rational(-2)).min_jump() == 2);  // F_p at -1-l jumps at 1+l
  CHECK(pw.hodge.at(Rational(-3)).min_jump() == 3);
  CHECK(check_specializability(pw).ok());

  SECTION("a tampered level is caught") {
    pw.hodge[Rational(-2)] = step_at(1, 0);
    Diagnostics diag = check_specializability(pw);
    REQUIRE_FALSE(diag.ok());
    CHECK(diag.joined().find("differentiation") != std::string::npos);
  }
  SECTION("missing filtrations are rejected") {
    MonodromicMHM bare = delta_mmhm();
    bare.filt.erase(Rational(-1));
    CHECK_THROWS_AS(propagate_filtration(bare, 2), InvalidMMHM);
  }
}

TEST_CASE("propagation and specializability hold on the block module") {
  PropagatedWindow pw = propagate_filtration(block2_mmhm(), 3);
  CHECK(check_specializability(pw).ok());
  // Multiplication carries the block's Hodge jumps up unchanged; each
  // differentiation step below level -1 shifts the image line's jump up.
  CHECK(pw.hodge.at(Rational(3)).min_jump() == 0);
  CHECK(pw.hodge.at(Rational(3)).max_jump() == 1);
  CHECK(pw.win.dim(Rational(-4)) == 1);
  CHECK(pw.hodge.at(Rational(-4)).min_jump() == 4);
}
