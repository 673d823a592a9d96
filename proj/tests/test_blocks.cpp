#include <catch2/catch_amalgamated.hpp>

#include "monodromic/blocks.hpp"

using namespace monodromic;

namespace {

RationalMatrix jordan(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i + 1 < n; ++i) m.at(i, i + 1) = 1;
  return m;
}

CStarModule twist_cstar(const CStarModule& m, long long l) {
  CStarModule out;
  for (const auto& [alpha, comp] : m.comps) out.comps[alpha] = tate_twist(comp, l);
  return out;
}

}  // namespace

TEST_CASE("unipotent blocks carry the centered weight filtration") {
  for (int r = 1; r <= 8; ++r) {
    CycleComponent b = nilp_block(r);
    CHECK(b.nilp == jordan(r));
    CHECK(b.mhs.dim == r);
    CHECK(b.mhs.filt.W == monodromy_weight_filtration(b.nilp, -(r - 1)));
    auto fg = graded_dims(b.mhs.filt.F);
    REQUIRE(static_cast<int>(fg.size()) == r);
    for (int p = 0; p < r; ++p) CHECK(fg.at(p) == 1);
    auto wg = graded_dims(b.mhs.filt.W);
    REQUIRE(static_cast<int>(wg.size()) == r);
    for (int j = 0; j < r; ++j) CHECK(wg.at(-2LL * j) == 1);
    Diagnostics diag = validate_psi_side(l_block(r));
    INFO(diag.joined());
    CHECK(diag.ok());
  }
  // The rank-r block decomposes gradedwise as rank-one blocks twisted by
  // 0, ..., r-1.
  CycleComponent four = nilp_block(4);
  std::map<long long, int> f_sum, w_sum;
  for (long long i = 0; i < 4; ++i) {
    CycleComponent line = tate_twist(nilp_block(1), i);
    for (const auto& [p, d] : graded_dims(line.mhs.filt.F)) f_sum[p] += d;
    for (const auto& [k, d] : graded_dims(line.mhs.filt.W)) w_sum[k] += d;
  }
  CHECK(f_sum == graded_dims(four.mhs.filt.F));
  CHECK(w_sum == graded_dims(four.mhs.filt.W));
}

TEST_CASE("semisimple blocks are lines at the m-th-root levels") {
  PsiSide s2 = semi_block(2);
  REQUIRE(s2.size() == 2);
  REQUIRE(s2.count(Rational(0)) == 1);
  REQUIRE(s2.count(Rational(-1, 2)) == 1);
  for (const auto& [alpha, comp] : s2) {
    CHECK(comp.mhs.dim == 1);
    CHECK(comp.mhs.filt.F == Filtration::step(1, 0));
    CHECK(comp.mhs.filt.W == Filtration::step(1, 1));
    CHECK(comp.nilp.is_zero());
  }
  CHECK(validate_psi_side(s2).ok());
  CHECK(semi_block(1).size() == 1);

  BlockPair both = make_blocks(3, 2);
  CHECK(validate_psi_side(both.l_block).ok());
  CHECK(validate_psi_side(both.s_block).ok());
  CHECK(both.l_block.at(Rational(0)).mhs.dim == 3);
}

TEST_CASE("block morphisms commute with the operators and are strict") {
  BlockMap p = l_proj(1, 1);
  RationalMatrix expected_p(1, 2);
  expected_p.at(0, 1) = 1;
  CHECK(p.matrix == expected_p);
  CHECK(validate_block_map(p).ok());

  BlockMap j = l_twist_incl(1, 1);
  RationalMatrix expected_j(2, 1);
  expected_j.at(0, 0) = 1;
  CHECK(j.matrix == expected_j);
  CHECK(j.tgt.mhs.twist_label == -1);
  CHECK(validate_block_map(j).ok());

  CHECK(validate_block_map(l_proj(2, 3)).ok());
  CHECK(validate_block_map(l_twist_incl(2, 3)).ok());

  auto incl = s_incl(2, 3);
  REQUIRE(incl.size() == 2);
  for (const auto& [alpha, f] : incl) {
    INFO(rational_to_string(alpha));
    CHECK(validate_block_map(f).ok());
  }
  auto tiny = s_incl(1, 2);
  REQUIRE(tiny.size() == 1);
  CHECK(tiny.count(Rational(0)) == 1);

  SECTION("tampering breaks commutation or strictness") {
    BlockMap bad = l_proj(2, 1);
    bad.matrix.at(0, 0) = 1;
    Diagnostics d = validate_block_map(bad);
    CHECK(d.joined().find("commute") != std::string::npos);

    BlockMap wrong = l_proj(2, 1);
    wrong.matrix = RationalMatrix::zero(3, 3);
    CHECK(validate_block_map(wrong).joined().find("expected 2x3") != std::string::npos);
  }
}

TEST_CASE("the constant object is fixed by all four constructions") {
  PsiSide g = l_block(1);
  CStarModule direct = direct_module(g);
  for (ChakoVariant v :
       {ChakoVariant::kk, ChakoVariant::kc, ChakoVariant::ck, ChakoVariant::cc}) {
    CStarModule built = chako_construct(g, 1, 1, v);
    CHECK(built == direct);
  }
  CHECK(psi_of(direct) == g);
}

TEST_CASE("below the nilpotency bound the two variants differ in graded data") {
  PsiSide g = l_block(2);
  CStarModule ker = chako_construct(g, 1, 1, ChakoVariant::kk);
  CStarModule cok = chako_construct(g, 1, 1, ChakoVariant::cc);
  const CycleComponent& k = ker.comps.at(Rational(0));
  const CycleComponent& c = cok.comps.at(Rational(0));
  CHECK(k.mhs.dim == 1);
  CHECK(c.mhs.dim == 1);
  CHECK(k.mhs.filt.F == Filtration::step(1, 1));
  CHECK(k.mhs.filt.W == Filtration::step(1, -1));
  CHECK(c.mhs.filt.F == Filtration::step(1, 0));
  CHECK(c.mhs.filt.W == Filtration::step(1, 1));
  CHECK(k.mhs.twist_label == 0);

  // At the bound the kernel picks up the recorded twist.
  CStarModule deep = chako_construct(g, 3, 1, ChakoVariant::kk);
  CHECK(deep.comps.at(Rational(0)).mhs.twist_label == -2);
  // The second letter never changes the answer.
  CHECK(chako_construct(g, 3, 1, ChakoVariant::kk) ==
        chako_construct(g, 3, 1, ChakoVariant::kc));
  CHECK(chako_construct(g, 3, 1, ChakoVariant::ck) ==
        chako_construct(g, 3, 1, ChakoVariant::cc));
}

TEST_CASE("stabilization of the rank-two block") {
  StabilizationReport rep = stabilization_check(l_block(2), 2);
  INFO(rep.issues.joined());
  CHECK(rep.l0 == 2);
  CHECK(rep.connecting_zero.at(1) == false);
  CHECK(rep.connecting_zero.at(2) == true);
  CHECK(rep.connecting_zero.at(3) == true);
  CHECK(rep.kernel_step.at(1) == false);
  CHECK(rep.kernel_step.at(2) == true);
  CHECK(rep.cokernel_step.at(1) == false);
  CHECK(rep.cokernel_step.at(2) == true);
  CHECK(rep.stable_from == 2);
  CHECK(rep.variants_agree);
  CHECK(rep.ok());
}

TEST_CASE("stabilization of a rank-three block at a half-integer level") {
  PsiSide g{{Rational(-1, 2), nilp_block(3)}};
  StabilizationReport rep = stabilization_check(g, 3);
  INFO(rep.issues.joined());
  CHECK(rep.l0 == 3);
  CHECK(rep.stable_from == 3);
  CHECK(rep.connecting_zero.at(1) == false);
  CHECK(rep.connecting_zero.at(2) == false);
  CHECK(rep.connecting_zero.at(3) == true);
  CHECK(rep.connecting_zero.at(4) == true);
  CHECK(rep.variants_agree);
  CHECK(rep.ok());

  SECTION("the root order must cover the level denominators") {
    CHECK_THROWS_AS(chako_construct(g, 3, 1, ChakoVariant::cc),
                    EigenvalueDenominatorMismatch);
    try {
      chako_construct(g, 3, 3, ChakoVariant::cc);
      FAIL("expected a denominator mismatch");
    } catch (const EigenvalueDenominatorMismatch& e) {
      CHECK(std::string(e.what()).find("-1/2") != std::string::npos);
    }
    CHECK_NOTHROW(chako_construct(g, 3, 2, ChakoVariant::cc));
  }
  SECTION("the construction does not depend on the root order") {
    CHECK(chako_construct(g, 3, 2, ChakoVariant::cc) ==
          chako_construct(g, 3, 4, ChakoVariant::cc));
    CHECK(chako_construct(g, 3, 2, ChakoVariant::kk) ==
          chako_construct(g, 3, 6, ChakoVariant::kk));
  }
}

TEST_CASE("the construction commutes with Tate twists") {
  PsiSide g = l_block(2);
  PsiSide twisted = tate_twist_psi(g, 1);
  for (ChakoVariant v : {ChakoVariant::kk, ChakoVariant::cc}) {
    CHECK(chako_construct(twisted, 2, 1, v) ==
          twist_cstar(chako_construct(g, 2, 1, v), 1));
  }
}

TEST_CASE("the cokernel construction matches the direct module") {
  PsiSide g = l_block(2);
  DirectComparison rep = compare_with_direct(g, 2, 1);
  INFO(rep.issues.joined());
  CHECK(rep.isomorphic);
  REQUIRE(rep.witness.count(Rational(0)) == 1);
  CHECK(rep.witness.at(Rational(0)).rows() == 2);

  SECTION("below the bound the comparison reports the dimension gap") {
    DirectComparison bad = compare_with_direct(g, 1, 1);
    CHECK_FALSE(bad.isomorphic);
    CHECK(bad.issues.joined().find("dimension") != std::string::npos);
  }
  SECTION("a mixed object with two levels") {
    PsiSide mixed = g;
    mixed[Rational(-1, 2)] = nilp_block(1);
    DirectComparison rep2 = compare_with_direct(mixed, 2, 2);
    INFO(rep2.issues.joined());
    CHECK(rep2.isomorphic);
    CHECK(psi_of(direct_module(mixed)) == mixed);
    StabilizationReport srep = stabilization_check(mixed, 2);
    INFO(srep.issues.joined());
    CHECK(srep.ok());
    CHECK(srep.l0 == 2);
  }
}
