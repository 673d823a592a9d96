#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "monodromic/filtration.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/subspace.hpp"

using namespace monodromic;

namespace {

// Single nilpotent Jordan block: e_i -> e_{i-1}, e_1 -> 0 (0-indexed shifts).
RationalMatrix jordan_nilpotent(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i + 1 < n; ++i) m.at(i, i + 1) = 1;
  return m;
}

Subspace coords(std::initializer_list<std::initializer_list<Rational>> cols, int ambient) {
  RationalMatrix m(ambient, static_cast<int>(cols.size()));
  int j = 0;
  for (const auto& col : cols) {
    int i = 0;
    for (const auto& v : col) m.at(i++, j) = v;
    ++j;
  }
  return Subspace::span(m);
}

RationalMatrix random_invertible(std::mt19937_64& rng, int n) {
  RationalMatrix t = RationalMatrix::identity(n);
  for (int step = 0; step < 3 * n + 2; ++step) {
    int kind = static_cast<int>(rng() % 3);
    int i = static_cast<int>(rng() % static_cast<unsigned long>(n));
    int j = static_cast<int>(rng() % static_cast<unsigned long>(n));
    RationalMatrix e = RationalMatrix::identity(n);
    if (kind == 0 && i != j) {
      for (int c = 0; c < n; ++c) std::swap(e.at(i, c), e.at(j, c));
    } else if (kind == 1) {
      e.at(i, i) = Rational(1 + static_cast<long>(rng() % 3), 1 + static_cast<long>(rng() % 2));
    } else if (i != j) {
      e.at(i, j) = Rational(static_cast<long>(rng() % 5) - 2);
    }
    t = t * e;
  }
  return t;
}

}  // namespace

TEST_CASE("filtration canonicalization and lookup") {
  std::map<long long, Subspace> levels;
  levels[0] = Subspace::span(RationalMatrix::column({1, 0}));
  levels[1] = Subspace::span(RationalMatrix::column({1, 0}));  // not a jump
  levels[3] = Subspace::full(2);
  Filtration f = Filtration::from_levels(2, levels);
  REQUIRE(f.jumps().size() == 2);
  CHECK(f.min_jump() == 0);
  CHECK(f.max_jump() == 3);
  CHECK(f.value(-1).is_zero());
  CHECK(f.value(0).dim() == 1);
  CHECK(f.value(2).dim() == 1);
  CHECK(f.value(3).dim() == 2);
  CHECK(f.value(99).dim() == 2);
  CHECK(f.complete());
  CHECK(f.graded_dim(0) == 1);
  CHECK(f.graded_dim(1) == 0);
  CHECK(f.graded_dim(3) == 1);
  CHECK(f.shifted(2).min_jump() == 2);
  CHECK(f.shifted(2).value(2).dim() == 1);

  std::map<long long, Subspace> bad;
  bad[0] = Subspace::full(2);
  bad[1] = Subspace::span(RationalMatrix::column({1, 0}));
  CHECK_THROWS_AS(Filtration::from_levels(2, bad), Error);
}

TEST_CASE("weight filtration of a 2x2 Jordan block centered at -1") {
  RationalMatrix n = jordan_nilpotent(2);
  Filtration w = monodromy_weight_filtration(n, -1);
  Subspace e1 = coords({{1, 0}}, 2);
  CHECK(w.value(-3).is_zero());
  CHECK(w.value(-2) == e1);
  CHECK(w.value(-1) == e1);
  CHECK(w.value(0) == Subspace::full(2));
}

TEST_CASE("weight filtration of a 3x3 Jordan block centered at 0") {
  RationalMatrix n = jordan_nilpotent(3);
  Filtration w = monodromy_weight_filtration(n, 0);
  Subspace e1 = coords({{1, 0, 0}}, 3);
  Subspace e12 = coords({{1, 0, 0}, {0, 1, 0}}, 3);
  CHECK(w.value(-3).is_zero());
  CHECK(w.value(-2) == e1);
  CHECK(w.value(-1) == e1);
  CHECK(w.value(0) == e12);
  CHECK(w.value(1) == e12);
  CHECK(w.value(2) == Subspace::full(3));
}

TEST_CASE("weight filtration axioms hold for conjugated block sums") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<RationalMatrix> blocks;
    int total = 0;
    while (total < 4) {
      int r = 1 + static_cast<int>(rng() % 3);
      blocks.push_back(jordan_nilpotent(r));
      total += r;
    }
    RationalMatrix n0 = block_diag(blocks);
    RationalMatrix s = random_invertible(rng, n0.rows());
    RationalMatrix n = s * n0 * inverse(s);
    long long center = static_cast<long long>(rng() % 5) - 2;
    Filtration w = monodromy_weight_filtration(n, center);
    CHECK(w.complete());
    // N lowers the filtration by two.
    for (long long k = w.min_jump() - 1; k <= w.max_jump() + 1; ++k)
      CHECK(lattice_contains(w.value(k - 2), apply_map(n, w.value(k))));
    // Graded dimensions are symmetric about the center.
    for (long long k = 0; k <= w.max_jump() - center + 1; ++k)
      CHECK(w.graded_dim(center + k) == w.graded_dim(center - k));
    // Conjugation-invariance: W(S N S^{-1}) = S W(N).
    Filtration w0 = monodromy_weight_filtration(n0, center);
    CHECK(w == w0.pushforward(s));
  }
}

TEST_CASE("filtered and strict map checks") {
  // Diagonal embedding of a line into the plane.
  RationalMatrix f{{1}, {1}};
  std::map<long long, Subspace> src_levels;
  src_levels[0] = Subspace::full(1);
  Filtration src = Filtration::from_levels(1, src_levels);
  std::map<long long, Subspace> tgt_levels;
  tgt_levels[0] = Subspace::span(RationalMatrix::column({1, 0}));
  tgt_levels[1] = Subspace::full(2);
  Filtration tgt = Filtration::from_levels(2, tgt_levels);

  CHECK_FALSE(is_filtered_map(f, src, tgt, 0));
  CHECK_FALSE(is_strict_map(f, src, tgt, 0));
  CHECK(is_filtered_map(f, src, tgt, 1));
  CHECK(is_strict_map(f, src, tgt, 1));

  // A non-strict but filtered map: collapse the plane onto the line e1 while
  // the source filtration jumps late.
  RationalMatrix g{{0, 1}, {0, 0}};
  std::map<long long, Subspace> late;
  late[1] = Subspace::full(2);
  Filtration src2 = Filtration::from_levels(2, late);
  CHECK(is_filtered_map(g, src2, tgt, 0));
  CHECK_FALSE(is_strict_map(g, src2, tgt, 0));
}

TEST_CASE("restriction and quotient of filtrations") {
  std::map<long long, Subspace> levels;
  levels[0] = Subspace::span(RationalMatrix::column({1, 0, 0}));
  levels[1] = coords({{1, 0, 0}, {0, 1, 0}}, 3);
  levels[2] = Subspace::full(3);
  Filtration f = Filtration::from_levels(3, levels);

  Subspace plane = coords({{1, 0, 0}, {0, 0, 1}}, 3);
  Filtration on_plane = f.restrict_to(plane);
  CHECK(on_plane.ambient() == 2);
  CHECK(on_plane.value(0).dim() == 1);
  CHECK(on_plane.value(1).dim() == 1);
  CHECK(on_plane.value(2).dim() == 2);

  Filtration on_quot = f.quotient_by(Subspace::span(RationalMatrix::column({1, 0, 0})));
  CHECK(on_quot.ambient() == 2);
  CHECK(on_quot.value(0).dim() == 0);
  CHECK(on_quot.value(1).dim() == 1);
  CHECK(on_quot.value(2).dim() == 2);
}

TEST_CASE("tensor filtration by convolution") {
  std::map<long long, Subspace> levels;
  levels[0] = Subspace::span(RationalMatrix::column({1, 0}));
  levels[1] = Subspace::full(2);
  Filtration f = Filtration::from_levels(2, levels);
  Filtration t = tensor_filtrations(f, f);
  CHECK(t.ambient() == 4);
  CHECK(t.value(-1).dim() == 0);
  CHECK(t.value(0).dim() == 1);
  CHECK(t.value(1).dim() == 3);
  CHECK(t.value(2).dim() == 4);
  // Level 0 is e1 (x) e1, the first Kronecker coordinate.
  CHECK(t.value(0) == Subspace::span(RationalMatrix::column({1, 0, 0, 0})));
}
