#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "monodromic/blocks.hpp"
#include "monodromic/errors.hpp"
#include "monodromic/filtration.hpp"
#include "monodromic/gluing.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/rational.hpp"

// Seeded random gluing data.  Every datum this header produces passes
// validate_gluing: components are direct sums of Tate-twisted elementary
// blocks conjugated by a random automorphism that preserves both filtrations,
// and the vanishing part is wired as the middle extension of the boundary
// level (image of its operator), optionally padded with zero-wired lines.

namespace monodromic {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int case_count = 1;
  int max_dim = 5;
  std::set<int> eigen_denominators = {1, 2, 3, 4, 5, 6};
  long long max_weight_span = 3;
};

inline void require_valid_generator_config(const GeneratorConfig& cfg) {
  if (cfg.case_count < 0) throw SchemaError("case_count: negative");
  if (cfg.max_dim < 0) throw SchemaError("max_dim: negative");
  if (cfg.max_weight_span < 0) throw SchemaError("max_weight_span: negative");
  if (cfg.eigen_denominators.empty()) throw SchemaError("eigen_denominators: empty");
  for (int q : cfg.eigen_denominators)
    if (q < 1) throw SchemaError("eigen_denominators: entries must be positive");
}

namespace detail {

// Modulo draw on the raw engine output: identical on every platform, unlike
// std::uniform_int_distribution.  Bias is irrelevant for test data.
inline long long draw_range(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Filtration filtration_direct_sum(const Filtration& a, const Filtration& b) {
  int n = a.ambient() + b.ambient();
  std::set<long long> indices;
  for (const auto& [k, s] : a.jumps()) indices.insert(k);
  for (const auto& [k, s] : b.jumps()) indices.insert(k);
  std::map<long long, Subspace> levels;
  for (long long k : indices) {
    RationalMatrix ga = a.value(k).basis();
    RationalMatrix gb = b.value(k).basis();
    RationalMatrix g(n, ga.cols() + gb.cols());
    for (int i = 0; i < ga.rows(); ++i)
      for (int j = 0; j < ga.cols(); ++j) g.at(i, j) = ga.at(i, j);
    for (int i = 0; i < gb.rows(); ++i)
      for (int j = 0; j < gb.cols(); ++j) g.at(a.ambient() + i, ga.cols() + j) = gb.at(i, j);
    levels[k] = Subspace::span(g);
  }
  return Filtration::from_levels(n, levels);
}

inline CycleComponent component_direct_sum(const CycleComponent& a, const CycleComponent& b) {
  FiltrationPair pair{filtration_direct_sum(a.mhs.filt.F, b.mhs.filt.F),
                      filtration_direct_sum(a.mhs.filt.W, b.mhs.filt.W)};
  return CycleComponent{MHSModel{a.mhs.dim + b.mhs.dim, pair, 0},
                        block_diag({a.nilp, b.nilp})};
}

// A component together with the Hodge/weight degrees of its adapted basis.
struct GradedComponent {
  CycleComponent comp;
  std::vector<long long> fdeg;
  std::vector<long long> wdeg;
};

inline GradedComponent random_block_sum(std::mt19937_64& rng, const GeneratorConfig& cfg) {
  GradedComponent out;
  out.comp = CycleComponent{MHSModel{0, FiltrationPair{}, 0}, RationalMatrix(0, 0)};
  int budget = static_cast<int>(draw_range(rng, 1, cfg.max_dim));
  while (budget > 0) {
    int r = static_cast<int>(draw_range(rng, 1, budget));
    long long l = draw_range(rng, -cfg.max_weight_span, cfg.max_weight_span);
    out.comp = component_direct_sum(out.comp, tate_twist(nilp_block(r), l));
    for (int j = 0; j < r; ++j) {
      out.fdeg.push_back((r - 1 - j) + l);
      out.wdeg.push_back(-2 * (r - 1 - j) - 2 * l);
    }
    budget -= r;
    if (draw_range(rng, 0, 1) == 0) break;  // usually one or two blocks
  }
  return out;
}

// Random automorphism preserving both filtrations setwise: entries only where
// both degrees are <= those of the column vector, full ties kept upper
// triangular, so a lexicographic reordering makes the matrix triangular with
// unit diagonal.
inline RationalMatrix random_bifiltered_automorphism(std::mt19937_64& rng,
                                                     const GradedComponent& s) {
  int n = s.comp.mhs.dim;
  RationalMatrix g = RationalMatrix::identity(n);
  const Rational values[] = {Rational(1),      Rational(-1), Rational(2),
                             Rational(1, 2),   Rational(-1, 2)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bool allowed = s.fdeg[i] <= s.fdeg[j] && s.wdeg[i] <= s.wdeg[j] &&
                     !(s.fdeg[i] == s.fdeg[j] && s.wdeg[i] == s.wdeg[j] && i > j);
      if (!allowed) continue;
      if (draw_range(rng, 0, 2) == 0)
        g.at(i, j) = values[draw_range(rng, 0, 4)];
    }
  }
  return g;
}

inline CycleComponent conjugated_component(std::mt19937_64& rng, const GeneratorConfig& cfg) {
  GradedComponent s = random_block_sum(rng, cfg);
  RationalMatrix g = random_bifiltered_automorphism(rng, s);
  CycleComponent out = s.comp;
  out.nilp = g * out.nilp * inverse(g);
  return out;
}

}  // namespace detail

inline GluingDatum random_gluing(std::mt19937_64& rng, const GeneratorConfig& cfg) {
  GluingDatum g;
  if (cfg.max_dim >= 1) {
    // Eigenvalue levels: up to two open ones plus, usually, the boundary 0.
    std::set<Rational> levels;
    std::vector<int> open_dens;
    for (int q : cfg.eigen_denominators)
      if (q >= 2) open_dens.push_back(q);
    long long n_open = detail::draw_range(rng, 0, 2);
    for (long long i = 0; i < n_open && !open_dens.empty(); ++i) {
      int q = open_dens[static_cast<std::size_t>(
          detail::draw_range(rng, 0, static_cast<long long>(open_dens.size()) - 1))];
      long long p = detail::draw_range(rng, 1, q - 1);
      levels.insert(Rational(-p, q));
    }
    if (detail::draw_range(rng, 0, 3) > 0) levels.insert(Rational(0));
    for (const Rational& alpha : levels) g.psi[alpha] = detail::conjugated_component(rng, cfg);
  }

  // Vanishing part: middle extension of the boundary level, when present.
  int d0 = psi_dim(g, Rational(0));
  CycleComponent phi{MHSModel{0, FiltrationPair{}, 0}, RationalMatrix(0, 0)};
  RationalMatrix c(0, d0), v(d0, 0);
  auto it0 = g.psi.find(Rational(0));
  if (it0 != g.psi.end()) {
    const RationalMatrix& n0 = it0->second.nilp;
    RationalMatrix b = kernel_image(n0).image.basis();
    if (b.cols() > 0) {
      v = b;
      auto solved = solve_matrix(b, Rational(-1) * n0);
      c = *solved;  // unique: b has full column rank
      FiltrationPair pair{it0->second.mhs.filt.F.pushforward(c),
                          it0->second.mhs.filt.W.pushforward(c)};
      phi = CycleComponent{MHSModel{b.cols(), pair, 0}, Rational(-1) * (c * v)};
    }
  }

  // Occasionally pad the vanishing part with zero-wired lines.
  if (cfg.max_dim >= 1 && detail::draw_range(rng, 0, 3) == 0) {
    long long extra = detail::draw_range(rng, 1, 2);
    for (long long i = 0; i < extra; ++i) {
      long long fj = detail::draw_range(rng, -2, 2);
      long long wj = detail::draw_range(rng, -cfg.max_weight_span, cfg.max_weight_span);
      CycleComponent line{
          MHSModel{1, FiltrationPair{Filtration::step(1, fj), Filtration::step(1, wj)}, 0},
          RationalMatrix::zero(1, 1)};
      phi = detail::component_direct_sum(phi, line);
    }
    RationalMatrix c_ext(phi.mhs.dim, d0), v_ext(d0, phi.mhs.dim);
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) c_ext.at(i, j) = c.at(i, j);
    for (int i = 0; i < v.rows(); ++i)
      for (int j = 0; j < v.cols(); ++j) v_ext.at(i, j) = v.at(i, j);
    c = c_ext;
    v = v_ext;
  }

  g.phi = phi;
  g.c = c;
  g.v = v;
  return g;
}

inline std::vector<GluingDatum> generate_gluings(const GeneratorConfig& cfg) {
  require_valid_generator_config(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<GluingDatum> out;
  out.reserve(static_cast<std::size_t>(cfg.case_count));
  for (int i = 0; i < cfg.case_count; ++i) out.push_back(random_gluing(rng, cfg));
  return out;
}

}  // namespace monodromic
