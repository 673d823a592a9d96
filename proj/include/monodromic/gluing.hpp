#pragma once

#include <map>
#include <string>
#include <utility>

#include "monodromic/core.hpp"
#include "monodromic/errors.hpp"
#include "monodromic/mhm.hpp"

namespace monodromic {

// One cycle space: a mixed Hodge structure together with its nilpotent
// endomorphism.
struct CycleComponent {
  MHSModel mhs;
  RationalMatrix nilp{0, 0};

  bool operator==(const CycleComponent& o) const { return mhs == o.mhs && nilp == o.nilp; }
};

// The levels in (-1, 0] with their structures: the data of a module away
// from the origin.
using PsiSide = std::map<Rational, CycleComponent>;

// A gluing datum: the psi side, a vanishing part phi, and the two junction
// maps
//   c : psi_0 -> phi            of bidegree (0, 0),
//   v : phi -> psi_0 (twisted)  of bidegree (F+1, W-2),
// subject to v∘c = -N on psi_0 and c∘v = -N on phi.
struct GluingDatum {
  PsiSide psi;
  CycleComponent phi;
  RationalMatrix c{0, 0};
  RationalMatrix v{0, 0};
};

inline int psi_dim(const GluingDatum& g, const Rational& alpha) {
  auto it = g.psi.find(alpha);
  return it == g.psi.end() ? 0 : it->second.mhs.dim;
}

namespace detail {

inline void check_cycle_component(Diagnostics& diag, const std::string& label,
                                  const CycleComponent& comp) {
  Diagnostics local = validate_mhs(comp.mhs);
  if (comp.nilp.rows() != comp.mhs.dim || comp.nilp.cols() != comp.mhs.dim)
    local.fail("operator shape does not match the space");
  else if (!nilpotency_index(comp.nilp))
    local.fail("operator is not nilpotent");
  if (local.ok()) {
    if (!is_strict_map(comp.nilp, comp.mhs.filt.F, comp.mhs.filt.F, 1))
      local.fail("operator is not (F, +1)-strict");
    if (!is_strict_map(comp.nilp, comp.mhs.filt.W, comp.mhs.filt.W, -2))
      local.fail("operator is not (W, -2)-strict");
    local.merge(check_relative_monodromy(comp.nilp, comp.mhs.filt.W, comp.mhs.filt.W));
  }
  diag.merge(local, label);
}

}  // namespace detail

// The psi side alone (no vanishing data): levels confined to (-1, 0], valid
// structures, strict nilpotent operators.
inline Diagnostics validate_psi_side(const PsiSide& psi) {
  Diagnostics diag;
  for (const auto& [alpha, comp] : psi) {
    std::string label = "level " + rational_to_string(alpha);
    if (alpha <= Rational(-1) || alpha > Rational(0)) {
      diag.fail(label + ": outside (-1, 0]");
      continue;
    }
    if (comp.mhs.dim == 0) {
      diag.fail(label + ": zero-dimensional entry should be omitted");
      continue;
    }
    detail::check_cycle_component(diag, label, comp);
  }
  return diag;
}

inline Diagnostics validate_gluing(const GluingDatum& g) {
  Diagnostics diag = validate_psi_side(g.psi);
  detail::check_cycle_component(diag, "vanishing part", g.phi);
  if (!diag.ok()) return diag;

  int d0 = psi_dim(g, Rational(0));
  int dphi = g.phi.mhs.dim;
  if (g.c.rows() != dphi || g.c.cols() != d0)
    diag.fail("c has shape " + g.c.shape() + ", expected " + std::to_string(dphi) + "x" +
              std::to_string(d0));
  if (g.v.rows() != d0 || g.v.cols() != dphi)
    diag.fail("v has shape " + g.v.shape() + ", expected " + std::to_string(d0) + "x" +
              std::to_string(dphi));
  if (!diag.ok()) return diag;

  auto it0 = g.psi.find(Rational(0));
  FiltrationPair p0 = (it0 == g.psi.end()) ? FiltrationPair{} : it0->second.mhs.filt;
  RationalMatrix n0 = (it0 == g.psi.end()) ? RationalMatrix(0, 0) : it0->second.nilp;
  if (g.v * g.c != Rational(-1) * n0) diag.fail("v∘c is not -N on the boundary level");
  if (g.c * g.v != Rational(-1) * g.phi.nilp) diag.fail("c∘v is not -N on the vanishing part");
  if (!is_strict_map(g.c, p0.F, g.phi.mhs.filt.F, 0)) diag.fail("c is not (F, 0)-strict");
  if (!is_strict_map(g.c, p0.W, g.phi.mhs.filt.W, 0)) diag.fail("c is not (W, 0)-strict");
  if (!is_strict_map(g.v, g.phi.mhs.filt.F, p0.F, 1)) diag.fail("v is not (F, +1)-strict");
  if (!is_strict_map(g.v, g.phi.mhs.filt.W, p0.W, -2)) diag.fail("v is not (W, -2)-strict");
  return diag;
}

inline void require_valid_gluing(const GluingDatum& g) {
  Diagnostics diag = validate_gluing(g);
  if (!diag.ok()) throw InvalidGluing(diag.joined());
}

// Gluing datum -> module: the psi spaces become the levels in (-1, 0] with
// their Hodge filtrations kept and weights shifted up by one, the vanishing
// part becomes level -1 with its Hodge filtration shifted and weights kept,
// and the connectors are u = -c, w = v.
inline MonodromicMHM functor_g(const GluingDatum& g) {
  MonodromicMHM m;
  for (const auto& [alpha, comp] : g.psi) {
    m.core.set_component(alpha, comp.nilp);
    if (comp.mhs.dim > 0)
      m.filt[alpha] = FiltrationPair{comp.mhs.filt.F, comp.mhs.filt.W.shifted(1)};
  }
  m.core.set_component(Rational(-1), g.phi.nilp);
  if (g.phi.mhs.dim > 0)
    m.filt[Rational(-1)] = FiltrationPair{g.phi.mhs.filt.F.shifted(1), g.phi.mhs.filt.W};
  m.core.set_connectors(Rational(-1) * g.c, g.v);
  return m;
}

// Module -> gluing datum: read the nearby and vanishing normalizations off
// the module; c = -u and v = w.
inline GluingDatum functor_f(const MonodromicMHM& m) {
  GluingDatum g;
  for (const auto& [alpha, comp] : m.core.components()) {
    if (alpha == Rational(-1)) continue;
    g.psi[alpha] = CycleComponent{MHSModel{comp.dim, nearby_pair(m, alpha), 0}, comp.nilp};
  }
  g.phi = CycleComponent{MHSModel{m.core.dim(Rational(-1)), vanishing_pair(m), 0},
                         m.core.nilp(Rational(-1))};
  g.c = Rational(-1) * m.core.u();
  g.v = m.core.w();
  return g;
}

// Tate twist of one cycle space and of levels-only data.
inline CycleComponent tate_twist(const CycleComponent& c, long long l) {
  return CycleComponent{tate_twist(c.mhs, l), c.nilp};
}

inline PsiSide tate_twist_psi(const PsiSide& g, long long l) {
  PsiSide out;
  for (const auto& [alpha, comp] : g) out[alpha] = tate_twist(comp, l);
  return out;
}

// Equality of gluing data up to the bookkeeping twist labels.
inline bool gluing_equal(const GluingDatum& a, const GluingDatum& b) {
  auto comp_equal = [](const CycleComponent& x, const CycleComponent& y) {
    return x.mhs.dim == y.mhs.dim && x.mhs.filt == y.mhs.filt && x.nilp == y.nilp;
  };
  if (a.psi.size() != b.psi.size()) return false;
  for (auto ia = a.psi.begin(), ib = b.psi.begin(); ia != a.psi.end(); ++ia, ++ib)
    if (ia->first != ib->first || !comp_equal(ia->second, ib->second)) return false;
  return comp_equal(a.phi, b.phi) && a.c == b.c && a.v == b.v;
}

// Both composites of the two functors, checked to be the identity on the
// nose; diagnostics carry the first difference found.
struct RoundtripReport {
  bool gluing_restored = false;  // functor_f(functor_g(g)) equals g
  bool module_restored = false;  // functor_g(functor_f(m)) equals m
  Diagnostics issues;
};

inline RoundtripReport roundtrip_check(const GluingDatum& g) {
  RoundtripReport rep;
  MonodromicMHM m = functor_g(g);
  GluingDatum back = functor_f(m);
  rep.gluing_restored = gluing_equal(back, g);
  if (!rep.gluing_restored) rep.issues.fail("gluing datum changed across the roundtrip");
  MonodromicMHM m2 = functor_g(back);
  rep.module_restored = (m2 == m);
  if (!rep.module_restored) rep.issues.fail("module changed across the roundtrip");
  return rep;
}

inline RoundtripReport roundtrip_check(const MonodromicMHM& m) {
  RoundtripReport rep;
  GluingDatum g = functor_f(m);
  MonodromicMHM back = functor_g(g);
  rep.module_restored = (back == m);
  if (!rep.module_restored) rep.issues.fail("module changed across the roundtrip");
  GluingDatum g2 = functor_f(back);
  rep.gluing_restored = gluing_equal(g2, g);
  if (!rep.gluing_restored) rep.issues.fail("gluing datum changed across the roundtrip");
  return rep;
}

}  // namespace monodromic
