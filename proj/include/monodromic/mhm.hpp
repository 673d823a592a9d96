#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "monodromic/core.hpp"
#include "monodromic/errors.hpp"
#include "monodromic/filtration.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/rational.hpp"

namespace monodromic {

// ---------------------------------------------------------------------------
// Mixed Hodge structure models
// ---------------------------------------------------------------------------

// A finite-dimensional rational space with a Hodge filtration F and a weight
// filtration W (both increasing and exhaustive), plus a bookkeeping label for
// accumulated Tate twists.
struct MHSModel {
  int dim = 0;
  FiltrationPair filt;
  long long twist_label = 0;

  bool operator==(const MHSModel& o) const {
    return dim == o.dim && filt == o.filt && twist_label == o.twist_label;
  }
};

inline Diagnostics validate_mhs(const MHSModel& m) {
  Diagnostics diag;
  if (m.filt.F.ambient() != m.dim || m.filt.W.ambient() != m.dim)
    diag.fail("filtrations live on a space of the wrong dimension");
  else {
    if (!m.filt.F.complete()) diag.fail("Hodge filtration is not exhaustive");
    if (!m.filt.W.complete()) diag.fail("weight filtration is not exhaustive");
  }
  return diag;
}

// Tate twist by l: F'_p = F_{p-l}, W'_k = W_{k+2l}.
inline MHSModel tate_twist(const MHSModel& m, long long l) {
  return MHSModel{m.dim, shift_twist(m.filt, l), m.twist_label + l};
}

// A linear map between MHS models, carrying Hodge level p to p + f_shift and
// weight level k to k + w_shift. Valid when it is filtered and strict for
// both filtrations.
struct MHSMorphismModel {
  RationalMatrix matrix{0, 0};
  long long f_shift = 0;
  long long w_shift = 0;
};

inline Diagnostics validate_mhs_morphism(const MHSMorphismModel& f, const MHSModel& src,
                                         const MHSModel& tgt) {
  Diagnostics diag;
  if (f.matrix.cols() != src.dim || f.matrix.rows() != tgt.dim) {
    diag.fail("morphism shape " + f.matrix.shape() + " does not match " +
              std::to_string(tgt.dim) + "x" + std::to_string(src.dim));
    return diag;
  }
  if (!is_filtered_map(f.matrix, src.filt.F, tgt.filt.F, f.f_shift))
    diag.fail("not Hodge-filtered at shift " + std::to_string(f.f_shift));
  else if (!is_strict_map(f.matrix, src.filt.F, tgt.filt.F, f.f_shift))
    diag.fail("not Hodge-strict at shift " + std::to_string(f.f_shift));
  if (!is_filtered_map(f.matrix, src.filt.W, tgt.filt.W, f.w_shift))
    diag.fail("not weight-filtered at shift " + std::to_string(f.w_shift));
  else if (!is_strict_map(f.matrix, src.filt.W, tgt.filt.W, f.w_shift))
    diag.fail("not weight-strict at shift " + std::to_string(f.w_shift));
  return diag;
}

// ---------------------------------------------------------------------------
// Monodromic mixed Hodge modules over the point
// ---------------------------------------------------------------------------

// A core module together with, for each stored level alpha in [-1, 0], a
// Hodge filtration and a module weight filtration on that component.
// `polarizable` is provenance only: it records that the object came from a
// polarizability-preserving construction and is never verified from the data.
struct MonodromicMHM {
  CoreData core;
  std::map<Rational, FiltrationPair> filt;
  bool polarizable = true;

  bool operator==(const MonodromicMHM& o) const { return core == o.core && filt == o.filt; }
};

// The stored pair at a level, or the trivial pair on the zero space.
inline FiltrationPair component_pair(const MonodromicMHM& m, const Rational& alpha) {
  auto it = m.filt.find(alpha);
  if (it != m.filt.end()) return it->second;
  return FiltrationPair{};
}

// Nearby-cycle normalization at alpha in (-1, 0]: F is the module Hodge
// filtration unchanged, while the weight is read one step up
// (W^psi_k = W_{k+1} on the module).
inline FiltrationPair nearby_pair(const MonodromicMHM& m, const Rational& alpha) {
  FiltrationPair p = component_pair(m, alpha);
  return FiltrationPair{p.F, p.W.shifted(-1)};
}

// Vanishing-cycle normalization at level -1: the Hodge filtration is read one
// step up (F^phi_p = F_{p+1} on the module) and the weight is unchanged.
inline FiltrationPair vanishing_pair(const MonodromicMHM& m) {
  FiltrationPair p = component_pair(m, Rational(-1));
  return FiltrationPair{p.F.shifted(-1), p.W};
}

inline MHSModel nearby_mhs(const MonodromicMHM& m, const Rational& alpha) {
  return MHSModel{m.core.dim(alpha), nearby_pair(m, alpha), 0};
}

inline MHSModel vanishing_mhs(const MonodromicMHM& m) {
  return MHSModel{m.core.dim(Rational(-1)), vanishing_pair(m), 0};
}

// Validity of a monodromic mixed Hodge module, checked on the nearby /
// vanishing cycle normalizations:
//   - the underlying core module is valid and all filtrations are exhaustive
//     filtrations of the right spaces;
//   - on every cycle space the monodromy operator is nilpotent and strict of
//     bidegree (F + 1, W - 2), and its weight filtration is a weight
//     filtration relative to itself (which enforces N W_k inside W_{k-2});
//   - can = -u is strict of bidegree (0, 0) and var = w is strict of
//     bidegree (F + 1, W - 2) between the junction cycle spaces.
inline Diagnostics validate_mmhm(const MonodromicMHM& m) {
  Diagnostics diag;
  diag.merge(validate_core(m.core), "core");
  if (!diag.ok()) return diag;

  for (const auto& [alpha, comp] : m.core.components()) {
    auto it = m.filt.find(alpha);
    if (it == m.filt.end()) {
      diag.fail("level " + rational_to_string(alpha) + ": no filtrations given");
      continue;
    }
    if (it->second.F.ambient() != comp.dim || it->second.W.ambient() != comp.dim) {
      diag.fail("level " + rational_to_string(alpha) + ": filtration ambient mismatch");
      continue;
    }
    if (!it->second.F.complete())
      diag.fail("level " + rational_to_string(alpha) + ": Hodge filtration not exhaustive");
    if (!it->second.W.complete())
      diag.fail("level " + rational_to_string(alpha) + ": weight filtration not exhaustive");
  }
  for (const auto& [alpha, fp] : m.filt)
    if (m.core.dim(alpha) == 0)
      diag.fail("filtrations given at absent level " + rational_to_string(alpha));
  if (!diag.ok()) return diag;

  for (const auto& [alpha, comp] : m.core.components()) {
    std::string label = "level " + rational_to_string(alpha);
    FiltrationPair cyc =
        (alpha == Rational(-1)) ? vanishing_pair(m) : nearby_pair(m, alpha);
    if (!is_strict_map(comp.nilp, cyc.F, cyc.F, 1))
      diag.fail(label + ": monodromy is not (F, +1)-strict");
    if (!is_strict_map(comp.nilp, cyc.W, cyc.W, -2))
      diag.fail(label + ": monodromy is not (W, -2)-strict");
    diag.merge(check_relative_monodromy(comp.nilp, cyc.W, cyc.W), label);
  }

  FiltrationPair p0 = nearby_pair(m, Rational(0));
  FiltrationPair pm1 = vanishing_pair(m);
  RationalMatrix can = Rational(-1) * m.core.u();
  RationalMatrix var = m.core.w();
  if (!is_strict_map(can, p0.F, pm1.F, 0)) diag.fail("can is not (F, 0)-strict");
  if (!is_strict_map(can, p0.W, pm1.W, 0)) diag.fail("can is not (W, 0)-strict");
  if (!is_strict_map(var, pm1.F, p0.F, 1)) diag.fail("var is not (F, +1)-strict");
  if (!is_strict_map(var, pm1.W, p0.W, -2)) diag.fail("var is not (W, -2)-strict");
  return diag;
}

inline void require_valid_mmhm(const MonodromicMHM& m) {
  Diagnostics diag = validate_mmhm(m);
  if (!diag.ok()) throw InvalidMMHM(diag.joined());
}

// Tate twist of the whole module: every component pair is twisted the same
// way; the underlying core is unchanged.
inline MonodromicMHM tate_twist_mmhm(const MonodromicMHM& m, long long l) {
  MonodromicMHM out;
  out.core = m.core;
  out.polarizable = m.polarizable;
  for (const auto& [alpha, fp] : m.filt) out.filt[alpha] = shift_twist(fp, l);
  return out;
}

// ---------------------------------------------------------------------------
// Hodge filtration on the expanded window
// ---------------------------------------------------------------------------

struct PropagatedWindow {
  Window win;
  std::map<Rational, Filtration> hodge;  // Hodge filtration per window level
};

// Spread the Hodge filtration from the defining range [-1, 0] over the whole
// window: levels reached by multiplication (beta >= the class representative)
// carry the same filtration, while each differentiation step below shifts the
// filtration up by one (F_p at beta - 1 is F_{p-1} at beta, junction aside,
// where the integer chain below -1 propagates from level -1).
inline PropagatedWindow propagate_filtration(const MonodromicMHM& m, const Rational& k) {
  PropagatedWindow out;
  out.win = expand_window(m.core, k);
  for (const auto& [alpha, comp] : m.core.components()) {
    auto it = m.filt.find(alpha);
    if (it == m.filt.end() || it->second.F.ambient() != comp.dim)
      throw InvalidMMHM("level " + rational_to_string(alpha) +
                        ": missing or mismatched Hodge filtration");
    if (!is_integer(alpha)) {
      for (const Rational& b : out.win.levels) {
        if (!is_integer(b - alpha)) continue;
        long long step = to_long(num(Rational(b - alpha)));
        out.hodge[b] = step >= 0 ? it->second.F : it->second.F.shifted(-step);
      }
    }
  }
  Filtration f0 = component_pair(m, Rational(0)).F;
  Filtration fm1 = component_pair(m, Rational(-1)).F;
  for (const Rational& b : out.win.levels) {
    if (!is_integer(b)) continue;
    long long l = to_long(num(b));
    if (l >= 0) {
      if (out.win.dim(b) != f0.ambient()) throw InvalidMMHM("level 0 filtration mismatch");
      out.hodge[b] = f0;
    } else {
      if (out.win.dim(b) != fm1.ambient()) throw InvalidMMHM("level -1 filtration mismatch");
      out.hodge[b] = fm1.shifted(-l - 1);
    }
  }
  return out;
}

// Strict specializability of the propagated filtration: multiplication maps
// the Hodge filtration onto itself above level -1, and differentiation maps
// F_p onto F_{p+1} one level down below level 0 (the junction maps at the
// boundary of the defining range are not constrained).
inline Diagnostics check_specializability(const PropagatedWindow& pw) {
  Diagnostics diag;
  auto range = [](const Filtration& a, const Filtration& b, long long shift) {
    return std::pair<long long, long long>(
        std::min(a.min_jump(), b.min_jump() - shift) - 1,
        std::max(a.max_jump(), b.max_jump() - shift) + 1);
  };
  for (const Rational& b : pw.win.levels) {
    if (b > Rational(-1) && pw.win.has(b + 1)) {
      const Filtration& src = pw.hodge.at(b);
      const Filtration& tgt = pw.hodge.at(b + 1);
      auto [lo, hi] = range(src, tgt, 0);
      for (long long p = lo; p <= hi; ++p)
        if (apply_map(pw.win.t.at(b), src.value(p)) != tgt.value(p)) {
          diag.fail("multiplication is not onto the Hodge filtration at level " +
                    rational_to_string(b) + ", index " + std::to_string(p));
          break;
        }
    }
    if (b < Rational(0) && pw.win.has(b - 1)) {
      const Filtration& src = pw.hodge.at(b);
      const Filtration& tgt = pw.hodge.at(b - 1);
      auto [lo, hi] = range(src, tgt, 1);
      for (long long p = lo; p <= hi; ++p)
        if (apply_map(pw.win.d.at(b), src.value(p)) != tgt.value(p + 1)) {
          diag.fail("differentiation is not onto the next Hodge step at level " +
                    rational_to_string(b) + ", index " + std::to_string(p));
          break;
        }
    }
  }
  return diag;
}

// Integral shift identities for the propagated Hodge filtration: for a
// defining level a in (-1, 0] the l-fold multiplication composite carries
// F_p at a exactly onto F_p at a+l, and for a in [-1, 0) the l-fold
// differentiation composite carries F_p at a exactly onto F_{p+l} at a-l.
// The composites use the stored window maps, so the check does not depend
// on the gauge chosen when the window was built.
inline Diagnostics check_park_identities(const PropagatedWindow& pw) {
  Diagnostics diag;
  for (const Rational& a : pw.win.levels) {
    if (a > Rational(-1) && a <= Rational(0)) {
      RationalMatrix comp = RationalMatrix::identity(pw.win.dim(a));
      for (long long l = 1; pw.win.has(a + Rational(l)); ++l) {
        comp = pw.win.t.at(a + Rational(l - 1)) * comp;
        const Filtration& src = pw.hodge.at(a);
        const Filtration& tgt = pw.hodge.at(a + Rational(l));
        long long lo = std::min(src.min_jump(), tgt.min_jump()) - 1;
        long long hi = std::max(src.max_jump(), tgt.max_jump()) + 1;
        for (long long p = lo; p <= hi; ++p)
          if (apply_map(comp, src.value(p)) != tgt.value(p)) {
            diag.fail("multiplication shift identity fails from level " +
                      rational_to_string(a) + " by " + std::to_string(l) +
                      " at index " + std::to_string(p));
            break;
          }
      }
    }
    if (a >= Rational(-1) && a < Rational(0)) {
      RationalMatrix comp = RationalMatrix::identity(pw.win.dim(a));
      for (long long l = 1; pw.win.has(a - Rational(l)); ++l) {
        comp = pw.win.d.at(a - Rational(l - 1)) * comp;
        const Filtration& src = pw.hodge.at(a);
        const Filtration& tgt = pw.hodge.at(a - Rational(l));
        long long lo = std::min(src.min_jump(), tgt.min_jump() - l) - 1;
        long long hi = std::max(src.max_jump(), tgt.max_jump() - l) + 1;
        for (long long p = lo; p <= hi; ++p)
          if (apply_map(comp, src.value(p)) != tgt.value(p + l)) {
            diag.fail("differentiation shift identity fails from level " +
                      rational_to_string(a) + " by " + std::to_string(l) +
                      " at index " + std::to_string(p));
            break;
          }
      }
    }
  }
  return diag;
}

}  // namespace monodromic
