#pragma once

// Building blocks over the punctured line and the kernel/cokernel
// construction that turns levels-only data into a module, together with its
// stabilization and comparison-with-direct oracles.

#include <map>
#include <string>
#include <vector>

#include "monodromic/gluing.hpp"

namespace monodromic {

// ---------------------------------------------------------------------------
// Blocks
// ---------------------------------------------------------------------------

// Rank-r unipotent block: N e_i = e_{i-1} in the fixed basis, Hodge
// filtration F_p = span(e_{r-1-p}, ..., e_{r-1}), weights centered at -(r-1)
// through the explicit degree formula deg(e_j) = -2(r-1-j) (which agrees
// with the weight filtration of N centered at -(r-1)).
inline CycleComponent nilp_block(int r) {
  if (r < 1) throw Error("nilp_block: rank must be positive");
  RationalMatrix n(r, r);
  for (int i = 0; i + 1 < r; ++i) n.at(i, i + 1) = 1;
  std::map<long long, Subspace> f, w;
  for (int p = 0; p < r; ++p) {
    RationalMatrix gen(r, p + 1);
    for (int j = 0; j <= p; ++j) gen.at(r - 1 - p + j, j) = 1;
    f[p] = Subspace::span(gen);
  }
  for (int j = 0; j < r; ++j) {
    RationalMatrix gen(r, j + 1);
    for (int i = 0; i <= j; ++i) gen.at(i, i) = 1;
    w[-2LL * (r - 1 - j)] = Subspace::span(gen);
  }
  FiltrationPair pair{Filtration::from_levels(r, f), Filtration::from_levels(r, w)};
  return CycleComponent{MHSModel{r, pair, 0}, n};
}

// The unipotent block as levels-only data: one component at alpha = 0.
inline PsiSide l_block(int r) { return PsiSide{{Rational(0), nilp_block(r)}}; }

// Semisimple block for the m-th roots of unity: one line at each
// alpha = -k/m with trivial operator, Hodge jump at 0, weight 1.
inline PsiSide semi_block(int m) {
  if (m < 1) throw Error("semi_block: order must be positive");
  PsiSide s;
  for (int k = 0; k < m; ++k)
    s[Rational(-k, m)] = CycleComponent{
        MHSModel{1, FiltrationPair{Filtration::step(1, 0), Filtration::step(1, 1)}, 0},
        RationalMatrix::zero(1, 1)};
  return s;
}

struct BlockPair {
  PsiSide l_block;
  PsiSide s_block;
};

inline BlockPair make_blocks(int r, int m) { return BlockPair{l_block(r), semi_block(m)}; }

// ---------------------------------------------------------------------------
// Morphisms between blocks
// ---------------------------------------------------------------------------

// A filtered map between two block components. All three block morphisms
// have zero shifts: any Tate bookkeeping is baked into the endpoint data.
struct BlockMap {
  CycleComponent src;
  CycleComponent tgt;
  RationalMatrix matrix{0, 0};
};

inline Diagnostics validate_block_map(const BlockMap& f) {
  Diagnostics diag;
  if (f.matrix.rows() != f.tgt.mhs.dim || f.matrix.cols() != f.src.mhs.dim) {
    diag.fail("matrix has shape " + f.matrix.shape() + ", expected " +
              std::to_string(f.tgt.mhs.dim) + "x" + std::to_string(f.src.mhs.dim));
    return diag;
  }
  if (f.matrix * f.src.nilp != f.tgt.nilp * f.matrix)
    diag.fail("map does not commute with the nilpotent operators");
  if (!is_strict_map(f.matrix, f.src.mhs.filt.F, f.tgt.mhs.filt.F, 0))
    diag.fail("map is not (F, 0)-strict");
  if (!is_strict_map(f.matrix, f.src.mhs.filt.W, f.tgt.mhs.filt.W, 0))
    diag.fail("map is not (W, 0)-strict");
  return diag;
}

// Inclusion of the m-th-root lines into the (a*m)-th-root lines: the identity
// on each matched label.
inline std::map<Rational, BlockMap> s_incl(int m, int a) {
  if (m < 1 || a < 1) throw Error("s_incl: orders must be positive");
  std::map<Rational, BlockMap> out;
  PsiSide src = semi_block(m), tgt = semi_block(a * m);
  for (const auto& [alpha, comp] : src)
    out[alpha] = BlockMap{comp, tgt.at(alpha), RationalMatrix::identity(1)};
  return out;
}

// Projection V_{r+l} -> V_r killing the bottom l basis vectors
// (e_i -> e_{i-l}); the unique N-equivariant surjection between the blocks.
inline BlockMap l_proj(int r, int l) {
  if (r < 1 || l < 1) throw Error("l_proj: indices must be positive");
  CycleComponent src = nilp_block(r + l), tgt = nilp_block(r);
  RationalMatrix p(r, r + l);
  for (int i = 0; i < r; ++i) p.at(i, i + l) = 1;
  return BlockMap{src, tgt, p};
}

// Inclusion V_r -> V_{r+l}(-l) of the bottom segment; the twist on the target
// aligns both filtrations so the map has zero shifts.
inline BlockMap l_twist_incl(int r, int l) {
  if (r < 1 || l < 1) throw Error("l_twist_incl: indices must be positive");
  CycleComponent src = nilp_block(r);
  CycleComponent big = nilp_block(r + l);
  CycleComponent tgt{tate_twist(big.mhs, -l), big.nilp};
  RationalMatrix j(r + l, r);
  for (int i = 0; i < r; ++i) j.at(i, i) = 1;
  return BlockMap{src, tgt, j};
}

// ---------------------------------------------------------------------------
// Kernel/cokernel construction
// ---------------------------------------------------------------------------

// An alpha-graded module over the punctured line: the same shape as
// levels-only data, but the weights carry the module normalization (one
// higher than the levels normalization).
struct CStarModule {
  std::map<Rational, CycleComponent> comps;

  bool operator==(const CStarModule& o) const { return comps == o.comps; }
};

// Levels -> module directly: operator and F copied, W shifted up by one.
inline CStarModule direct_module(const PsiSide& g) {
  CStarModule m;
  for (const auto& [alpha, comp] : g)
    m.comps[alpha] = CycleComponent{
        MHSModel{comp.mhs.dim,
                 FiltrationPair{comp.mhs.filt.F, comp.mhs.filt.W.shifted(1)},
                 comp.mhs.twist_label},
        comp.nilp};
  return m;
}

// Levels of a module over the punctured line: undo the weight normalization.
inline PsiSide psi_of(const CStarModule& m) {
  PsiSide g;
  for (const auto& [alpha, comp] : m.comps)
    g[alpha] = CycleComponent{
        MHSModel{comp.mhs.dim,
                 FiltrationPair{comp.mhs.filt.F, comp.mhs.filt.W.shifted(-1)},
                 comp.mhs.twist_label},
        comp.nilp};
  return g;
}

// The four constructions: the first letter picks kernel or cokernel of the
// unipotent step (the map N(x)1 - 1(x)N_r on the tensor with the rank-r
// block), the second letter the kernel or cokernel of the root-matching
// step, whose two answers coincide on the nose.
enum class ChakoVariant { kk, kc, ck, cc };

namespace detail {

// One alpha component tensored with the rank-r unipotent block, after the
// root-matching step (which selects the matching line of the semisimple
// block: weight one, Hodge zero, identity on the operator).
struct TensorPiece {
  int dim = 0;
  RationalMatrix theta{0, 0};  // N(x)1 - 1(x)N_r, whose kernel/cokernel is taken
  RationalMatrix n_out{0, 0};  // 1(x)N_r; on kernel and cokernel equals N(x)1
  Filtration F;
  Filtration W;
};

inline TensorPiece tensor_with_block(const CycleComponent& c, int r) {
  CycleComponent block = nilp_block(r);
  int d = c.mhs.dim;
  RationalMatrix id_d = RationalMatrix::identity(d);
  RationalMatrix id_r = RationalMatrix::identity(r);
  TensorPiece t;
  t.dim = d * r;
  t.theta = c.nilp.kron(id_r) - id_d.kron(block.nilp);
  t.n_out = id_d.kron(block.nilp);
  t.F = tensor_filtration(c.mhs.filt.F, block.mhs.filt.F);
  t.W = tensor_filtration(c.mhs.filt.W.shifted(1), block.mhs.filt.W);
  return t;
}

// Kernel of theta with the -(r-1) twist applied to the stored filtrations
// and recorded on the label; carrier kept for witnesses.
struct CarrierPiece {
  CycleComponent comp;
  Subspace carrier = Subspace::zero(0);  // kernel basis (kernel variants)
  RationalMatrix proj{0, 0};             // quotient projection (cokernel variants)
};

inline CarrierPiece ker_piece(const TensorPiece& t, const Subspace& k, int r, long long label) {
  RationalMatrix n = induce(t.n_out, k, k, InduceMode::Restrict);
  FiltrationPair pair{t.F.restrict_to(k), t.W.restrict_to(k)};
  CarrierPiece out;
  out.comp = CycleComponent{MHSModel{k.dim(), shift_twist(pair, -(r - 1)), label - (r - 1)}, n};
  out.carrier = k;
  return out;
}

inline CarrierPiece ker_piece(const TensorPiece& t, int r, long long label) {
  return ker_piece(t, kernel_image(t.theta).kernel, r, label);
}

inline CarrierPiece coker_piece(const TensorPiece& t, const Subspace& im, long long label) {
  RationalMatrix n = induce(t.n_out, im, im, InduceMode::Descend);
  FiltrationPair pair{t.F.quotient_by(im), t.W.quotient_by(im)};
  CarrierPiece out;
  out.proj = quotient_projection(im);
  out.comp = CycleComponent{MHSModel{out.proj.rows(), pair, label}, n};
  return out;
}

inline CarrierPiece coker_piece(const TensorPiece& t, long long label) {
  return coker_piece(t, kernel_image(t.theta).image, label);
}

// First index at which two filtrations on the same ambient space disagree.
inline std::optional<long long> first_filtration_difference(const Filtration& a,
                                                            const Filtration& b) {
  std::vector<long long> keys;
  for (const auto& [k, s] : a.jumps()) keys.push_back(k);
  for (const auto& [k, s] : b.jumps()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (long long k : keys)
    if (!(a.value(k) == b.value(k))) return k;
  return std::nullopt;
}

}  // namespace detail

inline void require_denominators(const PsiSide& g, int m) {
  for (const auto& [alpha, comp] : g) {
    if (Integer(m) % den(alpha) != 0)
      throw EigenvalueDenominatorMismatch("level " + rational_to_string(alpha) +
                                          " needs a denominator dividing the root order " +
                                          std::to_string(m));
  }
}

inline CStarModule chako_construct(const PsiSide& g, int r, int m, ChakoVariant variant) {
  Diagnostics diag = validate_psi_side(g);
  if (!diag.ok()) throw InvalidGluing(diag.joined());
  if (r < 1 || m < 1) throw Error("chako_construct: r and m must be positive");
  require_denominators(g, m);
  bool take_kernel = (variant == ChakoVariant::kk || variant == ChakoVariant::kc);
  CStarModule out;
  for (const auto& [alpha, comp] : g) {
    detail::TensorPiece t = detail::tensor_with_block(comp, r);
    detail::CarrierPiece piece = take_kernel
                                     ? detail::ker_piece(t, r, comp.mhs.twist_label)
                                     : detail::coker_piece(t, comp.mhs.twist_label);
    if (piece.comp.mhs.dim > 0) out.comps[alpha] = piece.comp;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stabilization
// ---------------------------------------------------------------------------

// Report of the stabilization behaviour around the probed rank r:
//  - the maps induced by the block projection on kernels (which act as N^l on
//    the parameter) and by the twisted inclusion on cokernels vanish once l
//    reaches the nilpotency bound l0;
//  - the twisted inclusion induces kernel_{r'} = kernel_{r'+1} and the
//    projection induces cokernel_{r'+1} = cokernel_{r'} from l0 onward;
//  - all four variants agree at the probed rank through the explicit
//    kernel- and cokernel-witnesses out of the parameter space.
struct StabilizationReport {
  int l0 = 1;
  std::map<int, bool> connecting_zero;  // l -> both induced maps vanish
  std::map<int, bool> kernel_step;      // r' -> kernels at r' and r'+1 match
  std::map<int, bool> cokernel_step;    // r' -> cokernels at r'+1 and r' match
  int stable_from = 1;
  bool variants_agree = false;
  Diagnostics issues;

  bool ok() const { return issues.ok(); }
};

namespace detail {

// e_i -> e_{i-l} on the rank-(r+l) block (bottom-kill projection).
inline RationalMatrix block_proj_matrix(int r, int l) {
  RationalMatrix p(r, r + l);
  for (int i = 0; i < r; ++i) p.at(i, i + l) = 1;
  return p;
}

// e_i -> e_i into the rank-(r+l) block (bottom inclusion).
inline RationalMatrix block_incl_matrix(int r, int l) {
  RationalMatrix j(r + l, r);
  for (int i = 0; i < r; ++i) j.at(i, i) = 1;
  return j;
}

// The parameter-space witnesses: kappa_r m = sum_j N^j m (x) e_j lands in the
// kernel of theta once N^r = 0, and m -> class of m (x) e_{r-1} spans the
// cokernel.
inline RationalMatrix kappa_matrix(const RationalMatrix& n, int r) {
  int d = n.rows();
  RationalMatrix kappa(d * r, d);
  RationalMatrix power = RationalMatrix::identity(d);
  for (int j = 0; j < r; ++j) {
    RationalMatrix e(r, 1);
    e.at(j, 0) = 1;
    kappa = kappa + power.kron(e);
    power = n * power;
  }
  return kappa;
}

inline RationalMatrix top_embedding(int d, int r) {
  RationalMatrix e(r, 1);
  e.at(r - 1, 0) = 1;
  return RationalMatrix::identity(d).kron(e);
}

}  // namespace detail

inline StabilizationReport stabilization_check(const PsiSide& g, int r) {
  Diagnostics diag = validate_psi_side(g);
  if (!diag.ok()) throw InvalidGluing(diag.joined());
  if (r < 1) throw Error("stabilization_check: rank must be positive");

  StabilizationReport rep;
  for (const auto& [alpha, comp] : g) {
    auto idx = nilpotency_index(comp.nilp);
    if (idx && *idx > rep.l0) rep.l0 = *idx;
  }

  std::vector<bool> zero_at(rep.l0 + 2, true);
  std::vector<bool> ker_at(r + 1, true), cok_at(r + 1, true);
  bool agree = r >= rep.l0;

  for (const auto& [alpha, comp] : g) {
    int d = comp.mhs.dim;
    // Every rank from 1 to r + l0 + 1 is probed below, most of them several
    // times, so compute each tensor's kernel/image data exactly once.
    int top = r + rep.l0 + 1;
    std::vector<Subspace> ker(top + 1, Subspace::zero(0)), im(top + 1, Subspace::zero(0));
    std::vector<detail::CarrierPiece> kp(r + 2), cp(r + 2);
    for (int rho = 1; rho <= top; ++rho) {
      detail::TensorPiece t = detail::tensor_with_block(comp, rho);
      KernelImage ki = kernel_image(t.theta);
      ker[rho] = ki.kernel;
      im[rho] = ki.image;
      if (rho <= r + 1) {
        kp[rho] = detail::ker_piece(t, ki.kernel, rho, comp.mhs.twist_label);
        cp[rho] = detail::coker_piece(t, ki.image, comp.mhs.twist_label);
      }
    }

    // Vanishing of the induced maps for l up to one past the bound.
    for (int l = 1; l <= rep.l0 + 1; ++l) {
      RationalMatrix on_kernels =
          induce(RationalMatrix::identity(d).kron(detail::block_proj_matrix(r, l)),
                 ker[r + l], ker[r], InduceMode::Restrict);
      RationalMatrix on_cokernels =
          induce(RationalMatrix::identity(d).kron(detail::block_incl_matrix(r, l)),
                 im[r], im[r + l], InduceMode::Descend);
      if (!on_kernels.is_zero() || !on_cokernels.is_zero()) zero_at[l] = false;
    }

    // Stepwise stabilization of kernels and cokernels.
    for (int rp = 1; rp <= r; ++rp) {
      RationalMatrix step =
          induce(RationalMatrix::identity(d).kron(detail::block_incl_matrix(rp, 1)),
                 kp[rp].carrier, kp[rp + 1].carrier, InduceMode::Restrict);
      if (!invertible(step) ||
          !(kp[rp].comp.mhs.filt.F.pushforward(step) == kp[rp + 1].comp.mhs.filt.F) ||
          !(kp[rp].comp.mhs.filt.W.pushforward(step) == kp[rp + 1].comp.mhs.filt.W))
        ker_at[rp] = false;

      RationalMatrix down =
          induce(RationalMatrix::identity(d).kron(detail::block_proj_matrix(rp, 1)),
                 im[rp + 1], im[rp], InduceMode::Descend);
      if (!invertible(down) ||
          !(cp[rp + 1].comp.mhs.filt.F.pushforward(down) == cp[rp].comp.mhs.filt.F) ||
          !(cp[rp + 1].comp.mhs.filt.W.pushforward(down) == cp[rp].comp.mhs.filt.W))
        cok_at[rp] = false;
    }

    // Variant agreement at the probed rank, through the parameter space.
    if (agree) {
      auto kappa = solve_matrix(kp[r].carrier.basis(), detail::kappa_matrix(comp.nilp, r));
      if (!kappa || !invertible(*kappa)) {
        agree = false;
      } else {
        RationalMatrix to_coker = cp[r].proj * detail::top_embedding(d, r);
        RationalMatrix bridge = to_coker * inverse(*kappa);
        if (!invertible(bridge) || bridge * kp[r].comp.nilp != cp[r].comp.nilp * bridge ||
            !(kp[r].comp.mhs.filt.F.pushforward(bridge) == cp[r].comp.mhs.filt.F) ||
            !(kp[r].comp.mhs.filt.W.pushforward(bridge) == cp[r].comp.mhs.filt.W))
          agree = false;
      }
    }
  }

  for (int l = 1; l <= rep.l0 + 1; ++l) {
    rep.connecting_zero[l] = zero_at[l];
    if (l >= rep.l0 && !zero_at[l])
      rep.issues.fail("induced maps do not vanish at l = " + std::to_string(l));
  }
  for (int rp = 1; rp <= r; ++rp) {
    rep.kernel_step[rp] = ker_at[rp];
    rep.cokernel_step[rp] = cok_at[rp];
  }
  rep.stable_from = r + 1;
  for (int rp = r; rp >= 1; --rp) {
    if (rep.kernel_step[rp] && rep.cokernel_step[rp])
      rep.stable_from = rp;
    else
      break;
  }
  if (rep.l0 <= r && rep.stable_from > rep.l0)
    rep.issues.fail("kernels or cokernels do not stabilize from r = " +
                    std::to_string(rep.l0));
  rep.variants_agree = agree;
  if (r >= rep.l0 && !agree)
    rep.issues.fail("kernel and cokernel variants disagree at r = " + std::to_string(r));
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison with the direct construction
// ---------------------------------------------------------------------------

struct DirectComparison {
  bool isomorphic = false;
  std::map<Rational, RationalMatrix> witness;  // parameter space -> cc output
  Diagnostics issues;
};

// The cc construction against the direct one, witnessed per level by the
// invertible map m -> class of m (x) e_top; the same witness carries the
// levels of the output back onto g (keys, operators, and both filtrations).
inline DirectComparison compare_with_direct(const PsiSide& g, int r, int m) {
  DirectComparison rep;
  CStarModule built = chako_construct(g, r, m, ChakoVariant::cc);
  CStarModule direct = direct_module(g);
  if (built.comps.size() != direct.comps.size()) {
    rep.issues.fail("construction lost or invented levels");
    return rep;
  }
  for (const auto& [alpha, dcomp] : direct.comps) {
    auto it = built.comps.find(alpha);
    std::string label = "level " + rational_to_string(alpha);
    if (it == built.comps.end()) {
      rep.issues.fail(label + ": missing from the construction");
      continue;
    }
    const CycleComponent& bcomp = it->second;
    if (bcomp.mhs.dim != dcomp.mhs.dim) {
      rep.issues.fail(label + ": dimension " + std::to_string(bcomp.mhs.dim) +
                      " differs from " + std::to_string(dcomp.mhs.dim));
      continue;
    }
    if (bcomp.mhs.twist_label != dcomp.mhs.twist_label)
      rep.issues.fail(label + ": Tate bookkeeping differs");
    detail::TensorPiece t = detail::tensor_with_block(g.at(alpha), r);
    RationalMatrix proj = quotient_projection(kernel_image(t.theta).image);
    RationalMatrix wit = proj * detail::top_embedding(dcomp.mhs.dim, r);
    if (!invertible(wit)) {
      rep.issues.fail(label + ": the top-class witness is not invertible");
      continue;
    }
    if (wit * dcomp.nilp != bcomp.nilp * wit)
      rep.issues.fail(label + ": witness does not intertwine the operators");
    if (auto p = detail::first_filtration_difference(dcomp.mhs.filt.F.pushforward(wit),
                                                     bcomp.mhs.filt.F))
      rep.issues.fail(label + ": F differs first at " + std::to_string(*p));
    if (auto k = detail::first_filtration_difference(dcomp.mhs.filt.W.pushforward(wit),
                                                     bcomp.mhs.filt.W))
      rep.issues.fail(label + ": W differs first at " + std::to_string(*k));
    rep.witness[alpha] = wit;
  }
  rep.isomorphic = rep.issues.ok();
  return rep;
}

}  // namespace monodromic
