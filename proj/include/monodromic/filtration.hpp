#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "monodromic/errors.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/subspace.hpp"

namespace monodromic {

// An increasing, integer-indexed filtration of Q^ambient by subspaces,
// stored canonically as its jump indices (levels where the value strictly
// grows). value(k) is the zero subspace below the first jump and the last
// value at or above the final jump.
class Filtration {
 public:
  Filtration() : ambient_(0) {}

  static Filtration from_levels(int ambient, const std::map<long long, Subspace>& levels) {
    Filtration f;
    f.ambient_ = ambient;
    Subspace prev = Subspace::zero(ambient);
    for (const auto& [k, s] : levels) {
      if (s.ambient() != ambient)
        throw AmbientMismatch("filtration level ambient " + std::to_string(s.ambient()) +
                              " vs " + std::to_string(ambient));
      if (!lattice_contains(s, prev))
        throw Error("filtration not increasing at index " + std::to_string(k));
      if (s == prev) continue;
      f.jumps_.emplace_back(k, s);
      prev = s;
    }
    return f;
  }

  // The filtration jumping from 0 to the full space at `index`.
  static Filtration step(int ambient, long long index) {
    std::map<long long, Subspace> levels;
    levels[index] = Subspace::full(ambient);
    return from_levels(ambient, levels);
  }

  int ambient() const { return ambient_; }

  const std::vector<std::pair<long long, Subspace>>& jumps() const { return jumps_; }

  Subspace value(long long k) const {
    Subspace v = Subspace::zero(ambient_);
    for (const auto& [idx, s] : jumps_) {
      if (idx > k) break;
      v = s;
    }
    return v;
  }

  long long min_jump() const { return jumps_.empty() ? 0 : jumps_.front().first; }
  long long max_jump() const { return jumps_.empty() ? 0 : jumps_.back().first; }

  // Exhaustive: stabilizes at the full ambient space.
  bool complete() const {
    if (ambient_ == 0) return true;
    return !jumps_.empty() && jumps_.back().second.is_full();
  }

  int graded_dim(long long k) const { return value(k).dim() - value(k - 1).dim(); }

  bool operator==(const Filtration& o) const {
    return ambient_ == o.ambient_ && jumps_ == o.jumps_;
  }
  bool operator!=(const Filtration& o) const { return !(*this == o); }

  // Reindex: value_new(k) = value(k - delta), i.e. every jump moves by +delta.
  Filtration shifted(long long delta) const {
    Filtration f;
    f.ambient_ = ambient_;
    for (const auto& [k, s] : jumps_) f.jumps_.emplace_back(k + delta, s);
    return f;
  }

  // Image filtration under a linear map out of this ambient space.
  Filtration pushforward(const RationalMatrix& f) const {
    if (f.cols() != ambient_)
      throw AmbientMismatch("filtration pushforward: map " + f.shape() + " vs ambient " +
                            std::to_string(ambient_));
    std::map<long long, Subspace> levels;
    for (const auto& [k, s] : jumps_) levels[k] = apply_map(f, s);
    return from_levels(f.rows(), levels);
  }

  // Induced filtration on a subspace, in the subspace's canonical basis.
  Filtration restrict_to(const Subspace& sub) const {
    if (sub.ambient() != ambient_)
      throw AmbientMismatch("filtration restriction: subspace ambient " +
                            std::to_string(sub.ambient()) + " vs " + std::to_string(ambient_));
    std::map<long long, Subspace> levels;
    for (const auto& [k, s] : jumps_) {
      Subspace cap = lattice_intersect(s, sub);
      auto coords = solve_matrix(sub.basis(), cap.basis());
      if (!coords) throw Error("filtration restriction: intersection escaped the subspace");
      levels[k] = Subspace::span(*coords);
    }
    return from_levels(sub.dim(), levels);
  }

  // Induced filtration on the quotient by a subspace (pivot-completion
  // coordinates).
  Filtration quotient_by(const Subspace& sub) const {
    return pushforward(quotient_projection(sub));
  }

  std::string describe() const {
    std::string out = "{";
    for (const auto& [k, s] : jumps_) {
      if (out.size() > 1) out += ", ";
      out += std::to_string(k) + ": dim " + std::to_string(s.dim());
    }
    return out + "}";
  }

 private:
  int ambient_;
  std::vector<std::pair<long long, Subspace>> jumps_;
};

// Dimensions of the graded pieces, keyed by jump index.
inline std::map<long long, int> graded_dims(const Filtration& f) {
  std::map<long long, int> out;
  for (const auto& [k, s] : f.jumps()) out[k] = f.graded_dim(k);
  return out;
}

// A Hodge-style pair of exhaustive filtrations on one space.
struct FiltrationPair {
  Filtration F;
  Filtration W;

  bool operator==(const FiltrationPair& o) const { return F == o.F && W == o.W; }
};

// Tate twist by l: the F jumps move up by l and the W jumps move down by 2l
// (value-level: F'_p = F_{p-l}, W'_k = W_{k+2l}).
inline FiltrationPair shift_twist(const FiltrationPair& p, long long l) {
  return FiltrationPair{p.F.shifted(l), p.W.shifted(-2 * l)};
}

// f carries src level p into tgt level p + shift, for every p.
inline bool is_filtered_map(const RationalMatrix& f, const Filtration& src,
                            const Filtration& tgt, long long shift) {
  long long lo = std::min(src.min_jump(), tgt.min_jump() - shift) - 1;
  long long hi = std::max(src.max_jump(), tgt.max_jump() - shift) + 1;
  for (long long p = lo; p <= hi; ++p)
    if (!lattice_contains(tgt.value(p + shift), apply_map(f, src.value(p)))) return false;
  return true;
}

// Strictness: f(src level p) equals (image of f) intersected with tgt level
// p + shift, for every p. Strict maps are in particular filtered.
inline bool is_strict_map(const RationalMatrix& f, const Filtration& src, const Filtration& tgt,
                          long long shift) {
  Subspace image = kernel_image(f).image;
  long long lo = std::min(src.min_jump(), tgt.min_jump() - shift) - 1;
  long long hi = std::max(src.max_jump(), tgt.max_jump() - shift) + 1;
  for (long long p = lo; p <= hi; ++p) {
    if (apply_map(f, src.value(p)) != lattice_intersect(image, tgt.value(p + shift)))
      return false;
  }
  return true;
}

// The unique increasing filtration W centered at `center` with N W_k
// contained in W_{k-2} and N^k inducing isomorphisms
// Gr_{center+k} -> Gr_{center-k}; computed by the closed formula
//   W_{center+k} = sum_{j >= max(k,0)} Ker N^{j+1} /\ Im N^{j-k}.
inline Filtration monodromy_weight_filtration(const RationalMatrix& n, long long center) {
  auto nil = nilpotency_index(n);
  if (!nil) throw NotNilpotent("weight filtration needs a nilpotent operator");
  int nu = *nil;
  int dim = n.rows();
  std::vector<RationalMatrix> pow;
  pow.push_back(RationalMatrix::identity(dim));
  for (int e = 1; e <= nu + 1; ++e) pow.push_back(pow.back() * n);
  auto power = [&](int e) -> const RationalMatrix& {
    return pow[static_cast<std::size_t>(std::min(e, nu + 1))];
  };
  std::vector<Subspace> ker(static_cast<std::size_t>(nu) + 2, Subspace::zero(dim));
  std::vector<Subspace> im(static_cast<std::size_t>(nu) + 2, Subspace::zero(dim));
  for (int e = 0; e <= nu + 1; ++e) {
    KernelImage ki = kernel_image(power(e));
    ker[static_cast<std::size_t>(e)] = ki.kernel;
    im[static_cast<std::size_t>(e)] = ki.image;
  }
  auto ker_at = [&](int e) { return ker[static_cast<std::size_t>(std::min(e, nu + 1))]; };
  auto im_at = [&](int e) { return im[static_cast<std::size_t>(std::min(e, nu + 1))]; };
  std::map<long long, Subspace> levels;
  for (int k = -nu; k <= nu; ++k) {
    Subspace w = Subspace::zero(dim);
    for (int j = std::max(k, 0); j <= nu + std::abs(k); ++j)
      w = lattice_sum(w, lattice_intersect(ker_at(j + 1), im_at(j - k)));
    levels[center + k] = w;
  }
  return Filtration::from_levels(dim, levels);
}

// Filtration on a tensor product by convolution:
//   level p = sum_{s+t=p} (a level s) tensor (b level t),
// in Kronecker coordinates (first factor slow, second fast).
inline Filtration tensor_filtration(const Filtration& a, const Filtration& b) {
  int ambient = a.ambient() * b.ambient();
  std::map<long long, Subspace> levels;
  long long lo = a.min_jump() + b.min_jump();
  long long hi = a.max_jump() + b.max_jump();
  for (long long p = lo; p <= hi; ++p) {
    Subspace v = Subspace::zero(ambient);
    for (long long s = a.min_jump(); s <= a.max_jump(); ++s) {
      const Subspace as = a.value(s);
      const Subspace bt = b.value(p - s);
      if (as.is_zero() || bt.is_zero()) continue;
      v = lattice_sum(v, Subspace::span(as.basis().kron(bt.basis())));
    }
    levels[p] = v;
  }
  return Filtration::from_levels(ambient, levels);
}

inline Filtration tensor_filtrations(const Filtration& a, const Filtration& b) {
  return tensor_filtration(a, b);
}

inline bool check_strict(const RationalMatrix& f, const Filtration& src, const Filtration& tgt,
                         long long shift) {
  return is_strict_map(f, src, tgt, shift);
}

// W is a weight filtration for the nilpotent operator n relative to the
// increasing filtration L when
//   (i)  n W_k is contained in W_{k-2} for every k, and
//   (ii) for every k and every l >= 1, n^l induces an isomorphism
//        Gr^W_{k+l} Gr^L_k -> Gr^W_{k-l} Gr^L_k.
// The graded piece Gr^W_j Gr^L_k is realised as the quotient
//   ((W_j /\ L_k) + L_{k-1}) / ((W_{j-1} /\ L_k) + L_{k-1}).
// Violations name the first failing (k, l).
inline Diagnostics check_relative_monodromy(const RationalMatrix& n, const Filtration& l_filt,
                                            const Filtration& w_filt) {
  Diagnostics diag;
  if (!n.is_square() || n.rows() != l_filt.ambient() || n.rows() != w_filt.ambient())
    throw AmbientMismatch("relative monodromy check: operator and filtrations must share one space");
  if (!nilpotency_index(n)) throw NotNilpotent("relative monodromy check needs a nilpotent operator");

  for (long long k = w_filt.min_jump(); k <= w_filt.max_jump(); ++k) {
    if (!lattice_contains(w_filt.value(k - 2), apply_map(n, w_filt.value(k)))) {
      diag.fail("axiom (i): n does not carry W_" + std::to_string(k) + " into W_" +
                std::to_string(k - 2));
      return diag;
    }
  }

  long long span = w_filt.max_jump() - w_filt.min_jump();
  std::vector<RationalMatrix> pow;
  pow.push_back(RationalMatrix::identity(n.rows()));
  for (long long e = 1; e <= span + 1; ++e) pow.push_back(pow.back() * n);

  // The graded subquotient ((W_j /\ L_k) + L_{k-1}) at level pair (j, k).
  auto layer = [&](long long j, long long k) {
    return lattice_sum(lattice_intersect(w_filt.value(j), l_filt.value(k)),
                       l_filt.value(k - 1));
  };

  for (const auto& [k, unused] : l_filt.jumps()) {
    (void)unused;
    for (long long l = 1; l <= span + 1; ++l) {
      const RationalMatrix& nl = pow[static_cast<std::size_t>(l)];
      Subspace a_top = layer(k + l, k);
      Subspace a_bot = layer(k + l - 1, k);
      Subspace b_top = layer(k - l, k);
      Subspace b_bot = layer(k - l - 1, k);
      if (a_top.dim() - a_bot.dim() != b_top.dim() - b_bot.dim()) {
        diag.fail("axiom (ii): graded dimensions differ at (k, l) = (" + std::to_string(k) +
                  ", " + std::to_string(l) + ")");
        return diag;
      }
      if (a_top.dim() == a_bot.dim()) continue;  // both graded pieces are zero
      RationalMatrix graded(0, 0);
      try {
        RationalMatrix restricted = induce(nl, a_top, b_top, InduceMode::Restrict);
        auto a_bot_in = solve_matrix(a_top.basis(), a_bot.basis());
        auto b_bot_in = solve_matrix(b_top.basis(), b_bot.basis());
        if (!a_bot_in || !b_bot_in)
          throw Error("relative monodromy check: layer inclusion lost");  // unreachable by construction
        graded = induce(restricted, Subspace::span(*a_bot_in), Subspace::span(*b_bot_in),
                        InduceMode::Descend);
      } catch (const NotPreserved&) {
        diag.fail("axiom (ii): n^" + std::to_string(l) + " does not respect the layer at k = " +
                  std::to_string(k));
        return diag;
      }
      if (!graded.is_square() || !invertible(graded)) {
        diag.fail("axiom (ii): n^" + std::to_string(l) +
                  " is not an isomorphism on the graded piece at (k, l) = (" + std::to_string(k) +
                  ", " + std::to_string(l) + ")");
        return diag;
      }
    }
  }
  return diag;
}

}  // namespace monodromic
