#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "monodromic/core.hpp"
#include "monodromic/errors.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/rational.hpp"
#include "monodromic/subspace.hpp"

namespace monodromic {

// A morphism of core modules: one matrix per level, commuting with the
// nilpotent operators and with both connecting maps. Levels where a map is
// not stored carry the zero map of the right shape.
struct CoreMorphism {
  CoreData src;
  CoreData tgt;
  std::map<Rational, RationalMatrix> maps;

  RationalMatrix map_at(const Rational& alpha) const {
    auto it = maps.find(alpha);
    if (it != maps.end()) return it->second;
    return RationalMatrix::zero(tgt.dim(alpha), src.dim(alpha));
  }
};

inline Diagnostics validate_core_morphism(const CoreMorphism& f) {
  Diagnostics diag;
  diag.merge(validate_core(f.src), "source");
  diag.merge(validate_core(f.tgt), "target");
  if (!diag.ok()) return diag;
  for (const auto& [alpha, m] : f.maps) {
    if (m.rows() != f.tgt.dim(alpha) || m.cols() != f.src.dim(alpha))
      diag.fail("map at level " + rational_to_string(alpha) + " has shape " + m.shape() +
                ", expected " + std::to_string(f.tgt.dim(alpha)) + "x" +
                std::to_string(f.src.dim(alpha)));
  }
  if (!diag.ok()) return diag;
  for (const auto& [alpha, comp] : f.src.components()) {
    RationalMatrix m = f.map_at(alpha);
    if (m * comp.nilp != f.tgt.nilp(alpha) * m)
      diag.fail("map does not commute with the operator at level " + rational_to_string(alpha));
  }
  RationalMatrix f0 = f.map_at(Rational(0));
  RationalMatrix fm1 = f.map_at(Rational(-1));
  if (fm1 * f.src.u() != f.tgt.u() * f0) diag.fail("map does not commute with u");
  if (f0 * f.src.w() != f.tgt.w() * fm1) diag.fail("map does not commute with w");
  return diag;
}

inline void require_core_morphism(const CoreMorphism& f) {
  Diagnostics diag = validate_core_morphism(f);
  if (!diag.ok()) throw NotAMorphism(diag.joined());
}

enum class MorphismPart { Kernel, Cokernel, Image };

// The kernel, cokernel, or image of a core morphism, computed level by level
// with the operators and connecting maps induced on the sub / quotient.
// The returned module's level spaces carry the canonical bases of the
// corresponding subspaces (kernel/image) or pivot-completion quotient
// coordinates (cokernel).
inline CoreData ker_coker(const CoreMorphism& f, MorphismPart part) {
  require_core_morphism(f);

  // Per level: the subspace (of src for kernels, of tgt otherwise) plus the
  // ambient module the induced operators act on.
  std::map<Rational, Subspace> carrier;
  const CoreData& amb = (part == MorphismPart::Kernel) ? f.src : f.tgt;
  std::vector<Rational> levels;
  for (const auto& [alpha, comp] : f.src.components()) levels.push_back(alpha);
  for (const auto& [alpha, comp] : f.tgt.components())
    if (f.src.dim(alpha) == 0) levels.push_back(alpha);
  levels.push_back(Rational(0));
  levels.push_back(Rational(-1));
  for (const Rational& alpha : levels) {
    if (carrier.count(alpha)) continue;
    KernelImage ki = kernel_image(f.map_at(alpha));
    carrier[alpha] = (part == MorphismPart::Kernel) ? ki.kernel : ki.image;
  }

  auto induced = [&](const RationalMatrix& op, const Rational& a, const Rational& b) {
    if (part == MorphismPart::Cokernel)
      return induce(op, carrier.at(a), carrier.at(b), InduceMode::Descend);
    return induce(op, carrier.at(a), carrier.at(b), InduceMode::Restrict);
  };

  CoreData out;
  for (const auto& [alpha, sub] : carrier) {
    int d = (part == MorphismPart::Cokernel) ? amb.dim(alpha) - sub.dim() : sub.dim();
    if (d == 0) continue;
    out.set_component(alpha, induced(amb.nilp(alpha), alpha, alpha));
  }
  out.set_connectors(induced(amb.u(), Rational(0), Rational(-1)),
                     induced(amb.w(), Rational(-1), Rational(0)));
  return out;
}

// Structural fiber away from the origin: the levels in (-1, 0] with their
// nilpotent operators (the semisimple part of the monodromy acts on the
// alpha-component through the label itself).
struct FiberComponent {
  Rational alpha;
  int dim = 0;
  RationalMatrix nilp;

  bool operator==(const FiberComponent& o) const {
    return alpha == o.alpha && dim == o.dim && nilp == o.nilp;
  }
};

inline std::vector<FiberComponent> restrict_to_one(const CoreData& m) {
  require_valid_core(m);
  std::vector<FiberComponent> out;
  for (const auto& [alpha, comp] : m.components())
    if (alpha > Rational(-1)) out.push_back(FiberComponent{alpha, comp.dim, comp.nilp});
  return out;
}

}  // namespace monodromic
