#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monodromic/eigen.hpp"
#include "monodromic/errors.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/rational.hpp"
#include "monodromic/subspace.hpp"

namespace monodromic {

struct CoreComponent {
  int dim = 0;
  RationalMatrix nilp;  // dim x dim

  bool operator==(const CoreComponent& o) const { return dim == o.dim && nilp == o.nilp; }
};

// A finite-dimensional module concentrated at rational levels in [-1, 0]:
// per level a space with a nilpotent operator, plus connecting maps
//   u : level 0 -> level -1,   w : level -1 -> level 0
// satisfying w u = nilp(0) and u w = nilp(-1).
class CoreData {
 public:
  CoreData() : u_(0, 0), w_(0, 0) {}

  void set_component(const Rational& alpha, const RationalMatrix& nilp) {
    if (alpha < Rational(-1) || alpha > Rational(0))
      throw InvalidCore("level " + rational_to_string(alpha) + " outside [-1, 0]");
    if (!nilp.is_square())
      throw InvalidCore("operator at level " + rational_to_string(alpha) + " is not square");
    if (nilp.rows() == 0) {
      comps_.erase(alpha);
      return;
    }
    comps_[alpha] = CoreComponent{nilp.rows(), nilp};
  }

  void set_connectors(const RationalMatrix& u, const RationalMatrix& w) {
    u_ = u;
    w_ = w;
  }

  const std::map<Rational, CoreComponent>& components() const { return comps_; }

  int dim(const Rational& alpha) const {
    auto it = comps_.find(alpha);
    return it == comps_.end() ? 0 : it->second.dim;
  }

  RationalMatrix nilp(const Rational& alpha) const {
    auto it = comps_.find(alpha);
    if (it == comps_.end()) {
      int d = dim(alpha);
      return RationalMatrix::zero(d, d);
    }
    return it->second.nilp;
  }

  const RationalMatrix& u() const { return u_; }
  const RationalMatrix& w() const { return w_; }

  int total_dim() const {
    int t = 0;
    for (const auto& [a, c] : comps_) t += c.dim;
    return t;
  }

  bool operator==(const CoreData& o) const {
    return comps_ == o.comps_ && u_ == o.u_ && w_ == o.w_;
  }
  bool operator!=(const CoreData& o) const { return !(*this == o); }

 private:
  std::map<Rational, CoreComponent> comps_;
  RationalMatrix u_;
  RationalMatrix w_;
};

inline Diagnostics validate_core(const CoreData& m) {
  Diagnostics diag;
  int d0 = m.dim(Rational(0));
  int dm1 = m.dim(Rational(-1));
  if (m.u().rows() != dm1 || m.u().cols() != d0)
    diag.fail("u has shape " + m.u().shape() + ", expected " + std::to_string(dm1) + "x" +
              std::to_string(d0));
  if (m.w().rows() != d0 || m.w().cols() != dm1)
    diag.fail("w has shape " + m.w().shape() + ", expected " + std::to_string(d0) + "x" +
              std::to_string(dm1));
  for (const auto& [alpha, comp] : m.components()) {
    if (!nilpotency_index(comp.nilp))
      diag.fail("operator at level " + rational_to_string(alpha) + " is not nilpotent");
  }
  if (diag.ok()) {
    if (m.w() * m.u() != m.nilp(Rational(0)))
      diag.fail("w∘u differs from the nilpotent operator at level 0");
    if (m.u() * m.w() != m.nilp(Rational(-1)))
      diag.fail("u∘w differs from the nilpotent operator at level -1");
  }
  return diag;
}

inline void require_valid_core(const CoreData& m) {
  Diagnostics diag = validate_core(m);
  if (!diag.ok()) throw InvalidCore(diag.joined());
}

// The canonical finite window of levels in [-1-K, K]: every stored level is
// translated by integers across the range, with multiplication and
// differentiation maps between adjacent levels.
struct Window {
  Rational lo, hi;  // inclusive level bounds
  std::vector<Rational> levels;  // ascending, possibly with zero-dim integer levels
  std::map<Rational, int> dims;
  std::map<Rational, RationalMatrix> nilps;
  std::map<Rational, RationalMatrix> t;  // t[b] : level b -> level b+1
  std::map<Rational, RationalMatrix> d;  // d[b] : level b -> level b-1

  bool has(const Rational& b) const { return dims.count(b) > 0; }
  int dim(const Rational& b) const {
    auto it = dims.find(b);
    return it == dims.end() ? 0 : it->second;
  }
  RationalMatrix nilp(const Rational& b) const {
    auto it = nilps.find(b);
    if (it == nilps.end()) return RationalMatrix(0, 0);
    return it->second;
  }
  // theta at a level: nilpotent part plus the level value itself.
  RationalMatrix theta(const Rational& b) const { return nilp(b).plus_scalar(b); }

  int total_dim() const {
    int t_ = 0;
    for (const Rational& b : levels) t_ += dim(b);
    return t_;
  }

  int offset(const Rational& b) const {
    int off = 0;
    for (const Rational& lvl : levels) {
      if (lvl == b) return off;
      off += dim(lvl);
    }
    throw AmbientMismatch("level " + rational_to_string(b) + " not in window");
  }

  // Block-diagonal theta on the direct sum of all window levels (ascending).
  RationalMatrix total_theta() const {
    std::vector<RationalMatrix> blocks;
    for (const Rational& b : levels) blocks.push_back(theta(b));
    return block_diag(blocks);
  }

  // Endomorphism of the total space shifting each level up by one; the top
  // level of each chain maps to zero (truncated window).
  RationalMatrix total_t() const {
    int n = total_dim();
    RationalMatrix m(n, n);
    for (const auto& [b, f] : t) {
      if (!has(b + 1)) continue;
      int src = offset(b), dst = offset(b + 1);
      for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j) m.at(dst + i, src + j) = f.at(i, j);
    }
    return m;
  }

  RationalMatrix total_d() const {
    int n = total_dim();
    RationalMatrix m(n, n);
    for (const auto& [b, f] : d) {
      if (!has(b - 1)) continue;
      int src = offset(b), dst = offset(b - 1);
      for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j) m.at(dst + i, src + j) = f.at(i, j);
    }
    return m;
  }
};

// Expand a core module to the window [-1-K, K]. Requires K >= 1 so that the
// window contains the whole defining range together with both junction maps.
inline Window expand_window(const CoreData& m, const Rational& k) {
  if (k < Rational(1))
    throw WindowTooSmall("window parameter " + rational_to_string(k) + " is below 1");
  require_valid_core(m);
  Window win;
  win.lo = Rational(-1) - k;
  win.hi = k;

  // Classes: non-integer stored levels, plus one integer class if level 0 or
  // level -1 is present.
  bool integer_class = m.dim(Rational(0)) > 0 || m.dim(Rational(-1)) > 0;
  std::vector<Rational> middle;
  for (const auto& [alpha, comp] : m.components())
    if (!is_integer(alpha)) middle.push_back(alpha);

  for (const Rational& alpha : middle) {
    long long kmin = to_long(rational_ceil(win.lo - alpha));
    long long kmax = to_long(rational_floor(win.hi - alpha));
    for (long long step = kmin; step <= kmax; ++step) {
      Rational b = alpha + Rational(step);
      win.dims[b] = m.dim(alpha);
      win.nilps[b] = m.nilp(alpha);
    }
  }
  if (integer_class) {
    long long lmin = to_long(rational_ceil(win.lo));
    long long lmax = to_long(rational_floor(win.hi));
    for (long long l = lmin; l <= lmax; ++l) {
      Rational b(l);
      if (l >= 0) {
        win.dims[b] = m.dim(Rational(0));
        win.nilps[b] = m.nilp(Rational(0));
      } else {
        win.dims[b] = m.dim(Rational(-1));
        win.nilps[b] = m.nilp(Rational(-1));
      }
    }
  }
  for (const auto& [b, dim] : win.dims) win.levels.push_back(b);

  // Multiplication maps t[b] : b -> b+1. The junction at the integer level
  // -1 is w; above -1 multiplication is the identity on each chain, below it
  // is invertible and equals theta of the target level.
  for (const Rational& b : win.levels) {
    if (!win.has(b + 1)) continue;
    if (b == Rational(-1))
      win.t[b] = m.w();
    else if (b > Rational(-1))
      win.t[b] = RationalMatrix::identity(win.dim(b));
    else
      win.t[b] = win.theta(b + 1);
  }
  // Differentiation maps d[b] : b -> b-1. The junction at the integer level
  // 0 is u; above 0 differentiation is invertible and equals theta of the
  // source level, below it is the identity on each chain.
  for (const Rational& b : win.levels) {
    if (!win.has(b - 1)) continue;
    if (b == Rational(0))
      win.d[b] = m.u();
    else if (b > Rational(0))
      win.d[b] = win.theta(b);
    else
      win.d[b] = RationalMatrix::identity(win.dim(b));
  }
  return win;
}

// The structural axioms of a window: operators nilpotent after removing the
// level scalar, multiplication maps invertible except at level -1 and
// differentiation maps invertible except at level 0, maps present exactly
// where a neighbouring level exists, and the commutator identity
// d(b+1)∘t(b) - t(b-1)∘d(b) = id at every interior level.
inline Diagnostics validate_window(const Window& win) {
  Diagnostics diag;
  for (const Rational& b : win.levels) {
    std::string label = "level " + rational_to_string(b);
    RationalMatrix n = win.nilp(b);
    if (n.rows() != win.dim(b) || n.cols() != win.dim(b)) {
      diag.fail(label + ": operator shape does not match the space");
      continue;
    }
    if (!nilpotency_index(n)) diag.fail(label + ": operator is not nilpotent");
    bool need_t = win.has(b + 1), need_d = win.has(b - 1);
    if (need_t != (win.t.count(b) > 0))
      diag.fail(label + (need_t ? ": missing multiplication map"
                                : ": multiplication map without a target level"));
    if (need_d != (win.d.count(b) > 0))
      diag.fail(label + (need_d ? ": missing differentiation map"
                                : ": differentiation map without a target level"));
  }
  if (!diag.ok()) return diag;
  for (const auto& [b, f] : win.t) {
    std::string label = "multiplication at level " + rational_to_string(b);
    if (f.rows() != win.dim(b + 1) || f.cols() != win.dim(b))
      diag.fail(label + ": shape " + f.shape() + " does not match the levels");
    else if (b != Rational(-1) && !invertible(f))
      diag.fail(label + ": not invertible away from level -1");
  }
  for (const auto& [b, f] : win.d) {
    std::string label = "differentiation at level " + rational_to_string(b);
    if (f.rows() != win.dim(b - 1) || f.cols() != win.dim(b))
      diag.fail(label + ": shape " + f.shape() + " does not match the levels");
    else if (b != Rational(0) && !invertible(f))
      diag.fail(label + ": not invertible away from level 0");
  }
  if (!diag.ok()) return diag;
  for (const Rational& b : win.levels) {
    if (!win.has(b + 1) || !win.has(b - 1)) continue;
    RationalMatrix lhs = win.d.at(b + 1) * win.t.at(b) - win.t.at(b - 1) * win.d.at(b);
    if (lhs != RationalMatrix::identity(win.dim(b)))
      diag.fail("commutator identity fails at level " + rational_to_string(b));
  }
  return diag;
}

// Read the defining data back off a window: the levels in [-1, 0] with their
// operators, u as the differentiation map at 0 and w as the multiplication
// map at -1.
inline CoreData extract_core(const Window& win) {
  CoreData m;
  for (const Rational& b : win.levels)
    if (b >= Rational(-1) && b <= Rational(0)) m.set_component(b, win.nilp(b));
  int d0 = m.dim(Rational(0)), dm1 = m.dim(Rational(-1));
  RationalMatrix u = win.d.count(Rational(0)) ? win.d.at(Rational(0)) : RationalMatrix(dm1, d0);
  RationalMatrix w = win.t.count(Rational(-1)) ? win.t.at(Rational(-1)) : RationalMatrix(d0, dm1);
  m.set_connectors(u, w);
  return m;
}

// The decreasing filtration by window levels: V(g) = sum of levels >= g,
// as subspaces of the total window space. Returned at every grid level.
inline std::map<Rational, Subspace> v_filtration(const Window& win) {
  std::map<Rational, Subspace> v;
  int n = win.total_dim();
  for (const Rational& g : win.levels) {
    RationalMatrix gens(n, 0);
    for (const Rational& b : win.levels) {
      if (b < g) continue;
      int off = win.offset(b), dim = win.dim(b);
      RationalMatrix cols(n, dim);
      for (int j = 0; j < dim; ++j) cols.at(off + j, j) = 1;
      gens = gens.hcat(cols);
    }
    v[g] = Subspace::span(gens);
  }
  return v;
}

// Independent recomputation of the level filtration: decompose the total
// theta operator into its generalized eigenspaces and sum those with
// eigenvalue >= gamma. The defining axioms are verified on the result:
// theta preserves each step with theta - gamma nilpotent on the graded
// piece, multiplication raises the level and differentiation lowers it.
inline std::map<Rational, Subspace> v_filtration_oracle(const Window& win) {
  int n = win.total_dim();
  std::map<Rational, Subspace> eig;
  if (n > 0) eig = eigen_decompose(win.total_theta());
  std::map<Rational, Subspace> v;
  for (const Rational& g : win.levels) {
    Subspace s = Subspace::zero(n);
    for (const auto& [lam, e] : eig)
      if (lam >= g) s = lattice_sum(s, e);
    v[g] = s;
  }
  // Value at any threshold: the step at the smallest grid level >= it
  // (everything below the grid, nothing above it).
  auto value = [&](const Rational& g) -> Subspace {
    auto it = v.lower_bound(g);
    return it == v.end() ? Subspace::zero(n) : it->second;
  };
  RationalMatrix t = win.total_t(), d = win.total_d(), th = win.total_theta();
  for (const Rational& g : win.levels) {
    const Subspace& s = v.at(g);
    if (!lattice_contains(s, apply_map(th, s)))
      throw Error("level filtration oracle: theta does not preserve the step at " +
                  rational_to_string(g));
    if (!lattice_contains(value(g + 1), apply_map(t, s)))
      throw Error("level filtration oracle: multiplication does not raise the level at " +
                  rational_to_string(g));
    if (!lattice_contains(value(g - 1), apply_map(d, s)))
      throw Error("level filtration oracle: differentiation does not lower the level at " +
                  rational_to_string(g));
    auto above = v.upper_bound(g);
    Subspace next = (above == v.end()) ? Subspace::zero(n) : above->second;
    RationalMatrix on_step = induce(th.plus_scalar(-g), s, s, InduceMode::Restrict);
    auto next_in = solve_matrix(s.basis(), next.basis());
    if (!next_in) throw Error("level filtration oracle: steps are not nested");
    RationalMatrix graded = induce(on_step, Subspace::span(*next_in), Subspace::span(*next_in),
                                   InduceMode::Descend);
    if (!nilpotency_index(graded))
      throw Error("level filtration oracle: theta - " + rational_to_string(g) +
                  " is not nilpotent on the graded piece");
  }
  return v;
}

// Nearby and vanishing cycle data read off a core module.
struct Cycles {
  std::map<Rational, CoreComponent> psi;  // levels in (-1, 0]
  CoreComponent phi;                      // level -1
  RationalMatrix can;                     // psi_0 -> phi
  RationalMatrix var;                     // phi -> psi_0
};

inline Cycles cycles_of(const CoreData& m) {
  require_valid_core(m);
  Cycles c;
  for (const auto& [alpha, comp] : m.components())
    if (alpha > Rational(-1)) c.psi[alpha] = comp;
  c.phi = CoreComponent{m.dim(Rational(-1)), m.nilp(Rational(-1))};
  c.can = Rational(-1) * m.u();
  c.var = m.w();
  return c;
}

// Duality: level a pairs with level -1-a in the open interval, while the
// boundary levels 0 and -1 pair with themselves; connectors transpose with
// one sign.
inline CoreData dual_core(const CoreData& m) {
  require_valid_core(m);
  CoreData d;
  for (const auto& [alpha, comp] : m.components()) {
    if (alpha == Rational(0) || alpha == Rational(-1)) continue;
    d.set_component(Rational(-1) - alpha, comp.nilp.transpose());
  }
  if (m.dim(Rational(0)) > 0) d.set_component(Rational(0), Rational(-1) * m.nilp(Rational(0)).transpose());
  if (m.dim(Rational(-1)) > 0)
    d.set_component(Rational(-1), Rational(-1) * m.nilp(Rational(-1)).transpose());
  d.set_connectors(m.w().transpose(), Rational(-1) * m.u().transpose());
  return d;
}

// Fourier transform on the core level: levels 0 and -1 swap (with negated
// operators), the open levels reflect a |-> -1-a, and the connectors swap
// with one sign.
inline CoreData fourier_core(const CoreData& m) {
  require_valid_core(m);
  CoreData f;
  for (const auto& [alpha, comp] : m.components()) {
    if (alpha == Rational(0) || alpha == Rational(-1)) continue;
    f.set_component(Rational(-1) - alpha, comp.nilp);
  }
  if (m.dim(Rational(-1)) > 0)
    f.set_component(Rational(0), Rational(-1) * m.nilp(Rational(-1)));
  if (m.dim(Rational(0)) > 0)
    f.set_component(Rational(-1), Rational(-1) * m.nilp(Rational(0)));
  f.set_connectors(m.w(), Rational(-1) * m.u());
  return f;
}

// Brute-force dual computed on the expanded window rather than on the core:
// every non-integer level b moves to -1-b carrying the transposed operator,
// the integer levels stay on their own side of the junction, the junction
// maps are the transposes of the original junction maps (with one sign on
// the multiplication side), and the integer-level operators are the products
// of those transposed junctions. Chain maps away from the junction follow
// the same gauge as expansion.
inline Window dual_window_oracle(const CoreData& m, const Rational& k) {
  Window win = expand_window(m, k);
  Window out;
  out.lo = win.lo;  // the grid [-1-K, K] reflects onto itself
  out.hi = win.hi;
  bool integer_class = false;
  for (const Rational& b : win.levels) {
    if (is_integer(b)) {
      out.dims[b] = win.dim(b);
      integer_class = true;
    } else {
      out.dims[Rational(-1) - b] = win.dim(b);
      out.nilps[Rational(-1) - b] = win.nilp(b).transpose();
    }
  }
  if (integer_class) {
    RationalMatrix tj = Rational(-1) * win.d.at(Rational(0)).transpose();
    RationalMatrix dj = win.t.at(Rational(-1)).transpose();
    RationalMatrix n0 = tj * dj, nm1 = dj * tj;
    for (const auto& [b, dim] : out.dims)
      if (is_integer(b)) out.nilps[b] = b >= Rational(0) ? n0 : nm1;
    out.t[Rational(-1)] = tj;
    out.d[Rational(0)] = dj;
  }
  for (const auto& [b, dim] : out.dims) out.levels.push_back(b);
  for (const Rational& b : out.levels) {
    if (out.has(b + 1) && out.t.count(b) == 0)
      out.t[b] = b > Rational(-1) ? RationalMatrix::identity(out.dim(b)) : out.theta(b + 1);
    if (out.has(b - 1) && out.d.count(b) == 0)
      out.d[b] = b > Rational(0) ? out.theta(b) : RationalMatrix::identity(out.dim(b));
  }
  return out;
}

}  // namespace monodromic
