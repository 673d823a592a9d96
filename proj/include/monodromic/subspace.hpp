#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monodromic/errors.hpp"
#include "monodromic/matrix.hpp"

namespace monodromic {

// Reduced column echelon form: Gaussian elimination on columns with pivot
// rows chosen topmost-first. Pivot entries are 1 and are the only nonzero
// entry of their row; pivot rows strictly increase left to right; zero
// columns end up on the right (shape is preserved). For a fixed column span
// this form is unique, so equal spans give bit-identical leading columns.
inline RationalMatrix reduced_column_echelon(const RationalMatrix& m) {
  RationalMatrix e = m;
  int cur = 0;
  for (int r = 0; r < e.rows() && cur < e.cols(); ++r) {
    int pivot = -1;
    for (int j = cur; j < e.cols(); ++j)
      if (e.at(r, j) != 0) {
        pivot = j;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != cur)
      for (int i = 0; i < e.rows(); ++i) std::swap(e.at(i, pivot), e.at(i, cur));
    Rational inv = Rational(1) / e.at(r, cur);
    if (inv != 1)
      for (int i = 0; i < e.rows(); ++i)
        if (e.at(i, cur) != 0) e.at(i, cur) *= inv;
    for (int j = 0; j < e.cols(); ++j) {
      if (j == cur) continue;
      Rational f = e.at(r, j);
      if (f == 0) continue;
      for (int i = 0; i < e.rows(); ++i) {
        const Rational& base = e.at(i, cur);
        if (base != 0) e.at(i, j) -= f * base;
      }
    }
    ++cur;
  }
  return e;
}

inline int echelon_rank(const RationalMatrix& e) {
  int rank = 0;
  for (int j = 0; j < e.cols(); ++j) {
    bool nonzero = false;
    for (int i = 0; i < e.rows(); ++i)
      if (e.at(i, j) != 0) {
        nonzero = true;
        break;
      }
    if (nonzero) ++rank;
  }
  return rank;
}

inline RationalMatrix drop_zero_columns(const RationalMatrix& e) {
  int rank = echelon_rank(e);
  RationalMatrix t(e.rows(), rank);
  int out = 0;
  for (int j = 0; j < e.cols(); ++j) {
    bool nonzero = false;
    for (int i = 0; i < e.rows(); ++i)
      if (e.at(i, j) != 0) {
        nonzero = true;
        break;
      }
    if (!nonzero) continue;
    for (int i = 0; i < e.rows(); ++i) t.at(i, out) = e.at(i, j);
    ++out;
  }
  return t;
}

inline int matrix_rank(const RationalMatrix& m) {
  return echelon_rank(reduced_column_echelon(m));
}

// A subspace of Q^ambient in canonical form: basis columns are the trimmed
// reduced column echelon form, so equality of subspaces is bit equality.
class Subspace {
 public:
  Subspace() : ambient_(0), basis_(0, 0) {}

  static Subspace zero(int ambient) { return Subspace(ambient, RationalMatrix(ambient, 0)); }

  static Subspace full(int ambient) {
    return Subspace(ambient, RationalMatrix::identity(ambient));
  }

  static Subspace span(const RationalMatrix& columns) {
    return Subspace(columns.rows(), drop_zero_columns(reduced_column_echelon(columns)));
  }

  int ambient() const { return ambient_; }
  int dim() const { return basis_.cols(); }
  const RationalMatrix& basis() const { return basis_; }

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  bool is_full() const { return dim() == ambient_; }
  bool is_zero() const { return dim() == 0; }

  // Pivot rows of the canonical basis, ascending.
  std::vector<int> pivot_rows() const {
    std::vector<int> p;
    for (int j = 0; j < basis_.cols(); ++j)
      for (int i = 0; i < basis_.rows(); ++i)
        if (basis_.at(i, j) != 0) {
          p.push_back(i);
          break;
        }
    return p;
  }

  // Standard basis vectors completing this subspace to the ambient space,
  // chosen deterministically as the non-pivot rows in ascending order.
  std::vector<int> completion_rows() const {
    std::vector<int> piv = pivot_rows(), comp;
    std::size_t k = 0;
    for (int i = 0; i < ambient_; ++i) {
      if (k < piv.size() && piv[k] == i) {
        ++k;
        continue;
      }
      comp.push_back(i);
    }
    return comp;
  }

 private:
  Subspace(int ambient, RationalMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  int ambient_;
  RationalMatrix basis_;
};

// Solve A X = B column by column via row reduction; nullopt when any column
// of B is outside the column span of A. Free variables are set to zero, so
// when A's columns are independent the solution is unique.
inline std::optional<RationalMatrix> solve_matrix(const RationalMatrix& a,
                                                  const RationalMatrix& b) {
  if (a.rows() != b.rows())
    throw AmbientMismatch("solve shape mismatch: " + a.shape() + " vs " + b.shape());
  RationalMatrix aug = a.hcat(b);
  int n = a.rows(), k = a.cols();
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int j = 0; j < k && row < n; ++j) {
    int piv = -1;
    for (int i = row; i < n; ++i)
      if (aug.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int c = 0; c < aug.cols(); ++c) std::swap(aug.at(piv, c), aug.at(row, c));
    Rational inv = Rational(1) / aug.at(row, j);
    if (inv != 1)
      for (int c = 0; c < aug.cols(); ++c) aug.at(row, c) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == row) continue;
      Rational f = aug.at(i, j);
      if (f == 0) continue;
      for (int c = 0; c < aug.cols(); ++c) aug.at(i, c) -= f * aug.at(row, c);
    }
    pivot_col_of_row.push_back(j);
    ++row;
  }
  // Consistency: rows below the pivot rows must be zero on the B side.
  for (int i = row; i < n; ++i)
    for (int c = k; c < aug.cols(); ++c)
      if (aug.at(i, c) != 0) return std::nullopt;
  RationalMatrix x(k, b.cols());
  for (int r = 0; r < row; ++r)
    for (int c = 0; c < b.cols(); ++c) x.at(pivot_col_of_row[static_cast<std::size_t>(r)], c) =
        aug.at(r, k + c);
  return x;
}

inline bool invertible(const RationalMatrix& m) {
  return m.is_square() && matrix_rank(m) == m.rows();
}

inline RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.is_square()) throw AmbientMismatch("inverse of non-square matrix");
  auto x = solve_matrix(m, RationalMatrix::identity(m.rows()));
  if (!x || matrix_rank(m) != m.rows()) throw NotPreserved("matrix is singular");
  return *x;
}

struct KernelImage {
  Subspace kernel;
  Subspace image;
};

// Kernel and image of a linear map, both canonical. Column-reduce with the
// identity stacked underneath: columns whose top part vanishes record kernel
// combinations in the bottom part.
inline KernelImage kernel_image(const RationalMatrix& m) {
  RationalMatrix stack(m.rows() + m.cols(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) stack.at(i, j) = m.at(i, j);
  for (int j = 0; j < m.cols(); ++j) stack.at(m.rows() + j, j) = 1;
  // Eliminate using pivots in the top (map) rows only.
  int cur = 0;
  for (int r = 0; r < m.rows() && cur < stack.cols(); ++r) {
    int pivot = -1;
    for (int j = cur; j < stack.cols(); ++j)
      if (stack.at(r, j) != 0) {
        pivot = j;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != cur)
      for (int i = 0; i < stack.rows(); ++i) std::swap(stack.at(i, pivot), stack.at(i, cur));
    Rational inv = Rational(1) / stack.at(r, cur);
    if (inv != 1)
      for (int i = 0; i < stack.rows(); ++i)
        if (stack.at(i, cur) != 0) stack.at(i, cur) *= inv;
    for (int j = 0; j < stack.cols(); ++j) {
      if (j == cur) continue;
      Rational f = stack.at(r, j);
      if (f == 0) continue;
      for (int i = 0; i < stack.rows(); ++i) {
        const Rational& base = stack.at(i, cur);
        if (base != 0) stack.at(i, j) -= f * base;
      }
    }
    ++cur;
  }
  RationalMatrix kernel_cols(m.cols(), 0);
  for (int j = cur; j < stack.cols(); ++j) {
    RationalMatrix v(m.cols(), 1);
    for (int i = 0; i < m.cols(); ++i) v.at(i, 0) = stack.at(m.rows() + i, j);
    kernel_cols = kernel_cols.hcat(v);
  }
  return KernelImage{Subspace::span(kernel_cols), Subspace::span(m)};
}

inline Subspace lattice_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient())
    throw AmbientMismatch("subspace sum: ambients " + std::to_string(a.ambient()) + " vs " +
                          std::to_string(b.ambient()));
  return Subspace::span(a.basis().hcat(b.basis()));
}

inline Subspace lattice_intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient())
    throw AmbientMismatch("subspace intersect: ambients " + std::to_string(a.ambient()) +
                          " vs " + std::to_string(b.ambient()));
  // Kernel of [A | B]: pairs (x, y) with A x = -B y; intersection is A x.
  RationalMatrix joint = a.basis().hcat(b.basis());
  Subspace ker = kernel_image(joint).kernel;
  RationalMatrix gens(a.ambient(), ker.dim());
  for (int j = 0; j < ker.dim(); ++j) {
    RationalMatrix x(a.dim(), 1);
    for (int i = 0; i < a.dim(); ++i) x.at(i, 0) = ker.basis().at(i, j);
    RationalMatrix v = a.basis() * x;
    for (int i = 0; i < a.ambient(); ++i) gens.at(i, j) = v.at(i, 0);
  }
  return Subspace::span(gens);
}

inline bool lattice_contains(const Subspace& big, const Subspace& small) {
  if (big.ambient() != small.ambient())
    throw AmbientMismatch("subspace containment: ambients " + std::to_string(big.ambient()) +
                          " vs " + std::to_string(small.ambient()));
  return solve_matrix(big.basis(), small.basis()).has_value();
}

// Image of a subspace under a map, as a canonical subspace of the target.
inline Subspace apply_map(const RationalMatrix& f, const Subspace& s) {
  if (f.cols() != s.ambient())
    throw AmbientMismatch("apply_map: map expects ambient " + std::to_string(f.cols()) +
                          ", subspace has " + std::to_string(s.ambient()));
  return Subspace::span(f * s.basis());
}

// Preimage f^{-1}(S) of a subspace under a map.
inline Subspace preimage(const RationalMatrix& f, const Subspace& s) {
  if (f.rows() != s.ambient())
    throw AmbientMismatch("preimage: map lands in ambient " + std::to_string(f.rows()) +
                          ", subspace has " + std::to_string(s.ambient()));
  // x with f x in S  <=>  (x, y) in ker [f | -S].
  RationalMatrix joint = f.hcat(Rational(-1) * s.basis());
  Subspace ker = kernel_image(joint).kernel;
  RationalMatrix gens(f.cols(), ker.dim());
  for (int j = 0; j < ker.dim(); ++j)
    for (int i = 0; i < f.cols(); ++i) gens.at(i, j) = ker.basis().at(i, j);
  return Subspace::span(gens);
}

enum class InduceMode { Restrict, Descend };

// Matrix of the map induced by f on restrictions (src_sub -> tgt_sub, in the
// canonical bases) or on quotients (ambient/src_sub -> ambient/tgt_sub, in
// the deterministic pivot-completion bases). Throws NotPreserved when f does
// not carry src_sub into tgt_sub.
inline RationalMatrix induce(const RationalMatrix& f, const Subspace& src_sub,
                             const Subspace& tgt_sub, InduceMode mode) {
  if (f.cols() != src_sub.ambient() || f.rows() != tgt_sub.ambient())
    throw AmbientMismatch("induce: map " + f.shape() + " vs ambients " +
                          std::to_string(src_sub.ambient()) + ", " +
                          std::to_string(tgt_sub.ambient()));
  if (mode == InduceMode::Restrict) {
    auto x = solve_matrix(tgt_sub.basis(), f * src_sub.basis());
    if (!x) throw NotPreserved("map does not carry the subspace into the target subspace");
    return *x;
  }
  // Descend: check preservation, then express images of the source completion
  // vectors in target-quotient coordinates.
  if (!lattice_contains(tgt_sub, apply_map(f, src_sub)))
    throw NotPreserved("map does not carry the subspace into the target subspace");
  std::vector<int> src_comp = src_sub.completion_rows();
  std::vector<int> tgt_comp = tgt_sub.completion_rows();
  // Change of basis in the target: [basis | completion] is invertible.
  RationalMatrix tgt_cb = tgt_sub.basis();
  RationalMatrix comp_mat(tgt_sub.ambient(), static_cast<int>(tgt_comp.size()));
  for (int j = 0; j < comp_mat.cols(); ++j)
    comp_mat.at(tgt_comp[static_cast<std::size_t>(j)], j) = 1;
  RationalMatrix full_cb = tgt_cb.hcat(comp_mat);
  RationalMatrix src_vecs(src_sub.ambient(), static_cast<int>(src_comp.size()));
  for (int j = 0; j < src_vecs.cols(); ++j)
    src_vecs.at(src_comp[static_cast<std::size_t>(j)], j) = 1;
  auto coords = solve_matrix(full_cb, f * src_vecs);
  if (!coords) throw NotPreserved("induce: completion coordinates unavailable");
  RationalMatrix out(static_cast<int>(tgt_comp.size()), static_cast<int>(src_comp.size()));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out.at(i, j) = coords->at(tgt_sub.dim() + i, j);
  return out;
}

// Coordinates of ambient vectors in the quotient by `sub` (pivot-completion
// basis): the matrix of the projection ambient -> ambient/sub.
inline RationalMatrix quotient_projection(const Subspace& sub) {
  std::vector<int> comp = sub.completion_rows();
  RationalMatrix comp_mat(sub.ambient(), static_cast<int>(comp.size()));
  for (int j = 0; j < comp_mat.cols(); ++j) comp_mat.at(comp[static_cast<std::size_t>(j)], j) = 1;
  RationalMatrix full_cb = sub.basis().hcat(comp_mat);
  RationalMatrix inv = inverse(full_cb);
  RationalMatrix proj(static_cast<int>(comp.size()), sub.ambient());
  for (int i = 0; i < proj.rows(); ++i)
    for (int j = 0; j < sub.ambient(); ++j) proj.at(i, j) = inv.at(sub.dim() + i, j);
  return proj;
}

// Smallest l with m^l = 0, or nullopt when m is not nilpotent.
inline std::optional<int> nilpotency_index(const RationalMatrix& m) {
  if (!m.is_square()) throw AmbientMismatch("nilpotency_index of non-square matrix");
  RationalMatrix p = RationalMatrix::identity(m.rows());
  for (int l = 0; l <= m.rows(); ++l) {
    if (p.is_zero()) return l;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace monodromic
