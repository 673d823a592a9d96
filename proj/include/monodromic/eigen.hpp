#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "monodromic/errors.hpp"
#include "monodromic/matrix.hpp"
#include "monodromic/rational.hpp"
#include "monodromic/subspace.hpp"

namespace monodromic {

namespace detail {

// p(x) * (x - c), coefficients ascending.
inline std::vector<Rational> poly_mul_linear(const std::vector<Rational>& p, const Rational& c) {
  std::vector<Rational> out(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i];
    out[i] -= c * p[i];
  }
  return out;
}

inline void poly_axpy(std::vector<Rational>& target, const Rational& coeff,
                      const std::vector<Rational>& p) {
  if (target.size() < p.size()) target.resize(p.size(), Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) target[i] += coeff * p[i];
}

inline Rational poly_eval(const std::vector<Rational>& p, const Rational& x) {
  Rational acc(0);
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

// Exact synthetic division by (x - r); requires r to be a root.
inline std::vector<Rational> poly_deflate(const std::vector<Rational>& p, const Rational& r) {
  std::vector<Rational> q(p.size() - 1, Rational(0));
  Rational carry(0);
  for (std::size_t i = p.size(); i-- > 1;) {
    carry = p[i] + carry * r;
    q[i - 1] = carry;
  }
  return q;
}

// Homogenized evaluation b^deg * f(a/b) of an integer polynomial, so root
// tests stay in integer arithmetic.
inline Integer eval_homogeneous(const std::vector<Integer>& f, const Integer& a,
                                const Integer& b) {
  Integer acc = f.back(), bp = 1;
  for (std::size_t i = f.size() - 1; i-- > 0;) {
    bp *= b;
    acc = acc * a + f[i] * bp;
  }
  return acc;
}

// Exact division of a primitive integer polynomial by (b x - a) for a known
// root a/b in lowest terms; the quotient is again integral and primitive.
inline std::vector<Integer> deflate_integer(const std::vector<Integer>& f, const Integer& a,
                                            const Integer& b) {
  std::vector<Integer> g(f.size() - 1);
  g.back() = f.back() / b;
  for (std::size_t j = f.size() - 2; j >= 1; --j) g[j - 1] = (f[j] + a * g[j]) / b;
  return g;
}

// Integer polynomial utilities for the square-free reduction in the root
// search; coefficients ascending, nonzero leading coefficient.
inline void strip_polynomial(std::vector<Integer>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

inline std::vector<Integer> primitive_part(std::vector<Integer> v) {
  strip_polynomial(v);
  Integer content = 0;
  for (const Integer& c : v) content = boost::multiprecision::gcd(content, c);
  if (content > 1)
    for (Integer& c : v) c /= content;
  if (!v.empty() && v.back() < 0)
    for (Integer& c : v) c = -c;
  return v;
}

// Pseudo-remainder: scale by the divisor's leading coefficient before each
// cancellation so the reduction stays inside the integers.
inline std::vector<Integer> pseudo_remainder(std::vector<Integer> a,
                                             const std::vector<Integer>& b) {
  const Integer& lb = b.back();
  while (a.size() >= b.size() && !a.empty()) {
    Integer top = a.back();
    for (Integer& c : a) c *= lb;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= top * b[i];
    a.pop_back();
    strip_polynomial(a);
  }
  return a;
}

// Primitive pseudo-remainder sequence; the content strip after each step
// keeps coefficient growth polynomial.
inline std::vector<Integer> poly_gcd(std::vector<Integer> a, std::vector<Integer> b) {
  a = primitive_part(std::move(a));
  b = primitive_part(std::move(b));
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    std::vector<Integer> r = primitive_part(pseudo_remainder(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Exact quotient of primitive integer polynomials known to divide evenly
// (integrality of the result is Gauss's lemma).
inline std::vector<Integer> poly_quotient(const std::vector<Integer>& f,
                                          const std::vector<Integer>& g) {
  std::vector<Rational> rem(f.begin(), f.end());
  std::vector<Rational> q(f.size() - g.size() + 1, Rational(0));
  Rational lg{g.back()};
  for (std::size_t k = q.size(); k-- > 0;) {
    Rational c = rem[k + g.size() - 1] / lg;
    q[k] = c;
    if (c != 0)
      for (std::size_t i = 0; i < g.size(); ++i) rem[k + i] -= c * Rational(g[i]);
  }
  std::vector<Integer> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = num(q[i]);
  return out;
}

inline std::vector<Integer> all_divisors(Integer v) {
  if (v < 0) v = -v;
  std::map<Integer, int> factors;
  Integer d = 2;
  const Integer bound = 1000000;
  while (d <= bound && d * d <= v) {
    while (v % d == 0) {
      ++factors[d];
      v /= d;
    }
    ++d;
  }
  if (v > 1) ++factors[v];  // residual cofactor, treated as prime
  std::vector<Integer> divs{Integer(1)};
  for (const auto& [prime, mult] : factors) {
    std::vector<Integer> next;
    Integer pk = 1;
    for (int e = 0; e <= mult; ++e) {
      for (const Integer& existing : divs) next.push_back(existing * pk);
      pk *= prime;
    }
    divs = std::move(next);
    if (divs.size() > 200000)
      throw IrrationalEigenvalue("spectrum candidate set too large to enumerate");
  }
  return divs;
}

}  // namespace detail

// Coefficients (ascending) of det(x I - A), computed exactly via a
// similarity reduction to Hessenberg form followed by the leading-minor
// recurrence.
inline std::vector<Rational> char_poly(const RationalMatrix& a) {
  if (!a.is_square()) throw AmbientMismatch("char_poly of non-square matrix");
  int n = a.rows();
  if (n == 0) return {Rational(1)};
  RationalMatrix h = a;
  for (int j = 0; j + 2 < n; ++j) {
    if (h.at(j + 1, j) == 0) {
      for (int i = j + 2; i < n; ++i)
        if (h.at(i, j) != 0) {
          for (int c = 0; c < n; ++c) std::swap(h.at(j + 1, c), h.at(i, c));
          for (int r = 0; r < n; ++r) std::swap(h.at(r, j + 1), h.at(r, i));
          break;
        }
    }
    if (h.at(j + 1, j) == 0) continue;
    for (int i = j + 2; i < n; ++i) {
      if (h.at(i, j) == 0) continue;
      Rational f = h.at(i, j) / h.at(j + 1, j);
      for (int c = 0; c < n; ++c) h.at(i, c) -= f * h.at(j + 1, c);
      for (int r = 0; r < n; ++r) h.at(r, j + 1) += f * h.at(r, i);
    }
  }
  std::vector<std::vector<Rational>> p(static_cast<std::size_t>(n) + 1);
  p[0] = {Rational(1)};
  for (int k = 1; k <= n; ++k) {
    std::vector<Rational> pk = detail::poly_mul_linear(p[static_cast<std::size_t>(k - 1)],
                                                       h.at(k - 1, k - 1));
    Rational run(1);
    for (int j = k - 1; j >= 1; --j) {
      run *= h.at(j, j - 1);
      if (run == 0) break;
      Rational coeff = -h.at(j - 1, k - 1) * run;
      if (coeff != 0) detail::poly_axpy(pk, coeff, p[static_cast<std::size_t>(j - 1)]);
    }
    p[static_cast<std::size_t>(k)] = std::move(pk);
  }
  return p[static_cast<std::size_t>(n)];
}

// All rational roots with multiplicities, plus the degree of the unfactored
// remainder (zero when the polynomial splits over Q).
inline std::pair<std::map<Rational, int>, int> rational_roots(std::vector<Rational> p) {
  std::map<Rational, int> roots;
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.empty()) throw Error("rational_roots of the zero polynomial");
  std::size_t low = 0;
  while (low < p.size() && p[low] == 0) ++low;
  if (low > 0) {
    roots[Rational(0)] = static_cast<int>(low);
    p.erase(p.begin(), p.begin() + static_cast<long>(low));
  }
  if (p.size() <= 1) return {roots, 0};

  // Primitive integer coefficients: same roots, all-integer arithmetic.
  Integer lcm_den = 1;
  for (const Rational& c : p) {
    Integer d = den(c);
    lcm_den = lcm_den / boost::multiprecision::gcd(lcm_den, d) * d;
  }
  std::vector<Integer> f(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) f[i] = num(p[i] * Rational(lcm_den));
  Integer content = 0;
  for (const Integer& c : f) content = boost::multiprecision::gcd(content, c);
  if (content > 1)
    for (Integer& c : f) c /= content;

  Integer at_one = 0, at_minus_one = 0;
  auto refresh_probe_values = [&] {
    at_one = 0;
    at_minus_one = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      at_one += f[i];
      at_minus_one += (i % 2 == 0) ? f[i] : -f[i];
    }
  };
  refresh_probe_values();

  std::vector<Integer> ps = detail::all_divisors(f.front());
  std::vector<Integer> qs = detail::all_divisors(f.back());
  for (const Integer& qq : qs) {
    for (const Integer& pp : ps) {
      if (boost::multiprecision::gcd(pp, qq) != 1) continue;
      for (int sign = 0; sign < 2; ++sign) {
        if (f.size() <= 1) return {roots, 0};
        Integer a = sign ? Integer(-pp) : pp;
        // A root a/q forces (a - q) | f(1) and (a + q) | f(-1); one integer
        // remainder each rejects nearly every non-root candidate.
        Integer d1 = a - qq;
        if (at_one != 0 && d1 != 0 && at_one % d1 != 0) continue;
        Integer d2 = a + qq;
        if (at_minus_one != 0 && d2 != 0 && at_minus_one % d2 != 0) continue;
        int mult = 0;
        while (f.size() > 1 && detail::eval_homogeneous(f, a, qq) == 0) {
          f = detail::deflate_integer(f, a, qq);
          ++mult;
        }
        if (mult > 0) {
          roots[Rational(a, qq)] = mult;
          refresh_probe_values();
        }
      }
    }
  }
  return {roots, static_cast<int>(f.size()) - 1};
}

// Generalized eigenspace decomposition of a square matrix whose spectrum is
// rational; the eigenspaces are direct summands spanning the whole space.
inline std::map<Rational, Subspace> eigen_decompose(const RationalMatrix& a) {
  if (!a.is_square()) throw AmbientMismatch("eigen_decompose of non-square matrix");
  std::map<Rational, Subspace> out;
  if (a.rows() == 0) return out;
  auto [roots, leftover] = rational_roots(char_poly(a));
  if (leftover > 0)
    throw IrrationalEigenvalue("operator spectrum is not rational (degree " +
                               std::to_string(leftover) + " factor remains)");
  int total = 0;
  for (const auto& [lambda, mult] : roots) {
    // Saturate ker (a - lambda)^j by iterated preimage: the kernel chain is
    // strictly increasing until it stabilizes at the generalized eigenspace,
    // and its dimension never exceeds the algebraic multiplicity.
    RationalMatrix shifted = a.plus_scalar(-lambda);
    Subspace e = kernel_image(shifted).kernel;
    while (e.dim() < mult) {
      Subspace lifted = preimage(shifted, e);
      if (lifted.dim() == e.dim()) break;
      e = lifted;
    }
    if (e.dim() != mult)
      throw IrrationalEigenvalue("generalized eigenspace dimension mismatch at eigenvalue " +
                                 rational_to_string(lambda));
    out[lambda] = e;
    total += mult;
  }
  if (total != a.rows()) throw IrrationalEigenvalue("spectrum does not fill the space");
  return out;
}

// Jordan chain basis of a nilpotent operator: each returned matrix holds one
// chain as columns c_0, ..., c_{e-1} with n c_j = c_{j-1} and n c_0 = 0.
// The chains' columns together form a basis of the whole space.
inline std::vector<RationalMatrix> jordan_chain_basis(const RationalMatrix& n) {
  auto nil = nilpotency_index(n);
  if (!nil) throw NotNilpotent("jordan chains need a nilpotent operator");
  int dim = n.rows(), nu = *nil;
  std::vector<Subspace> ker;
  ker.push_back(Subspace::zero(dim));
  RationalMatrix p = RationalMatrix::identity(dim);
  for (int e = 1; e <= nu; ++e) {
    p = p * n;
    ker.push_back(kernel_image(p).kernel);
  }
  std::vector<RationalMatrix> chains;
  // Chains of length e start at vectors of Ker n^e that are independent of
  // Ker n^{e-1} and of what longer chains already push down into this stage.
  Subspace down = Subspace::zero(dim);
  for (int e = nu; e >= 1; --e) {
    Subspace cur = lattice_sum(ker[static_cast<std::size_t>(e - 1)], down);
    RationalMatrix tops(dim, 0);
    const RationalMatrix& cand = ker[static_cast<std::size_t>(e)].basis();
    for (int j = 0; j < cand.cols(); ++j) {
      RationalMatrix c = cand.col(j);
      if (lattice_contains(cur, Subspace::span(c))) continue;
      tops = tops.hcat(c);
      cur = lattice_sum(cur, Subspace::span(c));
      RationalMatrix chain(dim, e);
      RationalMatrix v = c;
      for (int h = e - 1; h >= 0; --h) {
        for (int i = 0; i < dim; ++i) chain.at(i, h) = v.at(i, 0);
        v = n * v;
      }
      chains.push_back(chain);
    }
    down = apply_map(n, lattice_sum(down, Subspace::span(tops)));
  }
  int count = 0;
  for (const auto& c : chains) count += c.cols();
  if (count != dim) throw Error("jordan chain extraction did not fill the space");
  return chains;
}

// An explicit invertible S with S n S^{-1} = -n, built by flipping the sign
// of every other vector along each Jordan chain.
inline RationalMatrix sign_conjugation_witness(const RationalMatrix& n) {
  std::vector<RationalMatrix> chains = jordan_chain_basis(n);
  int dim = n.rows();
  RationalMatrix p(dim, dim);
  RationalMatrix d(dim, dim);
  int col = 0;
  for (const auto& chain : chains) {
    for (int j = 0; j < chain.cols(); ++j, ++col) {
      for (int i = 0; i < dim; ++i) p.at(i, col) = chain.at(i, j);
      d.at(col, col) = (j % 2 == 0) ? 1 : -1;
    }
  }
  RationalMatrix pinv = inverse(p);
  return p * d * pinv;
}

}  // namespace monodromic
