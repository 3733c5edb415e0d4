#pragma once

#include <map>
#include <vector>

#include "crgeo/hermitian.hpp"

namespace crgeo {

using monomial = std::vector<int>;  // exponent vector, one slot per variable

namespace detail {

inline int degree(const monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

// all exponent vectors over nvars slots with the given total degree, in
// lexicographic order
inline void monomials_of_degree(int nvars, int deg, std::vector<monomial>& out) {
  monomial cur(nvars, 0);
  // iterative multi-loop: place deg units into nvars slots
  auto rec = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == nvars - 1) {
      cur[slot] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[slot] = e;
      self(self, slot + 1, remaining - e);
    }
  };
  if (nvars >= 1) rec(rec, 0, deg);
}

inline cplx eval_monomial(const monomial& m, const cvector& z) {
  cplx r = 1.0;
  for (size_t i = 0; i < m.size(); ++i)
    for (int e = 0; e < m[i]; ++e) r *= z(Eigen::Index(i));
  return r;
}

}  // namespace detail

/// Holomorphic polynomial in n variables, sparse exponent map.
struct holo_poly {
  int nvars = 0;
  std::map<monomial, cplx> terms;

  static holo_poly variable(int nvars, int which) {
    holo_poly p;
    p.nvars = nvars;
    monomial m(nvars, 0);
    m[which] = 1;
    p.terms[m] = 1.0;
    return p;
  }

  static holo_poly mono(int nvars, monomial m, cplx c) {
    holo_poly p;
    p.nvars = nvars;
    if (std::abs(c) != 0.0) p.terms[std::move(m)] = c;
    return p;
  }

  cplx eval(const cvector& z) const {
    cplx acc = 0.0;
    for (const auto& [m, c] : terms) acc += c * detail::eval_monomial(m, z);
    return acc;
  }

  bool vanishes_at_zero() const {
    const monomial zero(nvars, 0);
    auto it = terms.find(zero);
    return it == terms.end() || std::abs(it->second) == 0.0;
  }

  holo_poly derivative(int var) const {
    holo_poly d;
    d.nvars = nvars;
    for (const auto& [m, c] : terms)
      if (m[var] >= 1) {
        monomial shifted = m;
        --shifted[var];
        d.terms[shifted] = c * double(m[var]);
      }
    return d;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, detail::degree(m));
    return d;
  }
};

/// Polynomial in (z, zbar): sparse map over pairs of exponent vectors.
struct bidegree_poly {
  int nvars = 0;
  std::map<std::pair<monomial, monomial>, cplx> terms;

  void add_term(const monomial& I, const monomial& J, cplx c) {
    auto& slot = terms[{I, J}];
    slot += c;
    if (std::abs(slot) == 0.0) terms.erase({I, J});
  }

  cplx eval(const cvector& z) const {
    cplx acc = 0.0;
    for (const auto& [ij, c] : terms)
      acc += c * detail::eval_monomial(ij.first, z) *
             std::conj(detail::eval_monomial(ij.second, z));
    return acc;
  }

  double max_coeff() const {
    double m = 0.0;
    for (const auto& [ij, c] : terms) m = std::max(m, std::abs(c));
    return m;
  }

  bidegree_poly pruned(double tol) const {
    bidegree_poly out;
    out.nvars = nvars;
    for (const auto& [ij, c] : terms)
      if (std::abs(c) > tol) out.terms[ij] = c;
    return out;
  }

  bidegree_poly operator-(const bidegree_poly& o) const {
    bidegree_poly out = *this;
    for (const auto& [ij, c] : o.terms) out.add_term(ij.first, ij.second, -c);
    return out;
  }
};

/// sum_j g_j(z) conj(f_j(z)) as a polynomial in (z, zbar); exact coefficient
/// arithmetic on the sparse maps.
inline bidegree_poly hermitian_sum(const std::vector<holo_poly>& gs,
                                   const std::vector<holo_poly>& fs) {
  if (gs.size() != fs.size())
    fail(errc::family_size_mismatch, "family sizes " + std::to_string(gs.size()) + " vs " +
                                         std::to_string(fs.size()));
  if (gs.empty()) fail(errc::family_size_mismatch, "empty family");
  const int n = gs.front().nvars;
  bidegree_poly out;
  out.nvars = n;
  for (size_t j = 0; j < gs.size(); ++j) {
    if (gs[j].nvars != n || fs[j].nvars != n)
      fail(errc::family_size_mismatch, "family members disagree on the variable count");
    for (const auto& [I, cg] : gs[j].terms)
      for (const auto& [J, cf] : fs[j].terms) out.add_term(I, J, cg * std::conj(cf));
  }
  return out;
}

/// |z|^2 * A, used to rebuild candidates from quotients.
inline bidegree_poly multiply_by_norm(const bidegree_poly& A) {
  bidegree_poly out;
  out.nvars = A.nvars;
  for (const auto& [ij, c] : A.terms)
    for (int i = 0; i < A.nvars; ++i) {
      monomial I = ij.first, J = ij.second;
      ++I[i];
      ++J[i];
      out.add_term(I, J, c);
    }
  return out;
}

}  // namespace crgeo
