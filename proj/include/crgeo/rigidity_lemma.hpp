#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <set>

#include "crgeo/bidegree_poly.hpp"

namespace crgeo {

/// Exact scalar for the optional integer mode: Gaussian rationals with
/// arbitrary-precision integer parts.
struct gaussian_rational {
  using rat = boost::multiprecision::cpp_rational;
  rat re{0}, im{0};

  bool is_zero() const { return re == 0 && im == 0; }

  gaussian_rational operator+(const gaussian_rational& o) const { return {re + o.re, im + o.im}; }
  gaussian_rational operator-(const gaussian_rational& o) const { return {re - o.re, im - o.im}; }
  gaussian_rational operator*(const gaussian_rational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  gaussian_rational operator/(const gaussian_rational& o) const {
    const rat d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }

  cplx to_cplx() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
};

enum class lemma_mode { floating, exact_if_integral, exact };

struct division_result {
  bool divisible = false;
  bidegree_poly quotient;  // meaningful when divisible
  double residual = 0.0;   // max coefficient of P - |z|^2 * quotient
  bool exact_path = false;
};

namespace detail {

inline bool coeff_is_gaussian_integer(cplx c, double tol = 1e-9) {
  return std::abs(c.real() - std::round(c.real())) <= tol &&
         std::abs(c.imag() - std::round(c.imag())) <= tol;
}

inline bool all_gaussian_integer(const bidegree_poly& P) {
  for (const auto& [ij, c] : P.terms)
    if (!coeff_is_gaussian_integer(c)) return false;
  return true;
}

// one graded block of the divisibility system: unknown quotient coefficients
// of bidegree (d1-1, d2-1) against target coefficients of bidegree (d1, d2)
struct graded_block {
  std::vector<std::pair<monomial, monomial>> unknowns;
  std::vector<std::pair<monomial, monomial>> equations;
  // entries(e) = list of unknown columns feeding equation e (all with weight 1)
  std::vector<std::vector<int>> entries;
  std::vector<cplx> rhs;
};

inline graded_block build_block(const bidegree_poly& P, int d1, int d2) {
  graded_block blk;
  const int n = P.nvars;
  std::vector<monomial> lhs_monos, rhs_monos;
  monomials_of_degree(n, d1 - 1, lhs_monos);
  monomials_of_degree(n, d2 - 1, rhs_monos);
  std::map<std::pair<monomial, monomial>, int> ucol;
  for (const auto& I : lhs_monos)
    for (const auto& J : rhs_monos) {
      ucol[{I, J}] = int(blk.unknowns.size());
      blk.unknowns.emplace_back(I, J);
    }

  // equation set: monomials of P in this class plus everything the unknowns
  // can reach (so spurious contributions are detected)
  std::set<std::pair<monomial, monomial>> eqset;
  for (const auto& [ij, c] : P.terms)
    if (degree(ij.first) == d1 && degree(ij.second) == d2) eqset.insert(ij);
  for (const auto& [I, J] : blk.unknowns)
    for (int i = 0; i < n; ++i) {
      monomial Ii = I, Ji = J;
      ++Ii[i];
      ++Ji[i];
      eqset.insert({Ii, Ji});
    }

  for (const auto& ij : eqset) {
    blk.equations.push_back(ij);
    std::vector<int> cols;
    for (int i = 0; i < n; ++i) {
      if (ij.first[i] < 1 || ij.second[i] < 1) continue;
      monomial I = ij.first, J = ij.second;
      --I[i];
      --J[i];
      if (auto it = ucol.find({I, J}); it != ucol.end()) cols.push_back(it->second);
    }
    blk.entries.push_back(std::move(cols));
    auto it = P.terms.find(ij);
    blk.rhs.push_back(it == P.terms.end() ? cplx(0.0) : it->second);
  }
  return blk;
}

// floating solve of one block: rank-revealing least squares on the 0/1 system
inline std::vector<cplx> solve_block_float(const graded_block& blk) {
  const int rows = int(blk.equations.size());
  const int cols = int(blk.unknowns.size());
  cmatrix M = cmatrix::Zero(rows, cols);
  cvector b(rows);
  for (int r = 0; r < rows; ++r) {
    for (int c : blk.entries[r]) M(r, c) += 1.0;
    b(r) = blk.rhs[r];
  }
  Eigen::CompleteOrthogonalDecomposition<cmatrix> cod(M);
  const cvector x = cod.solve(b);
  return {x.data(), x.data() + cols};
}

// exact solve: full-pivot elimination over Gaussian rationals; returns nullopt
// when the block is inconsistent
inline std::optional<std::vector<gaussian_rational>> solve_block_exact(const graded_block& blk) {
  const int rows = int(blk.equations.size());
  const int cols = int(blk.unknowns.size());
  std::vector<std::vector<gaussian_rational>> M(rows,
                                                std::vector<gaussian_rational>(cols + 1));
  using bigint = boost::multiprecision::cpp_int;
  for (int r = 0; r < rows; ++r) {
    for (int c : blk.entries[r]) M[r][c] = M[r][c] + gaussian_rational{1, 0};
    const cplx v = blk.rhs[r];
    M[r][cols] = {gaussian_rational::rat(bigint(llround(v.real()))),
                  gaussian_rational::rat(bigint(llround(v.imag())))};
  }
  std::vector<int> pivot_col_of_row(rows, -1);
  std::vector<bool> col_used(cols, false);
  int rank = 0;
  for (int step = 0; step < cols && rank < rows; ++step) {
    // full pivot search: any nonzero entry in the remaining block
    int pr = -1, pc = -1;
    for (int r = rank; r < rows && pr < 0; ++r)
      for (int c = 0; c < cols; ++c)
        if (!col_used[c] && !M[r][c].is_zero()) {
          pr = r;
          pc = c;
          break;
        }
    if (pr < 0) break;
    std::swap(M[rank], M[pr]);
    col_used[pc] = true;
    pivot_col_of_row[rank] = pc;
    const gaussian_rational piv = M[rank][pc];
    for (int c = 0; c <= cols; ++c) M[rank][c] = M[rank][c] / piv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || M[r][pc].is_zero()) continue;
      const gaussian_rational f = M[r][pc];
      for (int c = 0; c <= cols; ++c) M[r][c] = M[r][c] - f * M[rank][c];
    }
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (!M[r][cols].is_zero()) return std::nullopt;  // 0 = nonzero: inconsistent
  std::vector<gaussian_rational> x(cols);
  for (int r = 0; r < rank; ++r) x[pivot_col_of_row[r]] = M[r][cols];
  return x;
}

}  // namespace detail

/// Decides whether P(z, zbar) = |z|^2 A(z, zbar) has a polynomial solution A,
/// solving one exact graded linear system per bidegree class.  The floating
/// path uses rank-revealing least squares per block and checks the rebuilt
/// candidate; the exact path (available when all coefficients are Gaussian
/// integers) runs full-pivot elimination over Gaussian rationals.
inline division_result divide_by_norm(const bidegree_poly& P,
                                      lemma_mode mode = lemma_mode::floating,
                                      double tol = 1e-9) {
  for (const auto& [ij, c] : P.terms) {
    const int d = detail::degree(ij.first) + detail::degree(ij.second);
    if (d > 16 || detail::degree(ij.first) > 8 || detail::degree(ij.second) > 8)
      throw std::invalid_argument("divide_by_norm: bidegree beyond the (8,8) cap");
  }
  const bool want_exact = mode == lemma_mode::exact ||
                          (mode == lemma_mode::exact_if_integral && detail::all_gaussian_integer(P));
  if (mode == lemma_mode::exact && !detail::all_gaussian_integer(P))
    fail(errc::schema_error, "exact mode needs Gaussian-integer coefficients");

  division_result out;
  out.exact_path = want_exact;
  out.quotient.nvars = P.nvars;

  std::set<std::pair<int, int>> classes;
  for (const auto& [ij, c] : P.terms)
    classes.insert({detail::degree(ij.first), detail::degree(ij.second)});

  const double scale = std::max(1.0, P.max_coeff());
  for (const auto& [d1, d2] : classes) {
    if (d1 == 0 || d2 == 0) {
      // a pure-holomorphic or pure-antiholomorphic class cannot carry |z|^2
      out.divisible = false;
      out.quotient.terms.clear();
      double worst = 0.0;
      for (const auto& [ij, c] : P.terms)
        if (detail::degree(ij.first) == 0 || detail::degree(ij.second) == 0)
          worst = std::max(worst, std::abs(c));
      out.residual = worst;
      return out;
    }
    const auto blk = detail::build_block(P, d1, d2);
    if (want_exact) {
      const auto x = detail::solve_block_exact(blk);
      if (!x) {
        out.divisible = false;
        out.quotient.terms.clear();
        out.residual = 1.0;  // exact inconsistency
        return out;
      }
      for (size_t u = 0; u < blk.unknowns.size(); ++u)
        if (!(*x)[u].is_zero())
          out.quotient.add_term(blk.unknowns[u].first, blk.unknowns[u].second,
                                (*x)[u].to_cplx());
    } else {
      const auto x = detail::solve_block_float(blk);
      for (size_t u = 0; u < blk.unknowns.size(); ++u)
        if (std::abs(x[u]) > tol * scale)
          out.quotient.add_term(blk.unknowns[u].first, blk.unknowns[u].second, x[u]);
    }
  }

  const bidegree_poly rebuilt = multiply_by_norm(out.quotient);
  out.residual = (P - rebuilt).max_coeff();
  out.divisible = want_exact ? out.residual == 0.0 : out.residual <= tol * scale;
  if (!out.divisible) out.quotient.terms.clear();
  return out;
}

enum class lemma_outcome { zero_forced, sharpness_witness, not_divisible, inconsistent };

constexpr const char* lemma_outcome_name(lemma_outcome v) {
  switch (v) {
    case lemma_outcome::zero_forced: return "ZeroForced";
    case lemma_outcome::sharpness_witness: return "SharpnessWitness";
    case lemma_outcome::not_divisible: return "NotDivisible";
    case lemma_outcome::inconsistent: return "Inconsistent";
  }
  return "?";
}

struct lemma_report {
  lemma_outcome outcome = lemma_outcome::not_divisible;
  bidegree_poly witness;  // quotient A when divisible
  double residual = 0.0;
  bool exact_path = false;
};

/// Verdict for sum_j g_j conj(f_j) = |z|^2 A with families vanishing at 0:
/// when the family is shorter than the variable count (k <= n-1), a divisible
/// sum forces A = 0 (ZeroForced; a nonzero quotient there is flagged
/// Inconsistent as a bug signal); longer families returning nonzero quotients
/// are sharpness witnesses.
inline lemma_report lemma_verdict(const std::vector<holo_poly>& gs,
                                  const std::vector<holo_poly>& fs,
                                  lemma_mode mode = lemma_mode::floating, double tol = 1e-9) {
  for (const auto& fam : {gs, fs})
    for (const auto& p : fam)
      if (!p.vanishes_at_zero())
        fail(errc::schema_error, "family members must vanish at the origin");
  const bidegree_poly P = hermitian_sum(gs, fs);
  const int n = P.nvars;
  const int k = int(gs.size());

  lemma_report rep;
  const auto div = divide_by_norm(P, mode, tol);
  rep.residual = div.residual;
  rep.exact_path = div.exact_path;
  if (!div.divisible) {
    rep.outcome = lemma_outcome::not_divisible;
    return rep;
  }
  rep.witness = div.quotient;
  const double scale = std::max(1.0, P.max_coeff());
  const bool quotient_zero = div.quotient.max_coeff() <= tol * scale;
  if (quotient_zero) {
    rep.outcome = lemma_outcome::zero_forced;
    if (P.max_coeff() > tol * scale) rep.outcome = lemma_outcome::inconsistent;
    return rep;
  }
  rep.outcome = k >= n ? lemma_outcome::sharpness_witness : lemma_outcome::inconsistent;
  return rep;
}

/// Quadratic-coefficient reduction: from normal-space data G_{a bbar},
/// A^a_{ab}, B^a_{ab} build g_a(X) = sum A^a X X and h_a(X) = sum_b
/// conj(G_{a bbar}) B^b X X, and ask whether sum_a g_a conj(h_a) = |X|^2 T
/// forces T = 0.  Refused outside the window N - n <= n - 1.
/// Returns true when the quartic is forced to vanish identically.
inline bool tensor_lemma_check(const cmatrix& G, const std::vector<cmatrix>& A,
                               const std::vector<cmatrix>& B, int n, int N,
                               lemma_mode mode = lemma_mode::floating) {
  const int m = N - n;
  if (m < 0 || n < 1) fail(errc::dimension_window_violated, "need n >= 1 and N >= n");
  if (m > n - 1)
    fail(errc::dimension_window_violated,
         "window N - n <= n - 1 fails: N - n = " + std::to_string(m));
  if (m == 0) return true;  // no normal directions: nothing to force
  require_hermitian(G);
  if (int(G.rows()) != m || int(A.size()) != m || int(B.size()) != m)
    fail(errc::family_size_mismatch, "normal-space data sizes disagree");

  std::vector<holo_poly> gs, hs;
  for (int a = 0; a < m; ++a) {
    if (int(A[a].rows()) != n || int(A[a].cols()) != n || int(B[a].rows()) != n ||
        int(B[a].cols()) != n)
      fail(errc::family_size_mismatch, "coefficient arrays must be n x n");
    holo_poly ga, ha;
    ga.nvars = ha.nvars = n;
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        monomial mo(n, 0);
        ++mo[al];
        ++mo[be];
        if (std::abs(A[a](al, be)) != 0.0) {
          auto& slot = ga.terms[mo];
          slot += A[a](al, be);
          if (std::abs(slot) == 0.0) ga.terms.erase(mo);
        }
        cplx hc = 0.0;
        for (int b = 0; b < m; ++b) hc += std::conj(G(a, b)) * B[b](al, be);
        if (std::abs(hc) != 0.0) {
          auto& slot = ha.terms[mo];
          slot += hc;
          if (std::abs(slot) == 0.0) ha.terms.erase(mo);
        }
      }
    gs.push_back(std::move(ga));
    hs.push_back(std::move(ha));
  }
  const auto rep = lemma_verdict(gs, hs, mode);
  if (rep.outcome == lemma_outcome::inconsistent)
    fail(errc::internal_inconsistency, "short family with a nonzero quotient");
  return rep.outcome == lemma_outcome::zero_forced;
}

}  // namespace crgeo
