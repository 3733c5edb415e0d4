#pragma once

#include <array>
#include <optional>

#include "crgeo/hermitian.hpp"

namespace crgeo {

/// Dense tensor T_{a bbar m nbar} with four indices in 0..n-1; the second and
/// fourth slots are the barred ones.  Curvature-type tensors built here carry
///   Hermitian symmetry: T_{a bbar m nbar} = conj(T_{b abar n mbar})
///   pair symmetry:      T_{a bbar m nbar} = T_{m bbar a nbar} = T_{a nbar m bbar}
class curvature4 {
 public:
  explicit curvature4(int n) : n_(n), c_(size_t(n) * n * n * n, cplx(0.0)) {
    if (n < 1 || n > k_max_tensor_dim)
      throw std::invalid_argument("curvature4: dimension must lie in 1..16");
  }

  int dim() const { return n_; }

  cplx& at(int a, int b, int m, int v) {
    return c_[((size_t(a) * n_ + b) * n_ + m) * n_ + v];
  }
  const cplx& at(int a, int b, int m, int v) const {
    return c_[((size_t(a) * n_ + b) * n_ + m) * n_ + v];
  }

  double max_norm() const {
    double r = 0.0;
    for (const auto& x : c_) r = std::max(r, std::abs(x));
    return r;
  }

  double hermitian_defect() const {
    double r = 0.0;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int m = 0; m < n_; ++m)
          for (int v = 0; v < n_; ++v)
            r = std::max(r, std::abs(at(a, b, m, v) - std::conj(at(b, a, v, m))));
    return r;
  }

  double pair_symmetry_defect() const {
    double r = 0.0;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int m = 0; m < n_; ++m)
          for (int v = 0; v < n_; ++v) {
            r = std::max(r, std::abs(at(a, b, m, v) - at(m, b, a, v)));
            r = std::max(r, std::abs(at(a, b, m, v) - at(a, v, m, b)));
          }
    return r;
  }

  curvature4& operator-=(const curvature4& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }

  curvature4& operator+=(const curvature4& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }

 private:
  int n_;
  std::vector<cplx> c_;
};

inline curvature4 operator-(curvature4 a, const curvature4& b) { return a -= b; }

/// Levi metric of the circular model: g_{a bbar} = h_{a bbar} + Q p_a conj(p_b).
/// Q must be real up to 1e-10; the result must come out positive definite.
inline cmatrix levi_metric(const cmatrix& h, cplx Q, const cvector& p) {
  require_hermitian(h);
  if (std::abs(Q.imag()) > 1e-10 * std::max(1.0, std::abs(Q)))
    fail(errc::reality_violation, "Q has imaginary part " + std::to_string(Q.imag()));
  if (p.size() != h.rows()) fail(errc::family_size_mismatch, "p and h dimensions differ");
  cmatrix g = h + Q.real() * (p * p.adjoint());
  require_metric(g);
  return g;
}

/// Curvature of the circular model from the two scalar invariants:
/// R_{a bbar m nbar} = -A (g_{a bbar} g_{m nbar} + g_{m bbar} g_{a nbar})
///                     - B p_a conj(p_b) p_m conj(p_n).
inline curvature4 pseudo_hermitian_curvature(double A, double B, const cmatrix& g,
                                             const cvector& p) {
  require_hermitian(g);
  const int n = int(g.rows());
  if (p.size() != n) fail(errc::family_size_mismatch, "p and g dimensions differ");
  curvature4 R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v)
          R.at(a, b, m, v) = -A * (g(a, b) * g(m, v) + g(m, b) * g(a, v)) -
                             B * p(a) * std::conj(p(b)) * p(m) * std::conj(p(v));
  return R;
}

struct ricci_data {
  cmatrix ricci;
  double scalar = 0.0;
};

/// First-pair trace Ric_{m nbar} = g^{a bbar} R_{a bbar m nbar} and its trace.
inline ricci_data ricci_and_scalar(const curvature4& R, const cmatrix& g) {
  const int n = R.dim();
  if (g.rows() != n) fail(errc::family_size_mismatch, "tensor and metric dimensions differ");
  const cmatrix inv = inverse_entries(g);
  ricci_data out;
  out.ricci = cmatrix::Zero(n, n);
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v) {
      cplx acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += inv(a, b) * R.at(a, b, m, v);
      out.ricci(m, v) = acc;
    }
  cplx s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += inv(a, b) * out.ricci(a, b);
  if (std::abs(s.imag()) > 1e-8 * std::max(1.0, std::abs(s)))
    fail(errc::internal_inconsistency, "scalar curvature has imaginary part");
  out.scalar = s.real();
  return out;
}

/// Trace-free part with respect to g:
/// S = R - [Ric_{a bbar} g_{m nbar} + Ric_{m bbar} g_{a nbar} + Ric_{a nbar} g_{m bbar}
///          + Ric_{m nbar} g_{a bbar}]/(n+2)
///       + scal [g_{a bbar} g_{m nbar} + g_{a nbar} g_{m bbar}]/((n+1)(n+2)).
/// For tensors with the pair symmetries every single trace of S vanishes and
/// the projection is idempotent.
inline curvature4 traceless_projection(const curvature4& R, const cmatrix& g) {
  const int n = R.dim();
  if (n < 2) fail(errc::dimension_too_small, "traceless projection needs n >= 2");
  const auto rd = ricci_and_scalar(R, g);
  const double c1 = 1.0 / double(n + 2);
  const double c2 = rd.scalar / double((n + 1) * (n + 2));
  curvature4 S = R;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v)
          S.at(a, b, m, v) += -c1 * (rd.ricci(a, b) * g(m, v) + rd.ricci(m, b) * g(a, v) +
                                     rd.ricci(a, v) * g(m, b) + rd.ricci(m, v) * g(a, b)) +
                              c2 * (g(a, b) * g(m, v) + g(a, v) * g(m, b));
  return S;
}

/// Same trace correction on the Kaehler side.
inline curvature4 bochner_tensor(const curvature4& R, const cmatrix& g) {
  return traceless_projection(R, g);
}

/// Largest single-trace magnitude of T: contracts the inverse metric against
/// each barred/unbarred index pair in turn.
inline double max_trace_norm(const curvature4& T, const cmatrix& g) {
  const int n = T.dim();
  const cmatrix inv = inverse_entries(g);
  double worst = 0.0;
  for (int m = 0; m < n; ++m)
    for (int v = 0; v < n; ++v) {
      cplx t12 = 0.0, t14 = 0.0, t32 = 0.0, t34 = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          t12 += inv(a, b) * T.at(a, b, m, v);
          t14 += inv(a, b) * T.at(a, v, m, b);
          t32 += inv(a, b) * T.at(m, b, a, v);
          t34 += inv(a, b) * T.at(m, v, a, b);
        }
      for (cplx t : {t12, t14, t32, t34}) worst = std::max(worst, std::abs(t));
    }
  return worst;
}

struct flat_decomposition {
  bool flat = false;
  double residual = 0.0;   // max-norm of T minus the best metric-multiple form
  double tolerance = 0.0;  // tol scaled by the metric conditioning
  // witnesses (only meaningful when flat): T ~ H1 g + H2 g + H3 g + H4 g over
  // the four slot patterns
  std::array<cmatrix, 4> witness;
};

/// Least-squares test for the metric-multiple ("flat") form
///   T_{a bbar m nbar} = H1_{a bbar} g_{m nbar} + H2_{m bbar} g_{a nbar}
///                     + H3_{a nbar} g_{m bbar} + H4_{m nbar} g_{a bbar}.
/// The witness system is solved over the 4 n^2 unknown entries with a
/// rank-revealing orthogonal decomposition (the slot patterns overlap, so the
/// normal equations are rank deficient by gauge moves like H1 += c g,
/// H4 -= c g).  For tensors with the curvature symmetries this is equivalent
/// to the vanishing of the trace-free part.
inline flat_decomposition conformal_flat_test(const curvature4& T, const cmatrix& g,
                                              double tol = 1e-8) {
  const int n = T.dim();
  if (g.rows() != n) fail(errc::family_size_mismatch, "tensor and metric dimensions differ");
  require_metric(g);

  const int unknowns = 4 * n * n;
  const int rows = n * n * n * n;
  cmatrix L = cmatrix::Zero(rows, unknowns);
  cvector rhs(rows);
  auto unknown_index = [n](int which, int r, int c) { return which * n * n + r * n + c; };
  int row = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v, ++row) {
          L(row, unknown_index(0, a, b)) += g(m, v);
          L(row, unknown_index(1, m, b)) += g(a, v);
          L(row, unknown_index(2, a, v)) += g(m, b);
          L(row, unknown_index(3, m, v)) += g(a, b);
          rhs(row) = T.at(a, b, m, v);
        }

  Eigen::CompleteOrthogonalDecomposition<cmatrix> cod(L);
  const cvector x = cod.solve(rhs);
  const double residual = (L * x - rhs).cwiseAbs().maxCoeff();

  // scale the tolerance by the conditioning of g and the size of T
  Eigen::JacobiSVD<cmatrix> svd(g);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  flat_decomposition out;
  out.residual = residual;
  out.tolerance = tol * cond * cond * std::max(1.0, T.max_norm());
  out.flat = residual <= out.tolerance;
  if (out.flat) {
    for (int which = 0; which < 4; ++which) {
      out.witness[which] = cmatrix(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out.witness[which](r, c) = x(unknown_index(which, r, c));
    }
  }
  return out;
}

struct quartic_identity_values {
  double contraction = 0.0;  // quadruple sum over p otimes pbar otimes p otimes pbar
  double modulus_form = 0.0; // |sum h_{b' bbar} z^{b'} conj(X^b)|^4
};

/// Two routes to the quartic length along the Levi gradient:
/// sum p_a conj(p_b) p_m conj(p_n) X^a conj(X^b) X^m conj(X^n) computed as a
/// full quadruple contraction, against the closed modulus form.
inline quartic_identity_values quartic_identity_check(const cmatrix& h, const cvector& z,
                                                      const cvector& X) {
  require_hermitian(h);
  const int n = int(h.rows());
  if (z.size() != n || X.size() != n)
    fail(errc::family_size_mismatch, "h, z, X dimensions differ");
  const cvector p = levi_gradient(h, z);
  quartic_identity_values out;
  cplx acc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v)
          acc += p(a) * std::conj(p(b)) * p(m) * std::conj(p(v)) * X(a) * std::conj(X(b)) *
                 X(m) * std::conj(X(v));
  out.contraction = acc.real();
  cplx t = 0.0;
  for (int bp = 0; bp < n; ++bp)
    for (int b = 0; b < n; ++b) t += h(bp, b) * z(bp) * std::conj(X(b));
  out.modulus_form = std::norm(t) * std::norm(t);
  return out;
}

}  // namespace crgeo
