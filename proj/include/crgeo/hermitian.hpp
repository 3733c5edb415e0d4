#pragma once

#include <Eigen/Dense>

#include "crgeo/errors.hpp"
#include "crgeo/jets.hpp"

namespace crgeo {

using cmatrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;

inline constexpr int k_max_tensor_dim = 16;

inline double hermitian_defect(const cmatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_hermitian(const cmatrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) fail(errc::non_hermitian_input, "matrix is not square");
  if (m.rows() == 0) fail(errc::dimension_too_small, "matrix is empty");
  const double defect = hermitian_defect(m);
  if (defect > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
    fail(errc::non_hermitian_input, "Hermitian defect " + std::to_string(defect));
}

/// Positive definiteness via a pivoted Hermitian factorization; pivots must
/// clear the floor.
inline bool is_positive_definite(const cmatrix& m, double pivot_floor = 1e-12) {
  require_hermitian(m);
  Eigen::LDLT<cmatrix> ldlt(m);
  if (ldlt.info() != Eigen::Success) return false;
  const auto d = ldlt.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i].real() > pivot_floor)) return false;
  return true;
}

inline void require_metric(const cmatrix& g, double pivot_floor = 1e-12) {
  require_hermitian(g);
  if (!is_positive_definite(g, pivot_floor))
    fail(errc::singular_metric, "metric is not positive definite above the pivot floor");
}

/// Entries of the inverse metric in the index convention used throughout:
/// raising a barred/unbarred pair contracts against inverse_entries(g)(m, n),
/// chosen so that sum_n inv(m, n) g(k, n) = delta_{mk}.
inline cmatrix inverse_entries(const cmatrix& g) {
  require_metric(g);
  return g.inverse().transpose();
}

/// Levi gradient p_a = sum_b h_{a bbar} conj(z^b).
inline cvector levi_gradient(const cmatrix& h, const cvector& z) {
  require_hermitian(h);
  if (h.rows() != z.size()) fail(errc::family_size_mismatch, "h and z dimensions differ");
  return h * z.conjugate();
}

/// Hermitian length sum h_{a bbar} z^a conj(z^b); real for Hermitian h.
inline double hermitian_length(const cmatrix& h, const cvector& z) {
  const cplx v = (z.transpose() * h * z.conjugate()).value();
  return v.real();
}

}  // namespace crgeo
