#pragma once

#include <functional>
#include <span>

#include "crgeo/curvature_tensor.hpp"
#include "crgeo/finite_difference.hpp"

namespace crgeo {

/// Model Kahler manifold of constant holomorphic sectional curvature:
/// flat C^N (kappa = 0), a projective chart (kappa = +1) or the unit
/// hyperbolic ball (kappa = -1, domain |z| < 1).
struct space_form_chart {
  int dim = 1;
  int kappa = 0;
};

inline void check_chart(const space_form_chart& c) {
  if (c.dim < 1 || c.dim > k_max_tensor_dim)
    fail(errc::schema_error, "chart dimension must lie in 1.." +
                                 std::to_string(k_max_tensor_dim));
  if (c.kappa < -1 || c.kappa > 1) fail(errc::schema_error, "kappa must be -1, 0 or 1");
}

inline void require_in_domain(const space_form_chart& c, const cvector& z) {
  check_chart(c);
  if (int(z.size()) != c.dim) fail(errc::schema_error, "point dimension mismatch");
  if (c.kappa == -1 && z.squaredNorm() >= 1.0)
    fail(errc::out_of_domain, "hyperbolic chart needs |z| < 1");
}

/// Metric h_{i jbar} = delta_{ij}/u - kappa zbar_i z_j / u^2 with
/// u = 1 + kappa |z|^2; the i slot carries the conjugate so the matrix is
/// d_i d_jbar of the potential kappa^{-1} log u.
inline cmatrix space_form_metric(const space_form_chart& c, const cvector& z) {
  require_in_domain(c, z);
  const double k = double(c.kappa);
  const double u = 1.0 + k * z.squaredNorm();
  cmatrix h = cmatrix::Identity(c.dim, c.dim) / u;
  if (c.kappa != 0) h -= (k / (u * u)) * (z.conjugate() * z.transpose());
  return h;
}

/// Holomorphic first derivatives: [k](i, j) = d_k h_{i jbar}.
inline std::vector<cmatrix> space_form_metric_d1(const space_form_chart& c, const cvector& z) {
  require_in_domain(c, z);
  const int n = c.dim;
  const double k = double(c.kappa);
  const double u = 1.0 + k * z.squaredNorm();
  const double u2 = u * u, u3 = u2 * u;
  std::vector<cmatrix> d(n);
  const cmatrix outer = z.conjugate() * z.transpose();
  for (int m = 0; m < n; ++m) {
    const cplx zbm = std::conj(z(m));
    cmatrix dm = -(k * zbm / u2) * cmatrix::Identity(n, n);
    dm.col(m) -= (k / u2) * z.conjugate();
    dm += (2.0 * k * k * zbm / u3) * outer;
    d[m] = std::move(dm);
  }
  return d;
}

/// Mixed second derivatives: [k][l](i, j) = d_k d_lbar h_{i jbar}.
inline std::vector<std::vector<cmatrix>> space_form_metric_d2(const space_form_chart& c,
                                                              const cvector& z) {
  require_in_domain(c, z);
  const int n = c.dim;
  const double k = double(c.kappa);
  const double u = 1.0 + k * z.squaredNorm();
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  const cmatrix id = cmatrix::Identity(n, n);
  const cmatrix outer = z.conjugate() * z.transpose();
  std::vector<std::vector<cmatrix>> d(n, std::vector<cmatrix>(n));
  for (int kk = 0; kk < n; ++kk)
    for (int l = 0; l < n; ++l) {
      const cplx zbk = std::conj(z(kk));
      const cplx zl = z(l);
      cmatrix m = cmatrix::Zero(n, n);
      if (kk == l) m -= (k / u2) * id;
      m(l, kk) -= k / u2;
      m += (2.0 * k * k * zbk * zl / u3) * id;
      m.col(kk) += (2.0 * k * k * zl / u3) * z.conjugate();
      m.row(l) += (2.0 * k * k * zbk / u3) * z.transpose();
      if (kk == l) m += (2.0 * k * k / u3) * outer;
      m -= (6.0 * k * k * k * zbk * zl / u4) * outer;
      d[kk][l] = std::move(m);
    }
  return d;
}

/// Closed-form curvature R_{i jbar k lbar} = kappa (h_{i jbar} h_{k lbar} +
/// h_{k jbar} h_{i lbar}).
inline curvature4 space_form_curvature(const space_form_chart& c, const cvector& z) {
  const cmatrix h = space_form_metric(c, z);
  const double k = double(c.kappa);
  curvature4 R(c.dim);
  for (int i = 0; i < c.dim; ++i)
    for (int j = 0; j < c.dim; ++j)
      for (int kk = 0; kk < c.dim; ++kk)
        for (int l = 0; l < c.dim; ++l)
          R.at(i, j, kk, l) = k * (h(i, j) * h(kk, l) + h(kk, j) * h(i, l));
  return R;
}

/// A Hermitian metric as a function of the chart point, optionally carrying
/// analytic derivative callbacks; without them derivatives fall back to the
/// Wirtinger finite-difference stencils below.
struct metric_field {
  int dim = 1;
  std::function<cmatrix(const cvector&)> value;
  std::function<std::vector<cmatrix>(const cvector&)> d1;
  std::function<std::vector<std::vector<cmatrix>>(const cvector&)> d2;
};

inline metric_field space_form_field(const space_form_chart& c) {
  check_chart(c);
  metric_field f;
  f.dim = c.dim;
  f.value = [c](const cvector& z) { return space_form_metric(c, z); };
  f.d1 = [c](const cvector& z) { return space_form_metric_d1(c, z); };
  f.d2 = [c](const cvector& z) { return space_form_metric_d2(c, z); };
  return f;
}

/// Wraps a plain pointwise metric table; curvature then uses numeric
/// derivatives only.
inline metric_field pointwise_field(int dim, std::function<cmatrix(const cvector&)> value) {
  metric_field f;
  f.dim = dim;
  f.value = std::move(value);
  return f;
}

/// Strips the analytic callbacks so the finite-difference route can be
/// cross-checked against them.
inline metric_field without_analytic_derivatives(metric_field f) {
  f.d1 = nullptr;
  f.d2 = nullptr;
  return f;
}

struct field_fd_settings {
  double step = 0.01;
  int richardson_levels = 2;
};

namespace detail {

// nested multivariate central differences; each op is (variable index,
// conjugate?) and applies one Wirtinger derivative at uniform real step s
template <class F>
cmatrix matrix_wirtinger_stencil(const F& f, const cvector& z,
                                 std::span<const std::pair<int, bool>> ops, double s) {
  if (ops.empty()) return f(z);
  const auto [k, conj_var] = ops.front();
  const auto rest = ops.subspan(1);
  const cplx i(0.0, 1.0);
  auto shifted = [&](cplx delta) {
    cvector v = z;
    v(k) += delta;
    return matrix_wirtinger_stencil(f, v, rest, s);
  };
  const cmatrix dx = shifted(s) - shifted(-s);
  const cmatrix dy = shifted(i * s) - shifted(-i * s);
  if (conj_var) return (dx + i * dy) / (4.0 * s);
  return (dx - i * dy) / (4.0 * s);
}

template <class F>
cmatrix matrix_wirtinger_partial(const F& f, const cvector& z,
                                 std::initializer_list<std::pair<int, bool>> ops,
                                 const field_fd_settings& fd) {
  const std::vector<std::pair<int, bool>> v(ops);
  auto estimate = [&](double s) {
    return cmatrix(matrix_wirtinger_stencil(f, z, std::span(v), s));
  };
  return richardson(estimate, fd.step, fd.richardson_levels);
}

}  // namespace detail

inline std::vector<cmatrix> metric_d1(const metric_field& g, const cvector& z,
                                      const field_fd_settings& fd = {}) {
  if (g.d1) return g.d1(z);
  std::vector<cmatrix> d(g.dim);
  for (int k = 0; k < g.dim; ++k)
    d[k] = detail::matrix_wirtinger_partial(g.value, z, {{k, false}}, fd);
  return d;
}

inline std::vector<std::vector<cmatrix>> metric_d2(const metric_field& g, const cvector& z,
                                                   const field_fd_settings& fd = {}) {
  if (g.d2) return g.d2(z);
  std::vector<std::vector<cmatrix>> d(g.dim, std::vector<cmatrix>(g.dim));
  for (int k = 0; k < g.dim; ++k)
    for (int l = 0; l < g.dim; ++l)
      d[k][l] = detail::matrix_wirtinger_partial(g.value, z, {{k, false}, {l, true}}, fd);
  return d;
}

/// Kahler curvature from metric derivatives:
/// R_{i jbar k lbar} = -d_k d_lbar g_{i jbar}
///                     + g^{p qbar} (d_k g_{i qbar}) (d_lbar g_{p jbar}).
inline curvature4 curvature_from_derivatives(const cmatrix& g, const std::vector<cmatrix>& d1,
                                             const std::vector<std::vector<cmatrix>>& d2) {
  require_metric(g);
  const int n = int(g.rows());
  const cmatrix ginv = g.inverse();
  curvature4 R(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const cmatrix slab = -d2[k][l] + d1[k] * ginv * d1[l].adjoint();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R.at(i, j, k, l) = slab(i, j);
    }
  return R;
}

inline curvature4 kaehler_curvature(const metric_field& g, const cvector& z,
                                    const field_fd_settings& fd = {}) {
  if (int(z.size()) != g.dim) fail(errc::schema_error, "point dimension mismatch");
  return curvature_from_derivatives(g.value(z), metric_d1(g, z, fd), metric_d2(g, z, fd));
}

}  // namespace crgeo
