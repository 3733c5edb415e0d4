#pragma once

#include "crgeo/bidegree_poly.hpp"
#include "crgeo/defining_function.hpp"
#include "crgeo/space_form.hpp"

namespace crgeo {

inline constexpr double k_immersion_floor = 1e-10;

/// Holomorphic polynomial map from C^n to C^N with cached derivative tables.
struct holo_map {
  int n = 1, N = 1;
  std::vector<holo_poly> comp;                          // size N
  std::vector<std::vector<holo_poly>> jac;              // [i][a] = d_a f^i
  std::vector<std::vector<std::vector<holo_poly>>> hess;  // [i][a][g] = d_a d_g f^i

  static holo_map from_components(std::vector<holo_poly> comps) {
    if (comps.empty()) fail(errc::family_size_mismatch, "map needs at least one component");
    holo_map f;
    f.N = int(comps.size());
    f.n = comps.front().nvars;
    if (f.n < 1) fail(errc::schema_error, "map components need at least one variable");
    for (const auto& p : comps)
      if (p.nvars != f.n)
        fail(errc::family_size_mismatch, "map components disagree on variable count");
    f.comp = std::move(comps);
    f.jac.resize(f.N);
    f.hess.resize(f.N);
    for (int i = 0; i < f.N; ++i) {
      f.jac[i].reserve(f.n);
      for (int a = 0; a < f.n; ++a) f.jac[i].push_back(f.comp[i].derivative(a));
      f.hess[i].resize(f.n);
      for (int a = 0; a < f.n; ++a) {
        f.hess[i][a].reserve(f.n);
        for (int g = 0; g < f.n; ++g) f.hess[i][a].push_back(f.jac[i][a].derivative(g));
      }
    }
    return f;
  }

  cvector value(const cvector& z) const {
    cvector v(N);
    for (int i = 0; i < N; ++i) v(i) = comp[i].eval(z);
    return v;
  }

  cmatrix jacobian(const cvector& z) const {
    cmatrix J(N, n);
    for (int i = 0; i < N; ++i)
      for (int a = 0; a < n; ++a) J(i, a) = jac[i][a].eval(z);
    return J;
  }

  // [i](a, g) = d_a d_g f^i, symmetric in (a, g)
  std::vector<cmatrix> second_partials(const cvector& z) const {
    std::vector<cmatrix> h(N, cmatrix(n, n));
    for (int i = 0; i < N; ++i)
      for (int a = 0; a < n; ++a)
        for (int g = 0; g < n; ++g) h[i](a, g) = hess[i][a][g].eval(z);
    return h;
  }
};

/// Pairing u, v -> sum g_{i jbar} u^i conj(v^j) of the metric convention used
/// throughout: linear in u, antilinear in v.
inline cplx metric_pairing(const cmatrix& g, const cvector& u, const cvector& v) {
  return (u.transpose() * g * v.conjugate())(0, 0);
}

namespace detail {

// everything the pointwise embedding computations share
struct embedding_point {
  cvector z, fz;
  cmatrix J;                   // N x n Jacobian
  std::vector<cmatrix> hess;   // [i](a, g)
  cmatrix G;                   // ambient metric at fz
  cmatrix Ginv;
  std::vector<cmatrix> D1;     // ambient metric first derivatives at fz
  cmatrix pullback;            // induced metric g_{a bbar} = J^T G conj(J)
  Eigen::LDLT<cmatrix> tangent_solver;  // factors conj(pullback)
  std::vector<cvector> hcov;   // covariant Hessian vectors, index a * n + g
  std::vector<cvector> normals;  // G-orthonormal frame of the normal space

  cvector tangent_reject(const cvector& v) const {
    const cvector rhs = J.adjoint() * (G.transpose() * v);
    return v - J * tangent_solver.solve(rhs);
  }
};

inline embedding_point prepare_embedding(const holo_map& f, const metric_field& target,
                                         const cvector& z, const field_fd_settings& fd) {
  if (int(z.size()) != f.n) fail(errc::schema_error, "point dimension mismatch");
  if (target.dim != f.N) fail(errc::schema_error, "target metric dimension mismatch");
  embedding_point ep;
  ep.z = z;
  ep.fz = f.value(z);
  ep.J = f.jacobian(z);
  const Eigen::JacobiSVD<cmatrix> svd(ep.J);
  if (svd.singularValues().minCoeff() < k_immersion_floor)
    fail(errc::not_immersion, "Jacobian rank below the source dimension");
  ep.hess = f.second_partials(z);
  ep.G = target.value(ep.fz);
  require_metric(ep.G);
  ep.Ginv = ep.G.inverse();
  ep.D1 = metric_d1(target, ep.fz, fd);

  cmatrix P = ep.J.transpose() * ep.G * ep.J.conjugate();
  P = ((P + P.adjoint()) / 2.0).eval();
  require_metric(P);
  ep.pullback = P;
  ep.tangent_solver.compute(P.conjugate());

  // covariant Hessian H^i_{ag} = f^i_{ag} + Gamma^i_{jk} f^j_a f^k_g with
  // Gamma^i_{jk} = g^{i lbar} d_j g_{k lbar}
  const int n = f.n, N = f.N;
  std::vector<cmatrix> mixed(N);  // [j](i, g) = sum_k Gamma^i_{jk} J(k, g)
  for (int j = 0; j < N; ++j) mixed[j] = (ep.D1[j] * ep.Ginv).transpose() * ep.J;
  ep.hcov.resize(size_t(n) * n, cvector(N));
  for (int a = 0; a < n; ++a)
    for (int g = 0; g < n; ++g) {
      cvector v(N);
      for (int i = 0; i < N; ++i) {
        cplx acc = ep.hess[i](a, g);
        for (int j = 0; j < N; ++j) acc += ep.J(j, a) * mixed[j](i, g);
        v(i) = acc;
      }
      ep.hcov[size_t(a) * n + g] = std::move(v);
    }

  // normal frame: Gram-Schmidt of the coordinate complement against G
  for (int i = 0; i < N && int(ep.normals.size()) < N - n; ++i) {
    cvector r = cvector::Zero(N);
    r(i) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      r = ep.tangent_reject(r);
      for (const auto& nb : ep.normals) r -= metric_pairing(ep.G, r, nb) * nb;
    }
    const double nrm2 = std::real(metric_pairing(ep.G, r, r));
    if (nrm2 > 1e-12) ep.normals.push_back(r / std::sqrt(nrm2));
  }
  if (int(ep.normals.size()) != N - n)
    fail(errc::internal_inconsistency, "normal frame construction came up short");
  return ep;
}

}  // namespace detail

inline cmatrix pullback_metric(const holo_map& f, const metric_field& target, const cvector& z,
                               const field_fd_settings& fd = {}) {
  return detail::prepare_embedding(f, target, z, fd).pullback;
}

/// Second fundamental form components in the adapted orthonormal normal
/// frame: comp[A](a, g) = <H_{ag}, n_A>, symmetric in (a, g).
struct second_fundamental_form {
  int n = 0, m = 0;
  std::vector<cmatrix> comp;
  cmatrix induced;  // induced metric at the evaluation point

  double max_abs() const {
    double worst = 0.0;
    for (const auto& c : comp) worst = std::max(worst, c.cwiseAbs().maxCoeff());
    return worst;
  }

  // metric norm: raises both symmetric slots with the induced metric
  double norm() const {
    const cmatrix inv = inverse_entries(induced);
    cplx acc = 0.0;
    for (const auto& c : comp)
      for (int a = 0; a < n; ++a)
        for (int g = 0; g < n; ++g)
          for (int a2 = 0; a2 < n; ++a2)
            for (int g2 = 0; g2 < n; ++g2)
              acc += c(a, g) * std::conj(c(a2, g2)) * inv(a, a2) * inv(g, g2);
    return std::sqrt(std::max(0.0, acc.real()));
  }
};

inline second_fundamental_form second_fundamental(const holo_map& f, const metric_field& target,
                                                  const cvector& z,
                                                  const field_fd_settings& fd = {}) {
  const auto ep = detail::prepare_embedding(f, target, z, fd);
  second_fundamental_form ii;
  ii.n = f.n;
  ii.m = f.N - f.n;
  ii.induced = ep.pullback;
  ii.comp.assign(size_t(ii.m), cmatrix(f.n, f.n));
  for (int A = 0; A < ii.m; ++A)
    for (int a = 0; a < f.n; ++a)
      for (int g = 0; g < f.n; ++g)
        ii.comp[size_t(A)](a, g) =
            metric_pairing(ep.G, ep.hcov[size_t(a) * f.n + g], ep.normals[size_t(A)]);
  return ii;
}

inline second_fundamental_form second_fundamental(const holo_map& f,
                                                  const space_form_chart& target,
                                                  const cvector& z) {
  return second_fundamental(f, space_form_field(target), z);
}

/// Consistency residual of the three independently computed pieces of the
/// Gauss equation: ambient curvature restricted to the image, minus induced
/// curvature, minus the squared second fundamental form.
inline curvature4 gauss_residual(const holo_map& f, const metric_field& target, const cvector& z,
                                 const field_fd_settings& fd = {}) {
  const auto ep = detail::prepare_embedding(f, target, z, fd);
  const int n = f.n, N = f.N;
  const auto D2 = metric_d2(target, ep.fz, fd);
  const curvature4 Rhat = curvature_from_derivatives(ep.G, ep.D1, D2);

  // ambient curvature pulled onto tangent directions
  std::vector<cmatrix> pulled(size_t(N) * N);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      cmatrix slab(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) slab(i, j) = Rhat.at(i, j, k, l);
      pulled[size_t(k) * N + l] = ep.J.transpose() * slab * ep.J.conjugate();
    }
  curvature4 Rpull(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g)
        for (int d = 0; d < n; ++d) {
          cplx acc = 0.0;
          for (int k = 0; k < N; ++k)
            for (int l = 0; l < N; ++l)
              acc += pulled[size_t(k) * N + l](a, b) * ep.J(k, g) * std::conj(ep.J(l, d));
          Rpull.at(a, b, g, d) = acc;
        }

  // analytic derivatives of the induced metric through the chain rule
  std::vector<cmatrix> Kg(n), Ag(n), Abar(n);
  for (int g = 0; g < n; ++g) {
    cmatrix K(N, n);
    for (int i = 0; i < N; ++i)
      for (int a = 0; a < n; ++a) K(i, a) = ep.hess[i](a, g);
    Kg[g] = std::move(K);
    cmatrix A = cmatrix::Zero(N, N);
    cmatrix Ab = cmatrix::Zero(N, N);
    for (int m = 0; m < N; ++m) {
      A += ep.J(m, g) * ep.D1[m];
      Ab += std::conj(ep.J(m, g)) * ep.D1[m].adjoint();
    }
    Ag[g] = std::move(A);
    Abar[g] = std::move(Ab);
  }
  std::vector<cmatrix> Pd1(n);
  for (int g = 0; g < n; ++g)
    Pd1[g] = ep.J.transpose() * Ag[g] * ep.J.conjugate() +
             Kg[g].transpose() * ep.G * ep.J.conjugate();
  std::vector<std::vector<cmatrix>> Pd2(n, std::vector<cmatrix>(n));
  for (int g = 0; g < n; ++g)
    for (int d = 0; d < n; ++d) {
      cmatrix C = cmatrix::Zero(N, N);
      for (int m = 0; m < N; ++m)
        for (int l = 0; l < N; ++l) C += ep.J(m, g) * std::conj(ep.J(l, d)) * D2[m][l];
      Pd2[g][d] = ep.J.transpose() * C * ep.J.conjugate() +
                  ep.J.transpose() * Ag[g] * Kg[d].conjugate() +
                  Kg[g].transpose() * Abar[d] * ep.J.conjugate() +
                  Kg[g].transpose() * ep.G * Kg[d].conjugate();
    }
  const curvature4 Rind = curvature_from_derivatives(ep.pullback, Pd1, Pd2);

  // squared second fundamental form in the orthonormal frame
  const int m = N - n;
  std::vector<cmatrix> ii(size_t(m), cmatrix(n, n));
  for (int A = 0; A < m; ++A)
    for (int a = 0; a < n; ++a)
      for (int g = 0; g < n; ++g)
        ii[size_t(A)](a, g) =
            metric_pairing(ep.G, ep.hcov[size_t(a) * n + g], ep.normals[size_t(A)]);

  curvature4 res = Rpull;
  res -= Rind;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int g = 0; g < n; ++g)
        for (int d = 0; d < n; ++d) {
          cplx acc = 0.0;
          for (int A = 0; A < m; ++A) acc += ii[size_t(A)](a, g) * std::conj(ii[size_t(A)](b, d));
          res.at(a, b, g, d) -= acc;
        }
  return res;
}

inline curvature4 gauss_residual(const holo_map& f, const space_form_chart& target,
                                 const cvector& z) {
  return gauss_residual(f, space_form_field(target), z);
}

/// Least-squares fit of a single positive constant k with pullback = k * source
/// over the sample set, plus the worst relative deviation from that fit.
struct conformal_fit {
  double k = 0.0;
  double max_deviation = 0.0;
};

inline conformal_fit conformal_factor_check(const holo_map& f, const metric_field& source,
                                            const metric_field& target,
                                            const std::vector<cvector>& samples,
                                            const field_fd_settings& fd = {}) {
  if (samples.size() < 2) fail(errc::empty_sample_set, "need at least two sample points");
  if (source.dim != f.n) fail(errc::schema_error, "source metric dimension mismatch");
  std::vector<cmatrix> W, P;
  W.reserve(samples.size());
  P.reserve(samples.size());
  double num = 0.0, den = 0.0;
  for (const auto& z : samples) {
    W.push_back(source.value(z));
    require_metric(W.back());
    P.push_back(pullback_metric(f, target, z, fd));
    num += ((W.back().adjoint() * P.back()).trace()).real();
    den += W.back().squaredNorm();
  }
  conformal_fit fit;
  fit.k = num / den;
  for (size_t s = 0; s < samples.size(); ++s) {
    const double dev = (P[s] - fit.k * W[s]).cwiseAbs().maxCoeff();
    fit.max_deviation =
        std::max(fit.max_deviation, dev / std::max(1.0, P[s].cwiseAbs().maxCoeff()));
  }
  return fit;
}

enum class geodesic_verdict { confirmed, hypothesis_fails, violation_suspected };

constexpr const char* geodesic_verdict_name(geodesic_verdict v) {
  switch (v) {
    case geodesic_verdict::confirmed: return "TotallyGeodesicConfirmed";
    case geodesic_verdict::hypothesis_fails: return "HypothesisFails";
    case geodesic_verdict::violation_suspected: return "TheoremViolationSuspected";
  }
  return "?";
}

struct geodesic_report {
  geodesic_verdict verdict = geodesic_verdict::hypothesis_fails;
  std::string reason;  // empty when confirmed
  double conformal_k = 0.0;
  double conformal_deviation = 0.0;
  double max_ii_norm = 0.0;
};

/// Checks, in order: the dimension window 2 <= n <= N <= 2n-1, conformality of
/// the pullback with a constant factor, pseudo-conformal flatness of source
/// and target curvatures at the samples, and finally that the second
/// fundamental form vanishes.  A run that passes every hypothesis but keeps a
/// nonzero second fundamental form signals a bug, not new mathematics.
inline geodesic_report totally_geodesic_verdict(const holo_map& f,
                                                const space_form_chart& target,
                                                const space_form_chart& source,
                                                const std::vector<cvector>& samples,
                                                double tol = 1e-6) {
  check_chart(target);
  check_chart(source);
  if (target.dim != f.N || source.dim != f.n)
    fail(errc::schema_error, "chart dimensions must match the map");
  geodesic_report rep;
  const int n = f.n, N = f.N;
  if (!(2 <= n && n <= N && N <= 2 * n - 1)) {
    rep.reason = "dimension window 2 <= n <= N <= 2n-1 fails for n = " + std::to_string(n) +
                 ", N = " + std::to_string(N);
    return rep;
  }
  if (samples.empty()) fail(errc::empty_sample_set, "verdict needs sample points");

  const metric_field src = space_form_field(source);
  const metric_field tgt = space_form_field(target);
  const conformal_fit fit = conformal_factor_check(f, src, tgt, samples);
  rep.conformal_k = fit.k;
  rep.conformal_deviation = fit.max_deviation;
  if (!(fit.k > 0.0) || fit.max_deviation > tol) {
    rep.reason = "pullback metric is not a constant positive multiple of the source metric";
    return rep;
  }
  for (const auto& z : samples) {
    const auto src_flat = conformal_flat_test(space_form_curvature(source, z),
                                              space_form_metric(source, z));
    if (!src_flat.flat) {
      rep.reason = "source curvature is not pseudo-conformally flat";
      return rep;
    }
    const cvector fz = f.value(z);
    const auto tgt_flat = conformal_flat_test(space_form_curvature(target, fz),
                                              space_form_metric(target, fz));
    if (!tgt_flat.flat) {
      rep.reason = "target curvature is not pseudo-conformally flat";
      return rep;
    }
  }
  for (const auto& z : samples)
    rep.max_ii_norm = std::max(rep.max_ii_norm, second_fundamental(f, tgt, z).norm());
  if (rep.max_ii_norm <= tol) {
    rep.verdict = geodesic_verdict::confirmed;
    rep.reason.clear();
  } else {
    rep.verdict = geodesic_verdict::violation_suspected;
    rep.reason = "all hypotheses hold yet the second fundamental form is nonzero";
  }
  return rep;
}

/// Point of the hypersurface {p(z, zbar) + q(w, wbar) = 0}, with p the
/// Hermitian quadratic of the z block.
struct surface_sample {
  cvector z;
  cplx w;
};

/// Deterministic sample set: w spirals through the disc of the given radius,
/// |z| is solved from p(z) = -q(w) along the last z coordinate.
inline std::vector<surface_sample> hypersurface_samples(const cmatrix& h,
                                                        const hermitian_defining_function& q,
                                                        int count, double radius) {
  require_metric(h);
  if (count < 1) fail(errc::empty_sample_set, "sample count must be positive");
  if (!(radius > 0.0)) fail(errc::schema_error, "sample radius must be positive");
  const int zdim = int(h.rows());
  const int d = zdim - 1;
  const double hdd = h(d, d).real();
  std::vector<surface_sample> out;
  out.reserve(size_t(count));
  for (int s = 0; s < count; ++s) {
    const double r = radius * std::sqrt((s + 0.5) / double(count));
    const double th = 2.0 * M_PI * std::fmod(s * 0.6180339887498949, 1.0);
    const cplx w = std::polar(r, th);
    const double qv = q.evaluate(w);
    if (qv >= -1e-12)
      fail(errc::not_in_domain, "sample radius leaves the region where q < 0");
    const double ph = 2.0 * M_PI * std::fmod(s * 0.3819660112501051, 1.0);
    surface_sample smp;
    smp.z = cvector::Zero(zdim);
    smp.z(d) = std::polar(std::sqrt(-qv / hdd), ph);
    smp.w = w;
    out.push_back(std::move(smp));
  }
  return out;
}

/// Worst deviation of |F(z, w)|^2 from 1 over samples of the hypersurface;
/// F takes the variables (z_1, ..., z_d, w) in that order.
inline double sphere_map_residual(const cmatrix& h, const hermitian_defining_function& q,
                                  const holo_map& F,
                                  const std::vector<surface_sample>& samples) {
  require_metric(h);
  if (samples.empty()) fail(errc::empty_sample_set, "no samples on the hypersurface");
  const int zdim = int(h.rows());
  if (F.n != zdim + 1) fail(errc::schema_error, "map must take the z block plus w");
  double worst = 0.0;
  for (const auto& s : samples) {
    if (int(s.z.size()) != zdim) fail(errc::schema_error, "sample dimension mismatch");
    const double on_surface = hermitian_length(h, s.z) + q.evaluate(s.w);
    if (std::abs(on_surface) > 1e-10)
      fail(errc::not_in_domain, "sample point does not lie on the hypersurface");
    cvector zw(zdim + 1);
    zw.head(zdim) = s.z;
    zw(zdim) = s.w;
    worst = std::max(worst, std::abs(F.value(zw).squaredNorm() - 1.0));
  }
  return worst;
}

}  // namespace crgeo
