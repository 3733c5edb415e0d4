#pragma once

#include <optional>
#include <vector>

#include "crgeo/defining_function.hpp"
#include "crgeo/parallel.hpp"

namespace crgeo {

/// Floors guarding the per-point invariant formulas.
struct webster_floors {
  double domain = 1e-10;    // require q <= -domain
  double gradient = 1e-8;   // require |q_w| >= gradient for Q, A, B
  double value = k_value_floor;
};

/// Pointwise invariants of the circular model on D0 = {q < 0}:
///   h = (q_w q_wb - q q_wwb)/q^2        (positive on admissible points)
///   k = q_w q_wb - q q_wwb = h q^2
///   Q = q_wwb/(q_w q_wb),  A = -Q/(1 - Q q)
///   K = Gauss curvature of the leaf metric, B = the quartic coefficient
/// Q and A are real for real-analytic real q; they are stored complex and the
/// imaginary parts asserted small.
struct webster_point {
  cplx w;
  double q = 0.0;
  double h = 0.0;
  double k = 0.0;
  double K = 0.0;
  double B = 0.0;
  cplx q_w;
  cplx q_ww;
  double q_wwb = 0.0;
  cplx q_wwwb;
  double q_wwwbwb = 0.0;
  cplx Q;
  cplx A;
};

enum class curvature_method { jet_generic, closed_form };

namespace detail {

struct admissible_values {
  double q, k, h;
};

inline admissible_values check_admissible(const bidegree_jet& jq, const webster_floors& fl) {
  const cplx q0 = jq.value();
  if (std::abs(q0.imag()) > 1e-9 * std::max(1.0, std::abs(q0)))
    fail(errc::reality_violation, "q has non-real value " + std::to_string(q0.imag()));
  const double q = q0.real();
  if (!(q <= -fl.domain))
    fail(errc::not_in_domain, "q = " + std::to_string(q) + " is not negative");
  const cplx qw = jq.at(1, 0);
  const double k = (qw * std::conj(qw)).real() - q * jq.at(1, 1).real();
  const double h = k / (q * q);
  if (!(h > fl.value))
    fail(errc::not_pseudoconvex, "h = " + std::to_string(h) + " is not positive");
  return {q, k, h};
}

}  // namespace detail

/// Gauss curvature of the leaf metric from the jet of q.
///
/// jet_generic route: K = -(1/h) (log h)_{w wbar} with h = (q_w q_wb - q q_wwb)/q^2,
/// evaluated entirely in the jet algebra; needs jet order >= (3,3) and works
/// where h > 0 even if q_w = 0.
///
/// closed_form route: K = -2 + q^3 k^-3 (k q_wwwbwb + q |q_wwwb|^2
///   - 2 Re(q_wwwb q_wbwb q_w) + q_wwb |q_ww|^2); needs jet order >= (2,2).
inline double gauss_curvature(const bidegree_jet& jq,
                              curvature_method method = curvature_method::jet_generic,
                              const webster_floors& fl = {}) {
  const auto adm = detail::check_admissible(jq, fl);
  if (method == curvature_method::closed_form) {
    if (jq.order_w() < 2 || jq.order_wbar() < 2)
      throw std::invalid_argument("gauss_curvature(closed_form): jet order below (2,2)");
    const cplx qw = jq.at(1, 0);
    const cplx qww = jq.at(2, 0);
    const cplx qwwwb = jq.at(2, 1);
    const cplx qwbwb = jq.at(0, 2);
    const double qwwb = jq.at(1, 1).real();
    const double qwwwbwb = jq.at(2, 2).real();
    const double paren = adm.k * qwwwbwb + adm.q * std::norm(qwwwb) -
                         2.0 * (qwwwb * qwbwb * qw).real() + qwwb * std::norm(qww);
    const double q3 = adm.q * adm.q * adm.q;
    return -2.0 + q3 / (adm.k * adm.k * adm.k) * paren;
  }
  if (jq.order_w() < 3 || jq.order_wbar() < 3)
    throw std::invalid_argument("gauss_curvature(jet_generic): jet order below (3,3)");
  const bidegree_jet qw = jq.derive_w();
  const bidegree_jet qwb = jq.derive_wbar();
  const bidegree_jet k_jet = qw * qwb - jq * qw.derive_wbar();
  const bidegree_jet h_jet = divide(k_jet, jq * jq, fl.value);
  const bidegree_jet logh = logarithm(h_jet, fl.value);
  const cplx mixed = logh.at(1, 1);
  if (std::abs(mixed.imag()) > 1e-8 * std::max(1.0, std::abs(mixed)))
    fail(errc::reality_violation, "(log h)_wwb has non-real value");
  return -mixed.real() / adm.h;
}

/// Full invariant set at one admissible point with |q_w| above the gradient
/// floor.  K is computed by the closed form; B by its first-order expression
///   B = Q_wwb/(q_w q_wb) + 2Q (Q_w/q_w + Q_wb/q_wb) + 3Q^3
///       + q |Q_w/q_w + Q^2|^2 / (1 - Q q),
/// which a separate identity ties to (K+2) k^2 / (q^3 (q_w q_wb)^2).
inline webster_point webster_invariants(const bidegree_jet& jq, const webster_floors& fl = {}) {
  if (jq.order_w() < 3 || jq.order_wbar() < 3)
    throw std::invalid_argument("webster_invariants: jet order below (3,3)");
  const auto adm = detail::check_admissible(jq, fl);

  webster_point p;
  p.w = jq.basepoint();
  p.q = adm.q;
  p.k = adm.k;
  p.h = adm.h;
  p.q_w = jq.at(1, 0);
  p.q_ww = jq.at(2, 0);
  p.q_wwb = jq.at(1, 1).real();
  p.q_wwwb = jq.at(2, 1);
  p.q_wwwbwb = jq.at(2, 2).real();

  if (std::abs(p.q_w) < fl.gradient)
    fail(errc::degenerate_gradient, "|q_w| = " + std::to_string(std::abs(p.q_w)));

  const bidegree_jet qw_jet = jq.derive_w();
  const bidegree_jet qwb_jet = jq.derive_wbar();
  const bidegree_jet den = qw_jet * qwb_jet;          // q_w q_wb
  const bidegree_jet qwwb_jet = qw_jet.derive_wbar();
  const bidegree_jet Q_jet = divide(qwwb_jet, den, fl.value);

  p.Q = Q_jet.value();
  if (std::abs(p.Q.imag()) > 1e-10 * std::max(1.0, std::abs(p.Q)))
    fail(errc::reality_violation, "Q has imaginary part " + std::to_string(p.Q.imag()));
  const cplx one_minus_Qq = 1.0 - p.Q * p.q;  // equals k/|q_w|^2 > 0 on admissible points
  if (std::abs(one_minus_Qq) <= fl.value)
    fail(errc::division_near_zero, "1 - Qq vanishes");
  p.A = -p.Q / one_minus_Qq;

  const cplx Qw = Q_jet.at(1, 0);
  const cplx Qwb = Q_jet.at(0, 1);
  const cplx Qwwb = Q_jet.at(1, 1);
  const cplx qw = p.q_w;
  const cplx qwb = std::conj(p.q_w);
  const cplx Bc = Qwwb / (qw * qwb) + 2.0 * p.Q * (Qw / qw + Qwb / qwb) +
                  3.0 * p.Q * p.Q * p.Q +
                  p.q * std::norm(Qw / qw + p.Q * p.Q) / one_minus_Qq;
  if (std::abs(Bc.imag()) > 1e-8 * std::max(1.0, std::abs(Bc)))
    fail(errc::reality_violation, "B has imaginary part " + std::to_string(Bc.imag()));
  p.B = Bc.real();

  p.K = gauss_curvature(jq, curvature_method::closed_form, fl);
  return p;
}

/// B recomputed from K via the identity B = (K+2) k^2 / (q^3 (q_w q_wb)^2);
/// kept separate so tests can compare the two routes.
inline double b_from_curvature(const webster_point& p) {
  const double den = p.q * p.q * p.q * std::norm(p.q_w) * std::norm(p.q_w);
  return (p.K + 2.0) * p.k * p.k / den;
}

struct grid_spec {
  cplx center{0.0, 0.0};
  double radius = 0.5;
  int steps = 11;
};

enum class skip_reason { outside_domain, degenerate_gradient, not_pseudoconvex };

constexpr const char* skip_reason_name(skip_reason r) {
  switch (r) {
    case skip_reason::outside_domain: return "outside-domain";
    case skip_reason::degenerate_gradient: return "degenerate-gradient";
    case skip_reason::not_pseudoconvex: return "not-pseudoconvex";
  }
  return "?";
}

struct scan_record {
  cplx w;
  std::optional<webster_point> data;
  std::optional<skip_reason> skip;
};

struct domain_scan_report {
  grid_spec grid;
  std::vector<scan_record> points;  // row-major over the grid, deterministic
  double k_min = 0.0;               // min/max of K over computed points
  double k_max = 0.0;
  int computed = 0;
  int skipped_outside_domain = 0;
  int skipped_degenerate_gradient = 0;
  int skipped_not_pseudoconvex = 0;
};

/// Row-major scan of a square lattice: steps x steps points covering
/// [center ± radius]^2.  Points outside D0, with |q_w| under the floor, or
/// failing h > 0 are recorded with a skip reason.  Deterministic for any
/// thread count: records land at their lattice index.
inline domain_scan_report scan_domain(const hermitian_defining_function& q,
                                      const grid_spec& grid,
                                      const webster_floors& fl = {},
                                      unsigned threads = 1) {
  if (grid.steps < 1 || grid.steps > 4096)
    throw std::invalid_argument("scan_domain: steps must lie in 1..4096");
  if (!(grid.radius > 0.0)) throw std::invalid_argument("scan_domain: radius must be positive");

  const int m = grid.steps;
  const double step = m > 1 ? 2.0 * grid.radius / double(m - 1) : 0.0;
  domain_scan_report rep;
  rep.grid = grid;
  rep.points.resize(size_t(m) * m);

  parallel_for(size_t(m) * m, threads, [&](size_t idx) {
    const int iy = int(idx) / m, ix = int(idx) % m;
    const cplx w = grid.center + cplx(-grid.radius + step * ix, -grid.radius + step * iy);
    scan_record rec;
    rec.w = w;
    try {
      rec.data = webster_invariants(q.jet(w, 3, 3), fl);
    } catch (const error& e) {
      switch (e.code()) {
        case errc::not_in_domain: rec.skip = skip_reason::outside_domain; break;
        case errc::degenerate_gradient: rec.skip = skip_reason::degenerate_gradient; break;
        case errc::not_pseudoconvex: rec.skip = skip_reason::not_pseudoconvex; break;
        default: throw;
      }
    }
    rep.points[idx] = std::move(rec);
  });

  bool first = true;
  for (const auto& rec : rep.points) {
    if (rec.data) {
      ++rep.computed;
      const double K = rec.data->K;
      rep.k_min = first ? K : std::min(rep.k_min, K);
      rep.k_max = first ? K : std::max(rep.k_max, K);
      first = false;
    } else {
      switch (*rec.skip) {
        case skip_reason::outside_domain: ++rep.skipped_outside_domain; break;
        case skip_reason::degenerate_gradient: ++rep.skipped_degenerate_gradient; break;
        case skip_reason::not_pseudoconvex: ++rep.skipped_not_pseudoconvex; break;
      }
    }
  }
  if (rep.computed == 0 && rep.skipped_degenerate_gradient == 0 &&
      rep.skipped_not_pseudoconvex == 0)
    fail(errc::empty_domain, "no grid point lies in {q < 0}");
  return rep;
}

enum class embeddability { spherical_rigid, no_low_codim_embedding, inapplicable };

constexpr const char* embeddability_name(embeddability v) {
  switch (v) {
    case embeddability::spherical_rigid: return "SphericalRigid";
    case embeddability::no_low_codim_embedding: return "NoLowCodimEmbedding";
    case embeddability::inapplicable: return "Inapplicable";
  }
  return "?";
}

/// Embeddability verdict over a scan, for targets of dimension N with source
/// dimension n (window 2 <= n <= N <= 2n-2):
///   SphericalRigid      -- |K+2| < tol at every computed point,
///   NoLowCodimEmbedding -- K > -2 - tol everywhere and K > -2 + tol somewhere,
///   Inapplicable        -- window failure, K < -2 - tol somewhere, or any tie
///                          at the tolerance boundary (never conclude from
///                          boundary numerics).
inline embeddability embeddability_verdict(const domain_scan_report& rep, int n, int N,
                                           double tol = 1e-6) {
  if (rep.computed == 0) fail(errc::empty_domain, "verdict needs at least one computed point");
  if (!(tol > 0.0)) throw std::invalid_argument("embeddability_verdict: tol must be positive");
  if (!(2 <= n && n <= N && N <= 2 * n - 2)) return embeddability::inapplicable;
  const double lo = rep.k_min + 2.0, hi = rep.k_max + 2.0;
  if (std::max(std::abs(lo), std::abs(hi)) < tol) return embeddability::spherical_rigid;
  if (lo > -tol && hi > tol) return embeddability::no_low_codim_embedding;
  return embeddability::inapplicable;
}

}  // namespace crgeo
