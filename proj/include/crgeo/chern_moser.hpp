#pragma once

// Bridge from the per-point scalar invariants of the circular model to the
// tensor layer: at an admissible w pick a representative z on the slice
// h_{a bbar} z^a conj(z^b) = -q(w), assemble the Levi metric and curvature,
// and measure how far the trace-free part is from zero.

#include "crgeo/curvature_tensor.hpp"
#include "crgeo/webster.hpp"

namespace crgeo {

struct chern_moser_point {
  webster_point base;
  cvector z;
  double s_norm = 0.0;  // max-norm of the trace-free part at (z, w)
};

/// Deterministic representative: z = t e_1 with h_{1 1bar} t^2 = -q.
inline cvector slice_representative(const cmatrix& h, double q) {
  require_metric(h);
  if (!(q < 0.0)) fail(errc::not_in_domain, "representative needs q < 0");
  cvector z = cvector::Zero(h.rows());
  z(0) = std::sqrt(-q / h(0, 0).real());
  return z;
}

inline chern_moser_point chern_moser_invariants(const hermitian_defining_function& q,
                                                const cmatrix& h, cplx w,
                                                const webster_floors& fl = {}) {
  chern_moser_point out;
  out.base = webster_invariants(q.jet(w, 3, 3), fl);
  out.z = slice_representative(h, out.base.q);
  const cvector p = levi_gradient(h, out.z);
  const cmatrix g = levi_metric(h, out.base.Q, p);
  // The quartic coefficient enters through the curvature-derived route: the
  // first-order expression in base.B cancels between terms of size |Q|^3 and
  // loses ~|Q|^3 eps absolute accuracy where the gradient is small, which
  // would swamp the trace-free norm near the slice axis.
  const curvature4 R =
      pseudo_hermitian_curvature(out.base.A.real(), b_from_curvature(out.base), g, p);
  out.s_norm = traceless_projection(R, g).max_norm();
  return out;
}

}  // namespace crgeo
