#pragma once

// Deterministic random generators shared by the test suites.

#include <complex>
#include <random>

#include "crgeo/defining_function.hpp"

namespace testsupport {

using crgeo::cplx;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

/// Random real polynomial of bidegree <= (3,3): the sphere slice |w|^2 - 1
/// plus a Hermitian-symmetrized perturbation of the given scale.  Small scales
/// keep a neighbourhood of the disc admissible (q < 0, h > 0).
inline crgeo::hermitian_defining_function random_defining_function(std::mt19937_64& rng,
                                                                  double scale = 0.05) {
  crgeo::hermitian_defining_function::term_map m;
  m[{1, 1}] = 1.0;
  m[{0, 0}] = -1.0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= a; ++b) {
      if (a == b) {
        m[{a, a}] += uniform(rng, -scale, scale);
      } else {
        const cplx c = random_cplx(rng, scale);
        m[{a, b}] += c;
        m[{b, a}] += std::conj(c);
      }
    }
  return crgeo::hermitian_defining_function(std::move(m));
}

/// Admissible point for q in the disc of the given radius: q < -0.05 and
/// h > 0.01, found by deterministic rejection sampling.
inline cplx admissible_point(std::mt19937_64& rng, const crgeo::hermitian_defining_function& q,
                             double radius = 0.6, bool need_gradient = false) {
  for (int tries = 0; tries < 1000; ++tries) {
    const cplx w = random_cplx(rng, radius);
    if (std::abs(w) > radius) continue;
    const auto j = q.jet(w, 1, 1);
    const double qv = j.value().real();
    if (!(qv < -0.05)) continue;
    const double k = std::norm(j.at(1, 0)) - qv * j.at(1, 1).real();
    if (!(k / (qv * qv) > 0.01)) continue;
    if (need_gradient && std::abs(j.at(1, 0)) < 1e-3) continue;
    return w;
  }
  throw std::runtime_error("admissible_point: rejection sampling exhausted");
}

}  // namespace testsupport
