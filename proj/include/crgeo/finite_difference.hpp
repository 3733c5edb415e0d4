#pragma once

#include "crgeo/defining_function.hpp"

namespace crgeo {

namespace detail {

// Nested central-difference estimate of (d/dw)^a (d/dwbar)^b f at w with a
// uniform real step s, using d/dw = (d/dx - i d/dy)/2, d/dwbar = (d/dx + i d/dy)/2.
template <class F>
cplx wirtinger_stencil(const F& f, cplx w, int a, int b, double s) {
  if (a == 0 && b == 0) return f(w);
  const cplx i(0.0, 1.0);
  if (a > 0) {
    auto dx = wirtinger_stencil(f, w + s, a - 1, b, s) - wirtinger_stencil(f, w - s, a - 1, b, s);
    auto dy = wirtinger_stencil(f, w + i * s, a - 1, b, s) - wirtinger_stencil(f, w - i * s, a - 1, b, s);
    return (dx - i * dy) / (4.0 * s);
  }
  auto dx = wirtinger_stencil(f, w + s, a, b - 1, s) - wirtinger_stencil(f, w - s, a, b - 1, s);
  auto dy = wirtinger_stencil(f, w + i * s, a, b - 1, s) - wirtinger_stencil(f, w - i * s, a, b - 1, s);
  return (dx + i * dy) / (4.0 * s);
}

// Richardson/Romberg refinement of a step -> estimate functional whose error
// expands in even powers of the step.  Works for any value type with vector
// space operations (scalars, Eigen matrices).
template <class E>
auto richardson(const E& estimate, double step, int levels) {
  using value_type = std::decay_t<decltype(estimate(step))>;
  std::vector<value_type> t(levels + 1);
  for (int l = 0; l <= levels; ++l) t[l] = estimate(step / double(1 << l));
  double pw = 1.0;
  for (int k = 1; k <= levels; ++k) {
    pw *= 4.0;
    for (int l = levels; l >= k; --l) t[l] = (pw * t[l] - t[l - 1]) / (pw - 1.0);
  }
  return t[levels];
}

}  // namespace detail

/// Independent derivative oracle: estimates the mixed Wirtinger partial
/// (d/dw)^a (d/dwbar)^b q by nested central differences with one Richardson
/// refinement by default.  Shares no code with the exact jet path.
inline cplx fd_partial_oracle(const hermitian_defining_function& q, cplx w, int a, int b,
                              double step = 1e-3, int richardson_levels = 1) {
  if (a < 0 || b < 0 || a + b > 4)
    throw std::invalid_argument("fd_partial_oracle: requires 0 <= a+b <= 4");
  if (!(step > 0.0) || step >= 1.0)
    throw std::invalid_argument("fd_partial_oracle: step must lie in (0, 1)");
  auto f = [&q](cplx u) { return cplx(q.evaluate(u), 0.0); };
  auto estimate = [&](double s) { return detail::wirtinger_stencil(f, w, a, b, s); };
  return detail::richardson(estimate, step, richardson_levels);
}

}  // namespace crgeo
