#pragma once

#include <cmath>
#include <initializer_list>
#include <map>
#include <tuple>
#include <utility>

#include "crgeo/jets.hpp"

namespace crgeo {

/// Real-valued polynomial q(w, wbar) = sum c_{ab} w^a wbar^b with the
/// Hermitian symmetry c_{ab} = conj(c_{ba}).  Defines the rotation-invariant
/// piece of a hypersurface of revolution via q < 0.
class hermitian_defining_function {
 public:
  using term_map = std::map<std::pair<int, int>, cplx>;

  explicit hermitian_defining_function(term_map coeffs, double reality_tol = 1e-12)
      : coeffs_(std::move(coeffs)) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (std::abs(it->second) == 0.0) it = coeffs_.erase(it);
      else ++it;
    }
    for (const auto& [ab, c] : coeffs_) {
      const auto [a, b] = ab;
      if (a < 0 || b < 0 || a > 8 || b > 8)
        fail(errc::schema_error, "coefficient exponents must lie in 0..8");
      cplx mirror = 0.0;
      if (auto it = coeffs_.find({b, a}); it != coeffs_.end()) mirror = it->second;
      const double defect = std::abs(c - std::conj(mirror));
      if (defect > reality_tol * std::max(1.0, std::abs(c)))
        fail(errc::reality_violation,
             "c(" + std::to_string(a) + "," + std::to_string(b) + ") != conj(c(" +
                 std::to_string(b) + "," + std::to_string(a) + ")), defect " +
                 std::to_string(defect));
    }
  }

  static hermitian_defining_function from_terms(
      std::initializer_list<std::tuple<int, int, cplx>> terms) {
    term_map m;
    for (const auto& [a, b, c] : terms) m[{a, b}] += c;
    return hermitian_defining_function(std::move(m));
  }

  /// q = |w|^2 - 1 (unit sphere slice).
  static hermitian_defining_function sphere() {
    return from_terms({{1, 1, 1.0}, {0, 0, -1.0}});
  }

  /// q = |w|^2 + eps |w|^4 - 1.
  static hermitian_defining_function quartic_perturbation(double eps) {
    return from_terms({{1, 1, 1.0}, {2, 2, eps}, {0, 0, -1.0}});
  }

  const term_map& coefficients() const { return coeffs_; }

  cplx coefficient(int a, int b) const {
    auto it = coeffs_.find({a, b});
    return it == coeffs_.end() ? cplx(0.0) : it->second;
  }

  int max_degree_w() const {
    int m = 0;
    for (const auto& [ab, c] : coeffs_) m = std::max(m, ab.first);
    return m;
  }

  int max_degree_wbar() const {
    int m = 0;
    for (const auto& [ab, c] : coeffs_) m = std::max(m, ab.second);
    return m;
  }

  double evaluate(cplx w) const {
    cplx acc = 0.0;
    const cplx wb = std::conj(w);
    for (const auto& [ab, c] : coeffs_)
      acc += c * ipow(w, ab.first) * ipow(wb, ab.second);
    return acc.real();
  }

  /// Exact derivative table via falling factorials:
  /// (d/dw)^i (d/dwbar)^j [w^a wbar^b] = a!/(a-i)! b!/(b-j)! w^{a-i} wbar^{b-j}.
  bidegree_jet jet(cplx w, int order_w, int order_wbar) const {
    bidegree_jet j(w, order_w, order_wbar);
    const cplx wb = std::conj(w);
    for (const auto& [ab, c] : coeffs_) {
      const auto [a, b] = ab;
      for (int i = 0; i <= std::min(a, order_w); ++i)
        for (int k = 0; k <= std::min(b, order_wbar); ++k)
          j.at(i, k) += c * detail::falling(a, i) * detail::falling(b, k) *
                        ipow(w, a - i) * ipow(wb, b - k);
    }
    return j;
  }

 private:
  static cplx ipow(cplx z, int e) {
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= z;
    return r;
  }

  term_map coeffs_;
};

}  // namespace crgeo
