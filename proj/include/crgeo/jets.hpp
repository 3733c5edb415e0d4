#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "crgeo/errors.hpp"

namespace crgeo {

using cplx = std::complex<double>;

inline constexpr double k_value_floor = 1e-12;  // |value| floor for divide / log

namespace detail {

// Pascal's triangle, enough for jet orders <= 8 plus slack.
inline double binom(int n, int k) {
  static const auto table = [] {
    std::vector<std::vector<double>> t(18);
    for (int i = 0; i < 18; ++i) {
      t[i].assign(i + 1, 1.0);
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (k < 0 || k > n) return 0.0;
  return table[n][k];
}

// n (n-1) ... (n-k+1)
inline double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= double(n - i);
  return r;
}

}  // namespace detail

/// Truncated table of mixed Wirtinger partials of a function of (w, wbar) at a
/// basepoint: at(a, b) = (d/dw)^a (d/dwbar)^b f.  The algebra below (Leibniz
/// product, quotient, log) acts on these tables so that chained invariant
/// formulas can be evaluated without symbolic differentiation.
class bidegree_jet {
 public:
  bidegree_jet(cplx basepoint, int order_w, int order_wbar)
      : base_(basepoint), ow_(order_w), owb_(order_wbar),
        d_((order_w + 1) * (order_wbar + 1), cplx(0.0)) {
    if (order_w < 0 || order_wbar < 0 || order_w > 8 || order_wbar > 8)
      throw std::invalid_argument("bidegree_jet: order components must lie in 0..8");
  }

  int order_w() const { return ow_; }
  int order_wbar() const { return owb_; }
  cplx basepoint() const { return base_; }

  cplx& at(int a, int b) { return d_[size_t(a) * (owb_ + 1) + b]; }
  const cplx& at(int a, int b) const { return d_[size_t(a) * (owb_ + 1) + b]; }
  cplx value() const { return at(0, 0); }

  bidegree_jet derive_w() const {
    if (ow_ == 0) throw std::invalid_argument("derive_w: jet order exhausted");
    bidegree_jet r(base_, ow_ - 1, owb_);
    for (int a = 0; a < ow_; ++a)
      for (int b = 0; b <= owb_; ++b) r.at(a, b) = at(a + 1, b);
    return r;
  }

  bidegree_jet derive_wbar() const {
    if (owb_ == 0) throw std::invalid_argument("derive_wbar: jet order exhausted");
    bidegree_jet r(base_, ow_, owb_ - 1);
    for (int a = 0; a <= ow_; ++a)
      for (int b = 0; b < owb_; ++b) r.at(a, b) = at(a, b + 1);
    return r;
  }

  /// max |at(a,b) - conj(at(b,a))| over the square part of the table; zero for
  /// jets of real-valued functions.
  double reality_defect() const {
    int m = std::min(ow_, owb_);
    double worst = 0.0;
    for (int a = 0; a <= m; ++a)
      for (int b = 0; b <= m; ++b)
        worst = std::max(worst, std::abs(at(a, b) - std::conj(at(b, a))));
    return worst;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : d_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  cplx base_;
  int ow_, owb_;
  std::vector<cplx> d_;
};

inline bidegree_jet jet_constant(cplx c, cplx basepoint, int order_w, int order_wbar) {
  bidegree_jet j(basepoint, order_w, order_wbar);
  j.at(0, 0) = c;
  return j;
}

namespace detail {

inline void require_same_basepoint(const bidegree_jet& f, const bidegree_jet& g) {
  if (std::abs(f.basepoint() - g.basepoint()) > 0.0)
    throw std::invalid_argument("jet arithmetic: basepoints differ");
}

}  // namespace detail

inline bidegree_jet operator+(const bidegree_jet& f, const bidegree_jet& g) {
  detail::require_same_basepoint(f, g);
  const int ow = std::min(f.order_w(), g.order_w());
  const int owb = std::min(f.order_wbar(), g.order_wbar());
  bidegree_jet r(f.basepoint(), ow, owb);
  for (int a = 0; a <= ow; ++a)
    for (int b = 0; b <= owb; ++b) r.at(a, b) = f.at(a, b) + g.at(a, b);
  return r;
}

inline bidegree_jet operator-(const bidegree_jet& f, const bidegree_jet& g) {
  detail::require_same_basepoint(f, g);
  const int ow = std::min(f.order_w(), g.order_w());
  const int owb = std::min(f.order_wbar(), g.order_wbar());
  bidegree_jet r(f.basepoint(), ow, owb);
  for (int a = 0; a <= ow; ++a)
    for (int b = 0; b <= owb; ++b) r.at(a, b) = f.at(a, b) - g.at(a, b);
  return r;
}

inline bidegree_jet operator*(cplx c, const bidegree_jet& f) {
  bidegree_jet r = f;
  for (int a = 0; a <= r.order_w(); ++a)
    for (int b = 0; b <= r.order_wbar(); ++b) r.at(a, b) *= c;
  return r;
}

/// Full bidegree Leibniz rule on derivative tables.
inline bidegree_jet operator*(const bidegree_jet& f, const bidegree_jet& g) {
  detail::require_same_basepoint(f, g);
  const int ow = std::min(f.order_w(), g.order_w());
  const int owb = std::min(f.order_wbar(), g.order_wbar());
  bidegree_jet r(f.basepoint(), ow, owb);
  for (int a = 0; a <= ow; ++a)
    for (int b = 0; b <= owb; ++b) {
      cplx acc = 0.0;
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j)
          acc += detail::binom(a, i) * detail::binom(b, j) * f.at(i, j) * g.at(a - i, b - j);
      r.at(a, b) = acc;
    }
  return r;
}

/// Quotient jet h = f/g, solved from f = g*h in graded order.  Requires
/// |g(0,0)| above the value floor.
inline bidegree_jet divide(const bidegree_jet& f, const bidegree_jet& g,
                           double floor = k_value_floor) {
  detail::require_same_basepoint(f, g);
  const cplx g0 = g.value();
  if (std::abs(g0) <= floor)
    fail(errc::division_near_zero,
         "jet divide: |denominator| = " + std::to_string(std::abs(g0)));
  const int ow = std::min(f.order_w(), g.order_w());
  const int owb = std::min(f.order_wbar(), g.order_wbar());
  bidegree_jet h(f.basepoint(), ow, owb);
  for (int s = 0; s <= ow + owb; ++s)
    for (int a = 0; a <= ow; ++a) {
      const int b = s - a;
      if (b < 0 || b > owb) continue;
      cplx acc = f.at(a, b);
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) {
          if (i == 0 && j == 0) continue;
          acc -= detail::binom(a, i) * detail::binom(b, j) * g.at(i, j) * h.at(a - i, b - j);
        }
      h.at(a, b) = acc / g0;
    }
  return h;
}

inline bidegree_jet operator/(const bidegree_jet& f, const bidegree_jet& g) {
  return divide(f, g);
}

/// Jet of log g.  The derivative entries come from the jets of g_w/g and
/// g_wbar/g, so only the basepoint value goes through std::log.  Requires
/// Re g(0,0) above the value floor (the in-scope uses take logs of positive
/// quantities; a violation signals evaluation at an inadmissible point).
inline bidegree_jet logarithm(const bidegree_jet& g, double floor = k_value_floor) {
  const cplx g0 = g.value();
  if (!(g0.real() > floor))
    fail(errc::log_non_positive, "jet log: Re(value) = " + std::to_string(g0.real()));
  bidegree_jet r(g.basepoint(), g.order_w(), g.order_wbar());
  r.at(0, 0) = std::log(g0);
  if (g.order_w() > 0) {
    const bidegree_jet p = divide(g.derive_w(), g, floor);  // jet of (log g)_w
    for (int a = 1; a <= g.order_w(); ++a)
      for (int b = 0; b <= std::min(g.order_wbar(), p.order_wbar()); ++b)
        if (a - 1 <= p.order_w()) r.at(a, b) = p.at(a - 1, b);
  }
  if (g.order_wbar() > 0) {
    const bidegree_jet p = divide(g.derive_wbar(), g, floor);  // jet of (log g)_wbar
    for (int b = 1; b <= g.order_wbar(); ++b)
      if (b - 1 <= p.order_wbar()) r.at(0, b) = p.at(0, b - 1);
  }
  return r;
}

}  // namespace crgeo
