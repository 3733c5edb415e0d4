#include <catch2/catch_amalgamated.hpp>

#include "crgeo/webster.hpp"
#include "support.hpp"

using crgeo::cplx;
using crgeo::curvature_method;
using crgeo::hermitian_defining_function;

TEST_CASE("curvature of the sphere slice is -2 everywhere") {
  const auto q = hermitian_defining_function::sphere();
  for (const cplx w : {cplx(0.0), cplx(0.5, 0.0), cplx(-0.2, 0.6), cplx(0.0, 0.9)}) {
    const double K = crgeo::gauss_curvature(q.jet(w, 3, 3));
    CHECK(std::abs(K + 2.0) < 1e-12);
  }
}

TEST_CASE("curvature of the quartic family at the center") {
  for (const double eps : {-0.25, -0.05, 0.0, 0.1, 0.5}) {
    const auto q = hermitian_defining_function::quartic_perturbation(eps);
    // q_w = 0 at w = 0: only the jet-generic route applies there
    const double K = crgeo::gauss_curvature(q.jet(cplx(0.0), 3, 3));
    CHECK(std::abs(K - (-2.0 - 4.0 * eps)) < 1e-10);
  }
}

TEST_CASE("both curvature routes agree on random polynomials") {
  std::mt19937_64 rng(90210);
  for (int t = 0; t < 100; ++t) {
    const auto q = testsupport::random_defining_function(rng, 0.05);
    const cplx w = testsupport::admissible_point(rng, q);
    const auto j = q.jet(w, 3, 3);
    const double kj = crgeo::gauss_curvature(j, curvature_method::jet_generic);
    const double kc = crgeo::gauss_curvature(j, curvature_method::closed_form);
    CHECK(std::abs(kj - kc) <= 1e-8 * std::max(1.0, std::abs(kj)));
  }
}

TEST_CASE("curvature outside the domain is rejected") {
  const auto q = hermitian_defining_function::sphere();
  try {
    crgeo::gauss_curvature(q.jet(cplx(2.0, 0.0), 3, 3));
    FAIL("expected not_in_domain");
  } catch (const crgeo::error& e) {
    CHECK(e.code() == crgeo::errc::not_in_domain);
  }
}

TEST_CASE("invariants of the sphere slice at w = 1/2") {
  const auto q = hermitian_defining_function::sphere();
  const auto p = crgeo::webster_invariants(q.jet(cplx(0.5, 0.0), 3, 3));
  CHECK(p.q == Catch::Approx(-0.75).margin(1e-15));
  CHECK(std::abs(p.Q - cplx(4.0)) < 1e-12);
  CHECK(std::abs(p.A - cplx(-1.0)) < 1e-12);
  CHECK(p.h == Catch::Approx(16.0 / 9.0).epsilon(1e-12));
  CHECK(p.k == Catch::Approx(1.0).margin(1e-12));
  CHECK(p.K == Catch::Approx(-2.0).margin(1e-12));
  CHECK(std::abs(p.B) < 1e-12);
}

TEST_CASE("invariants need a non-degenerate gradient") {
  const auto q = hermitian_defining_function::sphere();
  try {
    crgeo::webster_invariants(q.jet(cplx(0.0), 3, 3));
    FAIL("expected degenerate_gradient");
  } catch (const crgeo::error& e) {
    CHECK(e.code() == crgeo::errc::degenerate_gradient);
  }
}

TEST_CASE("k stays equal to h q^2") {
  std::mt19937_64 rng(5150);
  for (int t = 0; t < 50; ++t) {
    const auto q = testsupport::random_defining_function(rng, 0.05);
    const cplx w = testsupport::admissible_point(rng, q, 0.6, /*need_gradient=*/true);
    const auto p = crgeo::webster_invariants(q.jet(w, 3, 3));
    CHECK(std::abs(p.k - p.h * p.q * p.q) <= 1e-12 * std::max(1.0, std::abs(p.k)));
  }
}

TEST_CASE("first-order and curvature routes to B agree, and B tracks -(K+2)") {
  std::mt19937_64 rng(51244);
  int sign_checked = 0;
  for (int t = 0; t < 100; ++t) {
    const auto q = (t % 2 == 0)
                       ? hermitian_defining_function::quartic_perturbation(
                             std::vector<double>{-0.25, -0.05, 0.1, 0.5}[t % 4])
                       : testsupport::random_defining_function(rng, 0.05);
    const cplx w = testsupport::admissible_point(rng, q, 0.6, /*need_gradient=*/true);
    const auto p = crgeo::webster_invariants(q.jet(w, 3, 3));
    const double b2 = crgeo::b_from_curvature(p);
    CHECK(std::abs(p.B - b2) <= 1e-8 * std::max(1.0, std::abs(p.B)));
    // sign law B <= 0 iff K + 2 >= 0, outside a small dead band
    if (std::abs(p.K + 2.0) > 1e-10 && std::abs(p.B) > 1e-10) {
      ++sign_checked;
      CHECK(((p.B < 0.0) == (p.K + 2.0 > 0.0)));
    }
  }
  CHECK(sign_checked > 50);
}

TEST_CASE("scan of the sphere slice skips only the center") {
  const auto q = hermitian_defining_function::sphere();
  crgeo::grid_spec grid{cplx(0.0), 0.6, 21};
  const auto rep = crgeo::scan_domain(q, grid);
  CHECK(rep.computed == 21 * 21 - 1);
  CHECK(rep.skipped_degenerate_gradient == 1);
  CHECK(rep.skipped_outside_domain == 0);
  CHECK(std::abs(rep.k_min + 2.0) < 1e-10);
  CHECK(std::abs(rep.k_max + 2.0) < 1e-10);
}

TEST_CASE("scan classifies points outside the domain") {
  const auto q = hermitian_defining_function::sphere();
  crgeo::grid_spec grid{cplx(0.0), 1.2, 9};
  const auto rep = crgeo::scan_domain(q, grid);
  CHECK(rep.skipped_outside_domain > 0);
  CHECK(rep.computed > 0);
  int recount_outside = 0, recount_computed = 0;
  for (const auto& r : rep.points) {
    if (r.data) ++recount_computed;
    else if (*r.skip == crgeo::skip_reason::outside_domain) ++recount_outside;
  }
  CHECK(recount_computed == rep.computed);
  CHECK(recount_outside == rep.skipped_outside_domain);
}

TEST_CASE("scan far outside the domain reports an empty domain") {
  const auto q = hermitian_defining_function::sphere();
  crgeo::grid_spec grid{cplx(5.0, 5.0), 0.5, 5};
  try {
    crgeo::scan_domain(q, grid);
    FAIL("expected empty_domain");
  } catch (const crgeo::error& e) {
    CHECK(e.code() == crgeo::errc::empty_domain);
  }
}

TEST_CASE("scan results do not depend on the thread count") {
  const auto q = hermitian_defining_function::quartic_perturbation(0.1);
  crgeo::grid_spec grid{cplx(0.05, -0.02), 0.4, 17};
  const auto a = crgeo::scan_domain(q, grid, {}, 1);
  const auto b = crgeo::scan_domain(q, grid, {}, 8);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].data.has_value() == b.points[i].data.has_value());
    if (a.points[i].data)
      CHECK(a.points[i].data->K == b.points[i].data->K);  // bitwise equal
  }
}

TEST_CASE("embeddability verdicts on the model scans") {
  const auto sphere_rep =
      crgeo::scan_domain(hermitian_defining_function::sphere(), {cplx(0.0), 0.6, 21});
  CHECK(crgeo::embeddability_verdict(sphere_rep, 2, 2) ==
        crgeo::embeddability::spherical_rigid);

  const auto above_rep = crgeo::scan_domain(
      hermitian_defining_function::quartic_perturbation(-0.05), {cplx(0.0), 0.25, 15});
  CHECK(crgeo::embeddability_verdict(above_rep, 2, 2) ==
        crgeo::embeddability::no_low_codim_embedding);

  const auto below_rep = crgeo::scan_domain(
      hermitian_defining_function::quartic_perturbation(0.25), {cplx(0.0), 0.25, 15});
  CHECK(crgeo::embeddability_verdict(below_rep, 2, 2) == crgeo::embeddability::inapplicable);

  // window failure: N > 2n-2
  CHECK(crgeo::embeddability_verdict(sphere_rep, 2, 3) == crgeo::embeddability::inapplicable);
}

TEST_CASE("adding conforming points never flips a rigid verdict") {
  // monotonicity: a NoLowCodimEmbedding verdict always exhibits a point with
  // K > -2 + tol; extending a rigid scan by points inside the band keeps it rigid.
  const auto q = hermitian_defining_function::sphere();
  auto rep = crgeo::scan_domain(q, {cplx(0.0), 0.6, 11});
  REQUIRE(crgeo::embeddability_verdict(rep, 2, 2) == crgeo::embeddability::spherical_rigid);

  auto extended = rep;
  crgeo::scan_record extra;
  extra.w = cplx(0.05, 0.0);
  extra.data = crgeo::webster_invariants(q.jet(extra.w, 3, 3));
  extended.points.push_back(extra);
  extended.computed += 1;
  extended.k_min = std::min(extended.k_min, extra.data->K);
  extended.k_max = std::max(extended.k_max, extra.data->K);
  CHECK(crgeo::embeddability_verdict(extended, 2, 2) == crgeo::embeddability::spherical_rigid);

  // an off-band point flips the verdict and is itself the witness
  auto flipped = rep;
  crgeo::scan_record odd;
  odd.w = cplx(0.1, 0.0);
  odd.data = crgeo::webster_invariants(q.jet(odd.w, 3, 3));
  odd.data->K = -1.9;
  flipped.points.push_back(odd);
  flipped.computed += 1;
  flipped.k_max = std::max(flipped.k_max, odd.data->K);
  const auto v = crgeo::embeddability_verdict(flipped, 2, 2);
  CHECK(v == crgeo::embeddability::no_low_codim_embedding);
  bool witness = false;
  for (const auto& r : flipped.points)
    if (r.data && r.data->K > -2.0 + 1e-6) witness = true;
  CHECK(witness);
}
