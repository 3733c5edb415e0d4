// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Each check restates a hand-verified value or property with its tolerance;
// random draws use fixed seeds so the gate is reproducible.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "crgeo/runner.hpp"
#include "support.hpp"

using namespace crgeo;
using testsupport::admissible_point;
using testsupport::random_cplx;
using testsupport::random_defining_function;
using testsupport::uniform;

namespace {

int failures = 0;

void criterion(int idx, const std::string& what, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = true;
  try {
    detail = body();  // empty string means pass; otherwise the failure detail
    ok = detail.empty();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("threw: ") + e.what();
  }
  std::printf("%s  %2d  %s%s%s%s\n", ok ? "PASS" : "FAIL", idx, what.c_str(),
              detail.empty() ? "" : "  [", detail.c_str(), detail.empty() ? "" : "]");
  std::fflush(stdout);
  if (!ok) ++failures;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }
double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

std::string fmt(const char* pattern, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

hermitian_defining_function quartic(double eps) {
  return hermitian_defining_function::quartic_perturbation(eps);
}

struct stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string check_time(const stopwatch& sw, double limit) {
  const double s = sw.seconds();
  if (s < limit) return "";
  return fmt("runtime %.2f s over the limit", s);
}

cmatrix random_hermitian(std::mt19937_64& rng, int n, double offdiag = 0.3) {
  cmatrix m = cmatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = uniform(rng, 0.8, 2.0);
    for (int j = 0; j < i; ++j) {
      m(i, j) = random_cplx(rng, offdiag);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

cvector random_cvector(std::mt19937_64& rng, int n, double scale = 1.0) {
  cvector v(n);
  for (int i = 0; i < n; ++i) v(i) = random_cplx(rng, scale);
  return v;
}

curvature4 random_flat_tensor(std::mt19937_64& rng, const cmatrix& g) {
  const int n = int(g.rows());
  const cmatrix C = random_hermitian(rng, n);
  const double c0 = uniform(rng, -1.0, 1.0);
  curvature4 T(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v)
          T.at(a, b, m, v) = C(a, b) * g(m, v) + C(m, b) * g(a, v) + C(a, v) * g(m, b) +
                             C(m, v) * g(a, b) +
                             c0 * (g(a, b) * g(m, v) + g(a, v) * g(m, b));
  return T;
}

holo_poly random_vanishing_poly(std::mt19937_64& rng, int nvars, int maxdeg) {
  holo_poly p;
  p.nvars = nvars;
  std::vector<monomial> monos;
  for (int d = 1; d <= maxdeg; ++d) crgeo::detail::monomials_of_degree(nvars, d, monos);
  for (const auto& m : monos)
    if (rng() % 3 == 0) p.terms[m] = random_cplx(rng);
  return p;
}

holo_map linear_slice(int n, int N) {
  std::vector<holo_poly> comps;
  for (int i = 0; i < n; ++i) comps.push_back(holo_poly::variable(n, i));
  for (int i = n; i < N; ++i) {
    holo_poly zero;
    zero.nvars = n;
    comps.push_back(zero);
  }
  return holo_map::from_components(std::move(comps));
}

holo_map veronese_curve() {
  return holo_map::from_components(
      {holo_poly::variable(1, 0), holo_poly::mono(1, {2}, 1.0)});
}

problem load_data(const char* name) {
  std::ifstream in(std::filesystem::path(CRGEO_DATA_DIR) / name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

}  // namespace

int main() {
  criterion(1, "quartic family curvature at the center: K(0) = -2 - 4e to 1e-10, under 1 s", [] {
    const stopwatch sw;
    for (const double eps : {-0.25, -0.05, 0.0, 0.1, 0.5}) {
      const double K = gauss_curvature(quartic(eps).jet(cplx(0.0), 3, 3));
      const double want = -2.0 - 4.0 * eps;
      if (std::abs(K - want) > 1e-10)
        return fmt("eps case off by %.3e", std::abs(K - want));
    }
    return check_time(sw, 1.0);
  });

  criterion(2, "sphere baseline: K = -2 and the trace-free norm <= 1e-10 on 400+ points, under 5 s",
            [] {
              const stopwatch sw;
              const auto sphere = hermitian_defining_function::sphere();
              const cmatrix h = cmatrix::Identity(2, 2);
              const auto rep = scan_domain(sphere, {cplx(0.0), 0.6, 21});
              if (rep.computed < 400) return fmt("only %.0f points computed", rep.computed);
              for (const auto& rec : rep.points) {
                if (!rec.data) continue;
                if (std::abs(rec.data->K + 2.0) > 1e-10)
                  return fmt("K off by %.3e", std::abs(rec.data->K + 2.0));
                const double s = chern_moser_invariants(sphere, h, rec.w).s_norm;
                if (s > 1e-10) return fmt("trace-free norm %.3e", s);
              }
              return check_time(sw, 5.0);
            });

  criterion(3, "two curvature routes agree to 1e-8 and jets match differences to 1e-6", [] {
    std::mt19937_64 rng(93101);
    for (int t = 0; t < 100; ++t) {
      const auto q = random_defining_function(rng, 0.05);
      const cplx w = admissible_point(rng, q);
      const auto j = q.jet(w, 3, 3);
      const double k1 = gauss_curvature(j, curvature_method::jet_generic);
      const double k2 = gauss_curvature(j, curvature_method::closed_form);
      if (rel_err(k1, k2) > 1e-8) return fmt("route disagreement %.3e", rel_err(k1, k2));
      for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
          const cplx fd = fd_partial_oracle(q, w, a, b, 1e-2);
          if (rel_err(j.at(a, b), fd) > 1e-6)
            return fmt("jet vs difference oracle %.3e", rel_err(j.at(a, b), fd));
        }
    }
    return std::string();
  });

  criterion(4, "quartic coefficient: direct and curvature-derived B agree, sign law holds", [] {
    std::mt19937_64 rng(41206);
    for (const double eps : {-0.25, -0.05, 0.0, 0.1, 0.5}) {
      const auto q = quartic(eps);
      for (int t = 0; t < 20; ++t) {
        const cplx w = admissible_point(rng, q, 0.6, /*need_gradient=*/true);
        const auto pt = webster_invariants(q.jet(w, 3, 3));
        const double b2 = b_from_curvature(pt);
        if (rel_err(pt.B, b2) > 1e-8) return fmt("B mismatch %.3e", rel_err(pt.B, b2));
        const double kk = pt.K + 2.0;
        if (std::abs(pt.B) > 1e-10 && std::abs(kk) > 1e-10 && pt.B * kk > 0.0)
          return fmt("sign law fails: B*(K+2) = %.3e", pt.B * kk);
      }
    }
    return std::string();
  });

  criterion(5, "embeddability verdicts: -0.05 excluded, +0.25 inapplicable, sphere rigid", [] {
    const grid_spec small{cplx(0.0), 0.25, 11};
    const auto neg = embeddability_verdict(scan_domain(quartic(-0.05), small), 2, 2);
    if (neg != embeddability::no_low_codim_embedding)
      return std::string("eps=-0.05 gave ") + embeddability_name(neg);
    const auto pos = embeddability_verdict(scan_domain(quartic(0.25), small), 2, 2);
    if (pos != embeddability::inapplicable)
      return std::string("eps=+0.25 gave ") + embeddability_name(pos);
    const auto sph = embeddability_verdict(
        scan_domain(hermitian_defining_function::sphere(), {cplx(0.0), 0.6, 21}), 2, 2);
    if (sph != embeddability::spherical_rigid)
      return std::string("sphere gave ") + embeddability_name(sph);
    return std::string();
  });

  criterion(6, "explicit sphere map: residual <= 1e-12 at 50 samples, 20% off => >= 1e-2", [] {
    const auto q = quartic(0.25);
    const cmatrix h = cmatrix::Identity(1, 1);
    const auto samples = hypersurface_samples(h, q, 50, 0.85);
    const auto z = holo_poly::variable(2, 0), w = holo_poly::variable(2, 1);
    const auto exact = holo_map::from_components({z, w, holo_poly::mono(2, {0, 2}, 0.5)});
    const double good = sphere_map_residual(h, q, exact, samples);
    if (good > 1e-12) return fmt("exact map residual %.3e", good);
    const auto off = holo_map::from_components({z, w, holo_poly::mono(2, {0, 2}, 0.6)});
    const double bad = sphere_map_residual(h, q, off, samples);
    if (bad < 1e-2) return fmt("perturbed residual only %.3e", bad);
    return std::string();
  });

  criterion(7, "divisibility lemma: exhaustive and random sweeps, sharp witness at k = n", [] {
    const stopwatch sw;
    // every single-pair monomial family over two variables, degree <= 3,
    // coefficients in {0, +-1, +-i}
    std::vector<monomial> monos;
    for (int d = 1; d <= 3; ++d) crgeo::detail::monomials_of_degree(2, d, monos);
    const cplx coeffs[] = {cplx(0.0), cplx(1.0), cplx(-1.0), cplx(0.0, 1.0), cplx(0.0, -1.0)};
    for (const auto& mg : monos)
      for (const cplx cg : coeffs)
        for (const auto& mf : monos)
          for (const cplx cf : coeffs) {
            holo_poly g, f;
            g.nvars = f.nvars = 2;
            if (std::abs(cg) != 0.0) g.terms[mg] = cg;
            if (std::abs(cf) != 0.0) f.terms[mf] = cf;
            const auto rep = lemma_verdict({g}, {f}, lemma_mode::exact_if_integral);
            if (rep.outcome == lemma_outcome::inconsistent)
              return std::string("inconsistent outcome on a monomial family");
            if (!rep.exact_path) return std::string("integral family missed the exact path");
          }
    // short families (k <= n-1) never produce a sharpness witness
    std::mt19937_64 rng(55001);
    for (int t = 0; t < 500; ++t) {
      const int n = 2 + int(rng() % 3);
      const int k = 1 + int(rng() % (n - 1));
      std::vector<holo_poly> gs, fs;
      for (int j = 0; j < k; ++j) {
        gs.push_back(random_vanishing_poly(rng, n, 3));
        fs.push_back(random_vanishing_poly(rng, n, 3));
      }
      const auto rep = lemma_verdict(gs, fs);
      if (rep.outcome == lemma_outcome::sharpness_witness)
        return std::string("short family produced a sharpness witness");
      if (rep.outcome == lemma_outcome::inconsistent)
        return std::string("short family flagged inconsistent");
    }
    // the boundary case k = n: g = f = z divides with quotient exactly 1
    const auto z = holo_poly::variable(1, 0);
    const auto sharp = lemma_verdict({z}, {z}, lemma_mode::exact_if_integral);
    if (sharp.outcome != lemma_outcome::sharpness_witness)
      return std::string("g = f = z gave ") + lemma_outcome_name(sharp.outcome);
    const monomial zero(1, 0);
    const auto it = sharp.witness.terms.find({zero, zero});
    if (it == sharp.witness.terms.end() || std::abs(it->second - cplx(1.0)) > 1e-12 ||
        sharp.witness.terms.size() != 1)
      return std::string("witness is not the constant 1");
    return check_time(sw, 30.0);
  });

  criterion(8, "flatness test matches the trace-free norm; space forms are Bochner-flat", [] {
    std::mt19937_64 rng(80801);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + int(rng() % 3);
      const cmatrix g = random_hermitian(rng, n, 0.2);
      curvature4 T = random_flat_tensor(rng, g);
      const bool inject = (t % 2 == 1);
      if (inject) {
        cvector p = random_cvector(rng, n);
        p(0) += cplx(1.0);
        const double B = uniform(rng, 0.5, 1.5);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int m = 0; m < n; ++m)
              for (int v = 0; v < n; ++v)
                T.at(a, b, m, v) -= B * p(a) * std::conj(p(b)) * p(m) * std::conj(p(v));
      }
      const auto fd = conformal_flat_test(T, g, 1e-8);
      const bool small = traceless_projection(T, g).max_norm() <=
                         1e-8 * std::max(1.0, T.max_norm());
      if (fd.flat != small) return std::string("flat test and trace-free norm disagree");
      if (fd.flat == inject) return std::string("flat test misclassified a tensor");
    }
    for (const int kappa : {-1, 0, 1})
      for (const int N : {2, 3, 4}) {
        const space_form_chart c{N, kappa};
        cvector z = cvector::Zero(N);
        z(0) = cplx(0.31, -0.12);
        z(N - 1) += cplx(-0.05, 0.22);
        const curvature4 R = space_form_curvature(c, z);
        const double b = bochner_tensor(R, space_form_metric(c, z)).max_norm();
        if (b > 1e-8 * std::max(1.0, R.max_norm())) return fmt("Bochner norm %.3e", b);
      }
    return std::string();
  });

  criterion(9, "Gauss equation residuals and second fundamental forms of the model maps", [] {
    std::mt19937_64 rng(90901);
    const auto slice = linear_slice(2, 3);
    const space_form_chart ball3{3, -1};
    for (int t = 0; t < 20; ++t) {
      cvector z = random_cvector(rng, 2, 0.45 / 2);
      const double r = gauss_residual(slice, ball3, z).max_norm();
      if (r > 1e-6) return fmt("slice residual %.3e", r);
      const double ii = second_fundamental(slice, ball3, z).norm();
      if (ii > 1e-12) return fmt("slice second fundamental form %.3e", ii);
    }
    const auto curve = veronese_curve();
    for (const int kappa : {-1, 0}) {
      const space_form_chart target{2, kappa};
      for (int t = 0; t < 20; ++t) {
        cvector z(1);
        z(0) = random_cplx(rng, 0.28 / 1.5);
        const double r = gauss_residual(curve, target, z).max_norm();
        if (r > 1e-6) return fmt("curve residual %.3e", r);
      }
    }
    const double ii0 = second_fundamental(curve, space_form_chart{2, 0}, cvector::Zero(1)).norm();
    if (std::abs(ii0 - 2.0) > 1e-10) return fmt("curve II at 0 is %.12f", ii0);
    return std::string();
  });

  criterion(10, "quartic gradient contraction equals the closed modulus form to 1e-10", [] {
    std::mt19937_64 rng(101001);
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + int(rng() % 3);
      const auto v = quartic_identity_check(random_hermitian(rng, n), random_cvector(rng, n),
                                            random_cvector(rng, n));
      if (std::abs(v.contraction - v.modulus_form) >
          1e-10 * std::max(1.0, std::abs(v.contraction)))
        return fmt("identity defect %.3e", std::abs(v.contraction - v.modulus_form));
    }
    return std::string();
  });

  criterion(11, "reports byte-reproduce across two runs and across 1 vs 8 threads", [] {
    const std::pair<const char*, const char*> cases[] = {
        {"sphere.json", "curvature"},     {"sphere.json", "chern-moser"},
        {"quartic_neg.json", "verdict"},  {"quartic_pos.json", "verdict"},
        {"lemma_sharp.json", "lemma"},    {"embedding_slice.json", "gauss"},
        {"sphere_map.json", "verify-map"}};
    for (const auto& [name, sub] : cases) {
      auto run_once = [&, n = name, s = sub](unsigned threads) {
        run_options opt;
        opt.subcommand = s;
        opt.threads = threads;
        njson rep = run(load_data(n), opt).report;
        rep.erase("wall_ms");
        return rep.dump();
      };
      const std::string a = run_once(1), b = run_once(1), c = run_once(8);
      if (a != b) return std::string(name) + ": two runs differ";
      if (a != c) return std::string(name) + ": thread counts differ";
    }
    return std::string();
  });

  if (failures) std::printf("%d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
