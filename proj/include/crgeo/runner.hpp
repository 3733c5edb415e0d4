#pragma once

#include <chrono>
#include <cstdio>
#include <random>

#include "crgeo/chern_moser.hpp"
#include "crgeo/problem.hpp"
#include "crgeo/version.hpp"

namespace crgeo {

struct run_options {
  std::string subcommand;
  std::optional<grid_spec> grid;  // --grid override, wins over the file grid
  double tol = -1.0;              // --tol override, wins over the file tol
  unsigned threads = 1;
  int n = -1, N = -1;  // --n/--N overrides for the verdict subcommand
};

struct run_result {
  njson report;
  int exit_status = 0;
};

inline problem_kind subcommand_kind(const std::string& s) {
  if (s == "curvature" || s == "verdict" || s == "chern-moser") return problem_kind::revolution;
  if (s == "lemma") return problem_kind::lemma;
  if (s == "gauss") return problem_kind::embedding;
  if (s == "verify-map") return problem_kind::sphere_map;
  fail(errc::schema_error, "unknown subcommand: " + s);
}

namespace detail {

inline grid_spec scan_grid(const problem& p, const run_options& o) {
  grid_spec g;
  if (o.grid)
    g = *o.grid;
  else if (p.grid)
    g = *p.grid;
  else
    fail(errc::schema_error, "no scan grid: give one in the problem file or with --grid");
  if (!(g.radius > 0.0)) fail(errc::schema_error, "grid radius must be positive");
  if (g.steps < 1 || g.steps > 4096) fail(errc::schema_error, "grid steps must lie in 1..4096");
  return g;
}

inline void point_fields(njson& row, const webster_point& d) {
  row["q"] = d.q;
  row["h"] = d.h;
  row["k"] = d.k;
  row["Q"] = d.Q.real();
  row["A"] = d.A.real();
  row["B"] = d.B;
  row["K"] = d.K;
}

inline njson scan_aggregates(const domain_scan_report& rep) {
  njson a;
  a["k_min"] = rep.k_min;
  a["k_max"] = rep.k_max;
  a["computed"] = rep.computed;
  a["skipped_outside_domain"] = rep.skipped_outside_domain;
  a["skipped_degenerate_gradient"] = rep.skipped_degenerate_gradient;
  a["skipped_not_pseudoconvex"] = rep.skipped_not_pseudoconvex;
  return a;
}

/// Rejection sampling in the complex ball; the fixed seed keeps reports
/// byte-reproducible across runs and machines.
inline std::vector<cvector> ball_samples(int dim, int count, double radius) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<cvector> out;
  out.reserve(size_t(count));
  while (int(out.size()) < count) {
    cvector z(dim);
    for (int i = 0; i < dim; ++i) z(i) = cplx(u(rng), u(rng));
    if (z.norm() <= radius) out.push_back(std::move(z));
  }
  return out;
}

inline njson vector_json(const cvector& z) {
  njson out = njson::array();
  for (int c = 0; c < z.size(); ++c) out.push_back(complex_json(z(c)));
  return out;
}

}  // namespace detail

inline run_result run(const problem& p, const run_options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (subcommand_kind(opt.subcommand) != p.kind)
    fail(errc::schema_error, "subcommand " + opt.subcommand + " does not apply to a " +
                                 std::string(problem_kind_name(p.kind)) + " problem");

  const double tol_set = opt.tol > 0.0 ? opt.tol : p.tol;
  auto tol_or = [&](double dflt) { return tol_set > 0.0 ? tol_set : dflt; };

  njson report;
  report["version"] = k_version;
  report["input_echo"] = problem_to_json(p);
  njson points = njson::array();
  njson aggregates = njson::object();
  std::string verdict;
  int status = 0;

  if (opt.subcommand == "curvature" || opt.subcommand == "verdict") {
    const grid_spec grid = detail::scan_grid(p, opt);
    const domain_scan_report rep = scan_domain(*p.q, grid, {}, opt.threads);
    for (const auto& rec : rep.points) {
      njson row;
      row["w"] = detail::complex_json(rec.w);
      if (rec.data)
        detail::point_fields(row, *rec.data);
      else
        row["skip_reason"] = skip_reason_name(*rec.skip);
      points.push_back(std::move(row));
    }
    aggregates = detail::scan_aggregates(rep);
    if (opt.subcommand == "curvature") {
      verdict = "Computed";
    } else {
      const int n = opt.n >= 0 ? opt.n : p.n;
      const int N = opt.N >= 0 ? opt.N : p.N;
      if (n < 0 || N < 0)
        fail(errc::schema_error, "verdict needs n and N, as problem fields or --n/--N");
      aggregates["n"] = n;
      aggregates["N"] = N;
      verdict = embeddability_name(embeddability_verdict(rep, n, N, tol_or(1e-6)));
    }
  } else if (opt.subcommand == "chern-moser") {
    if (!p.h) fail(errc::schema_error, "chern-moser needs an h_matrix in the problem file");
    require_metric(*p.h);
    const grid_spec grid = detail::scan_grid(p, opt);
    const domain_scan_report rep = scan_domain(*p.q, grid, {}, opt.threads);
    std::vector<double> s_norm(rep.points.size(), 0.0);
    parallel_for(rep.points.size(), opt.threads, [&](size_t idx) {
      if (rep.points[idx].data)
        s_norm[idx] = chern_moser_invariants(*p.q, *p.h, rep.points[idx].w).s_norm;
    });
    double s_max = 0.0;
    for (size_t idx = 0; idx < rep.points.size(); ++idx) {
      const auto& rec = rep.points[idx];
      njson row;
      row["w"] = detail::complex_json(rec.w);
      if (rec.data) {
        detail::point_fields(row, *rec.data);
        row["s_norm"] = s_norm[idx];
        s_max = std::max(s_max, s_norm[idx]);
      } else {
        row["skip_reason"] = skip_reason_name(*rec.skip);
      }
      points.push_back(std::move(row));
    }
    aggregates = detail::scan_aggregates(rep);
    aggregates["s_norm_max"] = s_max;
    verdict = "Computed";
  } else if (opt.subcommand == "lemma") {
    const lemma_report rep = lemma_verdict(p.family_g, p.family_f, p.mode, tol_or(1e-9));
    verdict = lemma_outcome_name(rep.outcome);
    aggregates["residual"] = rep.residual;
    aggregates["exact_path"] = rep.exact_path;
    njson witness = njson::array();
    for (const auto& [ij, c] : rep.witness.terms) {
      njson I = njson::array(), J = njson::array();
      for (int e : ij.first) I.push_back(e);
      for (int e : ij.second) J.push_back(e);
      witness.push_back(njson::array({std::move(I), std::move(J), c.real(), c.imag()}));
    }
    aggregates["witness"] = std::move(witness);
    if (rep.outcome == lemma_outcome::inconsistent) status = 4;
  } else if (opt.subcommand == "gauss") {
    const holo_map f = holo_map::from_components(p.map_components);
    const space_form_chart target{p.N, p.kappa};
    const space_form_chart source{p.n, p.source_kappa};
    check_chart(target);
    check_chart(source);
    const std::vector<cvector> zs =
        p.samples->generated()
            ? detail::ball_samples(p.n, p.samples->count, p.samples->radius)
            : p.samples->points;
    const geodesic_report rep = totally_geodesic_verdict(f, target, source, zs, tol_or(1e-6));
    std::vector<double> ii_norm(zs.size(), 0.0), gauss_max(zs.size(), 0.0);
    parallel_for(zs.size(), opt.threads, [&](size_t i) {
      ii_norm[i] = second_fundamental(f, target, zs[i]).norm();
      gauss_max[i] = gauss_residual(f, target, zs[i]).max_norm();
    });
    double worst_ii = 0.0, worst_gauss = 0.0;
    for (size_t i = 0; i < zs.size(); ++i) {
      njson row;
      row["z"] = detail::vector_json(zs[i]);
      row["ii_norm"] = ii_norm[i];
      row["gauss_residual"] = gauss_max[i];
      points.push_back(std::move(row));
      worst_ii = std::max(worst_ii, ii_norm[i]);
      worst_gauss = std::max(worst_gauss, gauss_max[i]);
    }
    verdict = geodesic_verdict_name(rep.verdict);
    if (!rep.reason.empty()) aggregates["reason"] = rep.reason;
    aggregates["conformal_k"] = rep.conformal_k;
    aggregates["conformal_deviation"] = rep.conformal_deviation;
    aggregates["max_ii_norm"] = worst_ii;
    aggregates["max_gauss_residual"] = worst_gauss;
    if (rep.verdict == geodesic_verdict::violation_suspected) status = 4;
  } else {  // verify-map
    const holo_map F = holo_map::from_components(p.map_components);
    std::vector<surface_sample> samples;
    if (p.samples->generated()) {
      samples = hypersurface_samples(*p.h, *p.q, p.samples->count, p.samples->radius);
    } else {
      for (const auto& zw : p.samples->points) {
        surface_sample s;
        s.z = zw.head(zw.size() - 1);
        s.w = zw(zw.size() - 1);
        samples.push_back(std::move(s));
      }
    }
    double worst = 0.0;
    for (const auto& s : samples) {
      const double r = sphere_map_residual(*p.h, *p.q, F, {s});
      njson row;
      row["z"] = detail::vector_json(s.z);
      row["w"] = detail::complex_json(s.w);
      row["residual"] = r;
      points.push_back(std::move(row));
      worst = std::max(worst, r);
    }
    aggregates["max_residual"] = worst;
    aggregates["samples"] = int(samples.size());
    verdict = worst <= tol_or(1e-10) ? "MapVerified" : "MapDeviates";
  }

  report["verdict"] = verdict;
  report["aggregates"] = std::move(aggregates);
  report["points"] = std::move(points);
  const auto t1 = std::chrono::steady_clock::now();
  report["wall_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return {std::move(report), status};
}

/// Fixed-column CSV view of a grid-scan report.  Numeric fields are empty on
/// skipped rows; skip_reason is empty on computed rows.
inline std::string report_to_csv(const njson& report, const std::string& subcommand) {
  if (subcommand != "curvature" && subcommand != "chern-moser")
    fail(errc::schema_error, "csv output only applies to curvature and chern-moser scans");
  const bool with_s = subcommand == "chern-moser";
  std::string out = "re(w),im(w),q,h,k,Q,A,B,K";
  if (with_s) out += ",s_norm";
  out += ",skip_reason\n";
  auto num = [](const njson& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return std::string(buf);
  };
  for (const auto& row : report.at("points")) {
    std::vector<std::string> fields;
    fields.push_back(num(row.at("w")[0]));
    fields.push_back(num(row.at("w")[1]));
    const bool skipped = row.contains("skip_reason");
    for (const char* key : {"q", "h", "k", "Q", "A", "B", "K"})
      fields.push_back(skipped ? "" : num(row.at(key)));
    if (with_s) fields.push_back(skipped ? "" : num(row.at("s_norm")));
    fields.push_back(skipped ? row.at("skip_reason").get<std::string>() : "");
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace crgeo
