#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "crgeo/kaehler_embedding.hpp"
#include "crgeo/rigidity_lemma.hpp"
#include "crgeo/webster.hpp"

namespace crgeo {

using njson = nlohmann::json;

enum class problem_kind { revolution, lemma, embedding, sphere_map };

constexpr const char* problem_kind_name(problem_kind k) {
  switch (k) {
    case problem_kind::revolution: return "revolution";
    case problem_kind::lemma: return "lemma";
    case problem_kind::embedding: return "embedding";
    case problem_kind::sphere_map: return "sphere-map";
  }
  return "?";
}

/// Sample locations: either a deterministic generated set (count > 0) or an
/// explicit list of points.
struct sample_spec {
  int count = 0;
  double radius = 0.0;
  std::vector<cvector> points;

  bool generated() const { return count > 0; }
};

/// A parsed, validated problem file.
struct problem {
  problem_kind kind = problem_kind::revolution;
  double tol = -1.0;  // negative: not set, use the subcommand default
  int n = -1, N = -1;
  int kappa = 0;
  bool has_kappa = false;
  int source_kappa = 0;
  bool has_source_kappa = false;
  std::optional<hermitian_defining_function> q;
  std::optional<cmatrix> h;
  std::vector<holo_poly> family_g, family_f;
  lemma_mode mode = lemma_mode::floating;
  std::vector<holo_poly> map_components;
  std::optional<grid_spec> grid;
  std::optional<sample_spec> samples;
};

namespace detail {

[[noreturn]] inline void schema(const std::string& path, const std::string& why) {
  fail(errc::schema_error, path + ": " + why);
}

inline void expect_keys(const njson& o, const std::string& path,
                        std::initializer_list<const char*> keys) {
  if (!o.is_object()) schema(path, "expected an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) schema(path + "." + it.key(), "unknown field");
  }
}

inline double number_at(const njson& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema(path, "number must be finite");
  return x;
}

inline int integer_at(const njson& v, const std::string& path) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  return v.get<int>();
}

inline cplx complex_at(const njson& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) schema(path, "expected a [re, im] pair");
  return {number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]")};
}

inline hermitian_defining_function q_coeffs_at(const njson& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema(path, "expected a non-empty array of [a, b, re, im]");
  hermitian_defining_function::term_map terms;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const njson& t = v[i];
    if (!t.is_array() || t.size() != 4) schema(p, "expected [a, b, re, im]");
    const int a = integer_at(t[0], p + "[0]");
    const int b = integer_at(t[1], p + "[1]");
    const cplx c(number_at(t[2], p + "[2]"), number_at(t[3], p + "[3]"));
    if (terms.count({a, b})) schema(p, "duplicate exponent pair");
    terms[{a, b}] = c;
  }
  return hermitian_defining_function(std::move(terms));
}

inline cmatrix h_matrix_at(const njson& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema(path, "expected a non-empty array of rows");
  const int n = int(v.size());
  cmatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string pr = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || int(v[i].size()) != n) schema(pr, "matrix must be square");
    for (int j = 0; j < n; ++j)
      h(i, j) = complex_at(v[i][j], pr + "[" + std::to_string(j) + "]");
  }
  if (hermitian_defect(h) > 1e-12)
    fail(errc::reality_violation, path + ": matrix is not Hermitian");
  return h;
}

inline holo_poly poly_at(const njson& v, const std::string& path, int nvars) {
  if (!v.is_array()) schema(path, "expected an array of terms");
  holo_poly p;
  p.nvars = nvars;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string pt = path + "[" + std::to_string(i) + "]";
    const njson& t = v[i];
    if (!t.is_array() || t.size() != 3) schema(pt, "expected [[e1..en], re, im]");
    if (!t[0].is_array() || int(t[0].size()) != nvars)
      schema(pt + "[0]", "expected " + std::to_string(nvars) + " exponents");
    monomial m(size_t(nvars), 0);
    for (int e = 0; e < nvars; ++e) {
      m[size_t(e)] = integer_at(t[0][e], pt + "[0][" + std::to_string(e) + "]");
      if (m[size_t(e)] < 0) schema(pt + "[0]", "exponents must be non-negative");
    }
    const cplx c(number_at(t[1], pt + "[1]"), number_at(t[2], pt + "[2]"));
    if (p.terms.count(m)) schema(pt, "duplicate monomial");
    if (std::abs(c) != 0.0) p.terms[m] = c;
  }
  return p;
}

inline std::vector<holo_poly> poly_list_at(const njson& v, const std::string& path, int nvars) {
  if (!v.is_array() || v.empty()) schema(path, "expected a non-empty array of polynomials");
  std::vector<holo_poly> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(poly_at(v[i], path + "[" + std::to_string(i) + "]", nvars));
  return out;
}

inline grid_spec grid_at(const njson& v, const std::string& path) {
  expect_keys(v, path, {"center", "radius", "steps"});
  if (!v.contains("center") || !v.contains("radius") || !v.contains("steps"))
    schema(path, "grid needs center, radius and steps");
  grid_spec g;
  g.center = complex_at(v["center"], path + ".center");
  g.radius = number_at(v["radius"], path + ".radius");
  g.steps = integer_at(v["steps"], path + ".steps");
  if (!(g.radius > 0.0)) schema(path + ".radius", "radius must be positive");
  if (g.steps < 1 || g.steps > 4096) schema(path + ".steps", "steps must lie in 1..4096");
  return g;
}

inline sample_spec samples_at(const njson& v, const std::string& path, int point_dim) {
  expect_keys(v, path, {"count", "radius", "points"});
  sample_spec s;
  if (v.contains("points")) {
    if (v.contains("count") || v.contains("radius"))
      schema(path, "give either points or count/radius, not both");
    const njson& pts = v["points"];
    if (!pts.is_array() || pts.empty()) schema(path + ".points", "expected a non-empty array");
    for (size_t i = 0; i < pts.size(); ++i) {
      const std::string pp = path + ".points[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || int(pts[i].size()) != point_dim)
        schema(pp, "expected " + std::to_string(point_dim) + " coordinates");
      cvector z(point_dim);
      for (int c = 0; c < point_dim; ++c)
        z(c) = complex_at(pts[i][c], pp + "[" + std::to_string(c) + "]");
      s.points.push_back(std::move(z));
    }
    return s;
  }
  if (!v.contains("count") || !v.contains("radius"))
    schema(path, "samples need count and radius (or explicit points)");
  s.count = integer_at(v["count"], path + ".count");
  s.radius = number_at(v["radius"], path + ".radius");
  if (s.count < 1 || s.count > 100000) schema(path + ".count", "count must lie in 1..100000");
  if (!(s.radius > 0.0)) schema(path + ".radius", "radius must be positive");
  return s;
}

inline int kappa_at(const njson& v, const std::string& path) {
  const int k = integer_at(v, path);
  if (k < -1 || k > 1) schema(path, "kappa must be -1, 0 or 1");
  return k;
}

}  // namespace detail

inline problem parse_problem(const njson& doc) {
  using detail::schema;
  if (!doc.is_object()) schema("$", "top level must be an object");
  if (!doc.contains("kind")) schema("$.kind", "missing");
  if (!doc["kind"].is_string()) schema("$.kind", "expected a string");
  const std::string kind = doc["kind"].get<std::string>();

  problem p;
  auto common = [&] {
    if (doc.contains("tol")) {
      p.tol = detail::number_at(doc["tol"], "$.tol");
      if (!(p.tol > 0.0)) schema("$.tol", "tolerance must be positive");
    }
  };

  if (kind == "revolution") {
    p.kind = problem_kind::revolution;
    detail::expect_keys(doc, "$", {"kind", "tol", "n", "N", "q_coeffs", "h_matrix", "grid"});
    if (!doc.contains("q_coeffs")) schema("$.q_coeffs", "missing");
    common();
    p.q = detail::q_coeffs_at(doc["q_coeffs"], "$.q_coeffs");
    if (doc.contains("n")) p.n = detail::integer_at(doc["n"], "$.n");
    if (doc.contains("N")) p.N = detail::integer_at(doc["N"], "$.N");
    if (doc.contains("h_matrix")) p.h = detail::h_matrix_at(doc["h_matrix"], "$.h_matrix");
    if (doc.contains("grid")) p.grid = detail::grid_at(doc["grid"], "$.grid");
    return p;
  }

  if (kind == "lemma") {
    p.kind = problem_kind::lemma;
    detail::expect_keys(doc, "$", {"kind", "tol", "n", "families", "mode"});
    if (!doc.contains("n")) schema("$.n", "missing");
    common();
    p.n = detail::integer_at(doc["n"], "$.n");
    if (p.n < 1 || p.n > 8) schema("$.n", "variable count must lie in 1..8");
    if (!doc.contains("families")) schema("$.families", "missing");
    detail::expect_keys(doc["families"], "$.families", {"g", "f"});
    if (!doc["families"].contains("g") || !doc["families"].contains("f"))
      schema("$.families", "needs arrays g and f");
    p.family_g = detail::poly_list_at(doc["families"]["g"], "$.families.g", p.n);
    p.family_f = detail::poly_list_at(doc["families"]["f"], "$.families.f", p.n);
    if (doc.contains("mode")) {
      const std::string m = doc["mode"].is_string() ? doc["mode"].get<std::string>() : "";
      if (m == "floating")
        p.mode = lemma_mode::floating;
      else if (m == "exact-if-integral")
        p.mode = lemma_mode::exact_if_integral;
      else if (m == "exact")
        p.mode = lemma_mode::exact;
      else
        schema("$.mode", "expected floating, exact-if-integral or exact");
    }
    return p;
  }

  if (kind == "embedding") {
    p.kind = problem_kind::embedding;
    detail::expect_keys(doc, "$",
                        {"kind", "tol", "n", "N", "kappa", "source_kappa", "map_coeffs",
                         "samples"});
    for (const char* req : {"n", "N", "kappa", "map_coeffs", "samples"})
      if (!doc.contains(req)) schema(std::string("$.") + req, "missing");
    common();
    p.n = detail::integer_at(doc["n"], "$.n");
    p.N = detail::integer_at(doc["N"], "$.N");
    if (p.n < 1 || p.N < p.n) schema("$", "need 1 <= n <= N");
    p.kappa = detail::kappa_at(doc["kappa"], "$.kappa");
    p.has_kappa = true;
    if (doc.contains("source_kappa")) {
      p.source_kappa = detail::kappa_at(doc["source_kappa"], "$.source_kappa");
      p.has_source_kappa = true;
    } else {
      p.source_kappa = p.kappa;
    }
    p.map_components = detail::poly_list_at(doc["map_coeffs"], "$.map_coeffs", p.n);
    if (int(p.map_components.size()) != p.N)
      schema("$.map_coeffs", "expected one polynomial per target coordinate");
    p.samples = detail::samples_at(doc["samples"], "$.samples", p.n);
    return p;
  }

  if (kind == "sphere-map") {
    p.kind = problem_kind::sphere_map;
    detail::expect_keys(doc, "$",
                        {"kind", "tol", "h_matrix", "q_coeffs", "map_coeffs", "samples"});
    for (const char* req : {"h_matrix", "q_coeffs", "map_coeffs", "samples"})
      if (!doc.contains(req)) schema(std::string("$.") + req, "missing");
    common();
    p.h = detail::h_matrix_at(doc["h_matrix"], "$.h_matrix");
    p.q = detail::q_coeffs_at(doc["q_coeffs"], "$.q_coeffs");
    const int zdim = int(p.h->rows());
    p.map_components = detail::poly_list_at(doc["map_coeffs"], "$.map_coeffs", zdim + 1);
    p.samples = detail::samples_at(doc["samples"], "$.samples", zdim + 1);
    return p;
  }

  schema("$.kind", "expected revolution, lemma, embedding or sphere-map");
}

inline problem parse_problem_text(const std::string& text) {
  njson doc;
  try {
    doc = njson::parse(text);
  } catch (const njson::parse_error& e) {
    fail(errc::schema_error, std::string("not valid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

namespace detail {

inline njson complex_json(cplx c) { return njson::array({c.real(), c.imag()}); }

inline njson poly_json(const holo_poly& p) {
  njson terms = njson::array();
  for (const auto& [m, c] : p.terms) {
    njson exps = njson::array();
    for (int e : m) exps.push_back(e);
    terms.push_back(njson::array({exps, c.real(), c.imag()}));
  }
  return terms;
}

inline njson h_matrix_json(const cmatrix& h) {
  njson rows = njson::array();
  for (int i = 0; i < h.rows(); ++i) {
    njson row = njson::array();
    for (int j = 0; j < h.cols(); ++j) row.push_back(complex_json(h(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Canonical serialization; parsing the result reproduces the problem.
inline njson problem_to_json(const problem& p) {
  njson doc;
  doc["kind"] = problem_kind_name(p.kind);
  if (p.tol > 0.0) doc["tol"] = p.tol;
  if (p.kind == problem_kind::revolution) {
    njson coeffs = njson::array();
    for (const auto& [ab, c] : p.q->coefficients())
      coeffs.push_back(njson::array({ab.first, ab.second, c.real(), c.imag()}));
    doc["q_coeffs"] = std::move(coeffs);
    if (p.n >= 0) doc["n"] = p.n;
    if (p.N >= 0) doc["N"] = p.N;
    if (p.h) doc["h_matrix"] = detail::h_matrix_json(*p.h);
    if (p.grid) {
      doc["grid"] = {{"center", detail::complex_json(p.grid->center)},
                     {"radius", p.grid->radius},
                     {"steps", p.grid->steps}};
    }
  } else if (p.kind == problem_kind::lemma) {
    doc["n"] = p.n;
    njson g = njson::array(), f = njson::array();
    for (const auto& q : p.family_g) g.push_back(detail::poly_json(q));
    for (const auto& q : p.family_f) f.push_back(detail::poly_json(q));
    doc["families"] = {{"g", std::move(g)}, {"f", std::move(f)}};
    if (p.mode == lemma_mode::exact_if_integral) doc["mode"] = "exact-if-integral";
    if (p.mode == lemma_mode::exact) doc["mode"] = "exact";
  } else {
    if (p.kind == problem_kind::embedding) {
      doc["n"] = p.n;
      doc["N"] = p.N;
      doc["kappa"] = p.kappa;
      if (p.has_source_kappa) doc["source_kappa"] = p.source_kappa;
    } else {
      doc["h_matrix"] = detail::h_matrix_json(*p.h);
      njson coeffs = njson::array();
      for (const auto& [ab, c] : p.q->coefficients())
        coeffs.push_back(njson::array({ab.first, ab.second, c.real(), c.imag()}));
      doc["q_coeffs"] = std::move(coeffs);
    }
    njson comps = njson::array();
    for (const auto& q : p.map_components) comps.push_back(detail::poly_json(q));
    doc["map_coeffs"] = std::move(comps);
    njson s;
    if (p.samples->generated()) {
      s["count"] = p.samples->count;
      s["radius"] = p.samples->radius;
    } else {
      njson pts = njson::array();
      for (const auto& z : p.samples->points) {
        njson pt = njson::array();
        for (int c = 0; c < z.size(); ++c) pt.push_back(detail::complex_json(z(c)));
        pts.push_back(std::move(pt));
      }
      s["points"] = std::move(pts);
    }
    doc["samples"] = std::move(s);
  }
  return doc;
}

}  // namespace crgeo
