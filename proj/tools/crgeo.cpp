#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "crgeo/runner.hpp"

namespace {

crgeo::grid_spec parse_grid_flag(const std::string& s) {
  double cx = 0.0, cy = 0.0, r = 0.0;
  int steps = 0;
  char trailing = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%d%c", &cx, &cy, &r, &steps, &trailing) != 4)
    crgeo::fail(crgeo::errc::schema_error, "--grid expects cx,cy,r,steps");
  return {crgeo::cplx(cx, cy), r, steps};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) crgeo::fail(crgeo::errc::schema_error, "cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-Hermitian curvature scans and Kaehler rigidity checks"};
  app.require_subcommand(1);

  std::string input, format = "json", grid_arg;
  double tol = -1.0;
  unsigned threads = 1;
  int n = -1, N = -1;

  const std::pair<const char*, const char*> subs[] = {
      {"curvature", "scan Webster invariants of a surface of revolution over a grid"},
      {"verdict", "scan curvature and decide low-codimension sphere embeddability"},
      {"chern-moser", "scan with the trace-free curvature norm added per point"},
      {"lemma", "divide a Hermitian family sum by |z|^2 and classify the quotient"},
      {"gauss", "test a holomorphic map between space forms for total geodesy"},
      {"verify-map", "check that a map sends a circular hypersurface into the sphere"},
  };
  for (const auto& [name, desc] : subs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--input", input, "problem file (JSON)")->required();
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--grid", grid_arg, "scan lattice override: cx,cy,r,steps");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", threads, "worker threads for scans");
    sub->add_option("--n", n, "source dimension override (verdict)");
    sub->add_option("--N", N, "target dimension override (verdict)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 0 is --help/--version
  }

  try {
    const crgeo::problem prob = crgeo::parse_problem_text(slurp(input));

    crgeo::run_options opt;
    opt.subcommand = app.get_subcommands().front()->get_name();
    opt.tol = tol;
    opt.threads = threads;
    opt.n = n;
    opt.N = N;
    if (!grid_arg.empty()) opt.grid = parse_grid_flag(grid_arg);

    const crgeo::run_result res = crgeo::run(prob, opt);
    if (format == "csv")
      std::cout << crgeo::report_to_csv(res.report, opt.subcommand);
    else
      std::cout << res.report.dump(2) << '\n';
    return res.exit_status;
  } catch (const crgeo::error& e) {
    std::cerr << e.what() << '\n';
    return crgeo::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}
