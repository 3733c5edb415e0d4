#pragma once

#include <stdexcept>
#include <string>

namespace crgeo {

/// Error classes shared by the library and the CLI. The CLI maps each class
/// to a process exit status via exit_code().
enum class errc {
  // input validation
  schema_error,
  reality_violation,
  family_size_mismatch,
  // numeric domain
  division_near_zero,
  log_non_positive,
  not_in_domain,
  not_pseudoconvex,
  degenerate_gradient,
  empty_domain,
  non_hermitian_input,
  singular_metric,
  dimension_too_small,
  dimension_window_violated,
  not_immersion,
  out_of_domain,
  empty_sample_set,
  // bug signals
  internal_inconsistency,
};

constexpr int exit_code(errc c) {
  switch (c) {
    case errc::schema_error:
    case errc::reality_violation:
    case errc::family_size_mismatch:
      return 2;
    case errc::internal_inconsistency:
      return 4;
    default:
      return 3;
  }
}

constexpr const char* errc_name(errc c) {
  switch (c) {
    case errc::schema_error: return "SchemaError";
    case errc::reality_violation: return "RealityViolation";
    case errc::family_size_mismatch: return "FamilySizeMismatch";
    case errc::division_near_zero: return "DivisionNearZero";
    case errc::log_non_positive: return "LogNonPositive";
    case errc::not_in_domain: return "NotInDomain";
    case errc::not_pseudoconvex: return "NotPseudoconvex";
    case errc::degenerate_gradient: return "DegenerateGradient";
    case errc::empty_domain: return "EmptyDomain";
    case errc::non_hermitian_input: return "NonHermitianInput";
    case errc::singular_metric: return "SingularMetric";
    case errc::dimension_too_small: return "DimensionTooSmall";
    case errc::dimension_window_violated: return "DimensionWindowViolated";
    case errc::not_immersion: return "NotImmersion";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::empty_sample_set: return "EmptySampleSet";
    case errc::internal_inconsistency: return "InternalInconsistency";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace crgeo
