#pragma once

#include <stdexcept>
#include <string>

namespace sturm {

// Failure taxonomy shared by the whole library. The CLI maps the config
// class to exit status 2 and everything else to 1; hard audit failures are
// reported through return values, not exceptions.
enum class errc {
  invalid_quotient,
  unsupported_aperiodic,
  coupling_too_small,
  invalid_config,
  quotients_exhausted,
  invalid_label,
  domain_violation,
  bracket_failure,
  precision_exhausted,
  not_contractive,
  degenerate_single_band,
  no_root_in_unit_interval,
  insufficient_depth,
  order_unavailable,
  inadmissible_path,
  zero_derivative,
  io_failure,
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::invalid_quotient: return "InvalidQuotient";
    case errc::unsupported_aperiodic: return "UnsupportedAperiodic";
    case errc::coupling_too_small: return "CouplingTooSmall";
    case errc::invalid_config: return "InvalidConfig";
    case errc::quotients_exhausted: return "QuotientsExhausted";
    case errc::invalid_label: return "InvalidLabel";
    case errc::domain_violation: return "DomainViolation";
    case errc::bracket_failure: return "BracketFailure";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::not_contractive: return "NotContractive";
    case errc::degenerate_single_band: return "DegenerateSingleBand";
    case errc::no_root_in_unit_interval: return "NoRootInUnitInterval";
    case errc::insufficient_depth: return "InsufficientDepth";
    case errc::order_unavailable: return "OrderUnavailable";
    case errc::inadmissible_path: return "InadmissiblePath";
    case errc::zero_derivative: return "ZeroDerivative";
    case errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

// Errors a user can fix by changing the run configuration.
inline bool errc_is_config(errc c) noexcept {
  switch (c) {
    case errc::invalid_quotient:
    case errc::unsupported_aperiodic:
    case errc::coupling_too_small:
    case errc::invalid_config:
    case errc::quotients_exhausted:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace sturm
