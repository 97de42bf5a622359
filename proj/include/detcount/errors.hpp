#pragma once

#include <stdexcept>
#include <string>

namespace detcount {

// One error category per failure mode the library can signal.  CLI maps these
// to process exit codes: bad_config -> 2, the budget family -> 3, audit -> 1.
enum class errc {
    not_invertible,
    limit_exceeded,
    memory_budget_exceeded,
    budget_exceeded,
    quadrature_not_converged,
    not_converged,
    audit_failure,
    stationary_point_outside,
    bad_h_range,
    invalid_variant,
    degenerate_fit,
    bad_config,
    io_error,
};

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

} // namespace detcount
