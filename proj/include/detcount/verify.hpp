#pragma once

#include <string>
#include <vector>

namespace detcount {

// Cross-module verification suites behind the `verify` CLI command.  The fast
// level runs the cheap invariants (counting oracles, exponential sums, the
// smooth cutoff, small Poisson checks) in well under a minute; the full level
// adds the smoothed-count decomposition, a stationary-phase grid, and the
// error-exponent scan.

enum class VerifyLevel { Fast, Full };

struct VerifyItem {
    std::string name;
    bool pass = false;
    std::string detail; // one-line measurement or failure reason
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<VerifyItem> items;
    bool all_pass = false;
};

// csv_path, when nonempty, receives the scan rows of the full level as a
// summary CSV; ignored at the fast level.
VerifyReport run_verification_suite(VerifyLevel level, const std::string& csv_path = "");

} // namespace detcount
