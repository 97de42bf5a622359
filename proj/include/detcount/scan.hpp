#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "detcount/counting.hpp"

namespace detcount {

// Error-exponent scan: on a geometric grid of box sizes X, compare the exact
// all-signs count against its leading term (16/zeta(2)) (sigma(|r|)/|r|) X^2
// and fit the growth rate of log10 |exact - main| against log10 X.  The
// proved error exponent is 3/2 + eps for |r| <= X^(1/3); the trivial scale is
// X^2, so any fitted slope meaningfully below 2 shows genuine cancellation.

struct ScanConfig {
    std::vector<i64> r_values;
    u64 x_min = 256;
    u64 x_max = 4096;
    double ratio = 2.0;
    CountAlgorithm algorithm = CountAlgorithm::DivisorSieve;
    // CSV destination; empty means no file is written.
    std::string output;
    // Recorded into the run for reproducibility bookkeeping; the scan itself
    // is deterministic and does not draw random numbers.
    u64 seed = 0;
    // 0 picks the hardware concurrency.
    unsigned workers = 0;
};

struct ScanRow {
    i64 r = 0;
    u64 X = 0;
    u64 exact_count = 0;
    double main_term = 0.0;
    double error = 0.0; // exact - main, to full double precision
    double abs_error = 0.0;
    double log10_X = 0.0;
    double log10_abs_error = 0.0; // -inf when the error vanishes exactly
};

struct ScanOutcome {
    // Grid order: r_values order outer, ascending X inner.
    std::vector<ScanRow> rows;
    std::vector<std::pair<i64, double>> slope_by_r;
};

// Rounded geometric grid x_min, x_min*ratio, ... clipped to x_max, with
// duplicates (possible for ratios close to 1) removed.
std::vector<u64> geometric_grid(u64 x_min, u64 x_max, double ratio);

// Least-squares slope of log10|error| vs log10 X over the rows with nonzero
// error; throws degenerate_fit when fewer than 3 such rows remain.
double fit_log_slope(std::span<const ScanRow> rows);

// Computes all grid cells (data-parallel across workers, assembled in grid
// order), fits one slope per r, and writes the CSV when config.output is set.
ScanOutcome scan_error_exponent(const ScanConfig& config);

// CSV with the exact header
//   r,X,exact,main,error,abs_error,log10_X,log10_abs_error
// LF line endings and reals at 17 significant digits, so files round-trip
// bit-exactly and identical configs produce byte-identical output.
std::string render_csv(std::span<const ScanRow> rows);
void emit_csv(std::span<const ScanRow> rows, const std::string& path);

// Reads a JSON config {r_values, x_min, x_max, ratio, algorithm, output,
// seed} and applies key=value overrides (r_values accepts a comma list).
// Unknown keys, malformed values, or invariant violations raise bad_config;
// unreadable files raise io_error.
ScanConfig load_scan_config(const std::string& path,
                            std::span<const std::string> overrides = {});

// Mapping between CountAlgorithm and its config-file spelling
// ("sieve", "congruence", "brute").
CountAlgorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(CountAlgorithm algorithm);

} // namespace detcount
