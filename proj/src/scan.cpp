#include "detcount/scan.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "detcount/errors.hpp"

namespace detcount {

namespace {

void validate_config(const ScanConfig& config) {
    if (config.x_min < 16)
        throw Error(errc::bad_config, "scan needs x_min >= 16");
    if (config.x_max < config.x_min)
        throw Error(errc::bad_config, "scan needs x_max >= x_min");
    if (!(config.ratio > 1.0))
        throw Error(errc::bad_config, "scan needs ratio > 1");
    if (config.algorithm == CountAlgorithm::CoprimeFractions)
        throw Error(errc::bad_config, "coprime-fractions counting is for r = 0 only");
    for (i64 r : config.r_values) {
        if (r == 0)
            throw Error(errc::bad_config, "scan r values must be nonzero");
        // Admissible range |r| <= x_min^(1/3), checked as |r|^3 <= x_min.
        u64 a = static_cast<u64>(r < 0 ? -r : r);
        if (a > (1u << 21) || a * a * a > config.x_min)
            throw Error(errc::bad_config, "scan needs |r|^3 <= x_min");
    }
}

ScanRow compute_cell(i64 r, u64 X, CountAlgorithm algorithm) {
    ScanRow row;
    row.r = r;
    row.X = X;
    row.exact_count = count_allsigns(r, X, algorithm).value;
    row.main_term = main_term(r, X, MainTermVariant::AllSigns16).value;
    row.error = static_cast<double>(row.exact_count) - row.main_term;
    row.abs_error = std::fabs(row.error);
    row.log10_X = std::log10(static_cast<double>(X));
    row.log10_abs_error = row.abs_error > 0.0
                              ? std::log10(row.abs_error)
                              : -std::numeric_limits<double>::infinity();
    return row;
}

} // namespace

std::vector<u64> geometric_grid(u64 x_min, u64 x_max, double ratio) {
    std::vector<u64> grid;
    double cur = static_cast<double>(x_min);
    while (true) {
        u64 v = static_cast<u64>(std::llround(cur));
        if (v > x_max)
            break;
        if (grid.empty() || grid.back() != v)
            grid.push_back(v);
        cur *= ratio;
    }
    return grid;
}

double fit_log_slope(std::span<const ScanRow> rows) {
    std::vector<double> xs, ys;
    for (const ScanRow& row : rows) {
        if (row.abs_error > 0.0) {
            xs.push_back(row.log10_X);
            ys.push_back(row.log10_abs_error);
        }
    }
    if (xs.size() < 3)
        throw Error(errc::degenerate_fit,
                    "slope fit needs at least 3 rows with nonzero error");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    if (!(den > 0.0))
        throw Error(errc::degenerate_fit, "slope fit needs at least two distinct X");
    return num / den;
}

ScanOutcome scan_error_exponent(const ScanConfig& config) {
    validate_config(config);
    std::vector<u64> grid = geometric_grid(config.x_min, config.x_max, config.ratio);

    ScanOutcome outcome;
    std::size_t cells = config.r_values.size() * grid.size();
    outcome.rows.resize(cells);

    // Cells are dispatched by index and written into their grid slots, so the
    // assembled order (r outer, ascending X inner) is independent of worker
    // scheduling and the emitted CSV is deterministic.
    unsigned workers = config.workers != 0 ? config.workers
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, std::max<std::size_t>(cells, 1)));

    auto run_cell = [&](std::size_t idx) {
        i64 r = config.r_values[idx / grid.size()];
        u64 X = grid[idx % grid.size()];
        outcome.rows[idx] = compute_cell(r, X, config.algorithm);
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < cells; ++i)
            run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t idx = next.fetch_add(1);
                    if (idx >= cells)
                        return;
                    try {
                        run_cell(idx);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error)
                            first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    for (std::size_t k = 0; k < config.r_values.size(); ++k) {
        std::span<const ScanRow> slice(outcome.rows.data() + k * grid.size(), grid.size());
        outcome.slope_by_r.emplace_back(config.r_values[k], fit_log_slope(slice));
    }

    if (!config.output.empty())
        emit_csv(outcome.rows, config.output);
    return outcome;
}

std::string render_csv(std::span<const ScanRow> rows) {
    std::string out = "r,X,exact,main,error,abs_error,log10_X,log10_abs_error\n";
    char buf[512];
    for (const ScanRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%lld,%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      static_cast<long long>(row.r), static_cast<unsigned long long>(row.X),
                      static_cast<unsigned long long>(row.exact_count), row.main_term,
                      row.error, row.abs_error, row.log10_X, row.log10_abs_error);
        out += buf;
    }
    return out;
}

void emit_csv(std::span<const ScanRow> rows, const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error(errc::io_error, "cannot open CSV output: " + path);
    std::string body = render_csv(rows);
    file.write(body.data(), static_cast<std::streamsize>(body.size()));
    file.flush();
    if (!file)
        throw Error(errc::io_error, "cannot write CSV output: " + path);
}

CountAlgorithm algorithm_from_name(const std::string& name) {
    if (name == "sieve")
        return CountAlgorithm::DivisorSieve;
    if (name == "congruence")
        return CountAlgorithm::Congruence;
    if (name == "brute")
        return CountAlgorithm::Brute;
    if (name == "coprime")
        return CountAlgorithm::CoprimeFractions;
    throw Error(errc::bad_config, "unknown algorithm name: " + name);
}

std::string algorithm_name(CountAlgorithm algorithm) {
    switch (algorithm) {
        case CountAlgorithm::DivisorSieve: return "sieve";
        case CountAlgorithm::Congruence: return "congruence";
        case CountAlgorithm::Brute: return "brute";
        case CountAlgorithm::CoprimeFractions: return "coprime";
    }
    throw Error(errc::bad_config, "unknown algorithm enumerator");
}

namespace {

std::vector<i64> parse_r_list(const std::string& text) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            throw Error(errc::bad_config, "empty entry in r_values list");
        std::size_t used = 0;
        i64 v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw Error(errc::bad_config, "bad integer in r_values list: " + item);
        }
        if (used != item.size())
            throw Error(errc::bad_config, "bad integer in r_values list: " + item);
        out.push_back(v);
    }
    return out;
}

void apply_override(ScanConfig& config, const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(errc::bad_config, "override must look like key=value: " + assignment);
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    try {
        if (key == "x_min")
            config.x_min = std::stoull(value);
        else if (key == "x_max")
            config.x_max = std::stoull(value);
        else if (key == "ratio")
            config.ratio = std::stod(value);
        else if (key == "seed")
            config.seed = std::stoull(value);
        else if (key == "algorithm")
            config.algorithm = algorithm_from_name(value);
        else if (key == "output")
            config.output = value;
        else if (key == "r_values")
            config.r_values = parse_r_list(value);
        else
            throw Error(errc::bad_config, "unknown override key: " + key);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(errc::bad_config, "bad override value: " + assignment);
    }
}

} // namespace

ScanConfig load_scan_config(const std::string& path, std::span<const std::string> overrides) {
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw Error(errc::io_error, "cannot read config: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buffer.str());
    } catch (const std::exception& err) {
        throw Error(errc::bad_config, std::string("config is not valid JSON: ") + err.what());
    }
    if (!doc.is_object())
        throw Error(errc::bad_config, "config root must be a JSON object");

    ScanConfig config;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "r_values")
                config.r_values = value.get<std::vector<i64>>();
            else if (key == "x_min")
                config.x_min = value.get<u64>();
            else if (key == "x_max")
                config.x_max = value.get<u64>();
            else if (key == "ratio")
                config.ratio = value.get<double>();
            else if (key == "algorithm")
                config.algorithm = algorithm_from_name(value.get<std::string>());
            else if (key == "output")
                config.output = value.get<std::string>();
            else if (key == "seed")
                config.seed = value.get<u64>();
            else
                throw Error(errc::bad_config, "unknown config key: " + key);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& err) {
        throw Error(errc::bad_config, std::string("bad config value: ") + err.what());
    }

    for (const std::string& assignment : overrides)
        apply_override(config, assignment);
    validate_config(config);
    return config;
}

} // namespace detcount
