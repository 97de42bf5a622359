#include "detcount/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "detcount/counting.hpp"
#include "detcount/errors.hpp"
#include "detcount/expsums.hpp"
#include "detcount/oscillatory.hpp"
#include "detcount/scan.hpp"
#include "detcount/transforms.hpp"
#include "detcount/weight.hpp"

namespace detcount {

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

// Runs one named check; the body returns the success detail line and signals
// failure by throwing (Error for library failures, runtime_error for assertion
// text).
void run_item(VerifyReport& report, const std::string& name,
              const std::function<std::string()>& body) {
    VerifyItem item;
    item.name = name;
    auto start = std::chrono::steady_clock::now();
    try {
        item.detail = body();
        item.pass = true;
    } catch (const std::exception& err) {
        item.detail = err.what();
        item.pass = false;
    }
    item.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.items.push_back(item);
}

std::string check_counting_oracles() {
    int cells = 0;
    for (i64 r : {1, -1, 2, -2, 6}) {
        for (u64 X : {10u, 40u, 80u}) {
            u64 a = count_positive_brute(r, X).value;
            u64 b = count_congruence(r, X).value;
            u64 c = shifted_convolution(X, r);
            if (a != b || a != c)
                throw std::runtime_error(format("oracle mismatch at r=%g X=%g",
                                                static_cast<double>(r),
                                                static_cast<double>(X)));
            ++cells;
        }
    }
    return format("%g cells, three counting paths identical", cells);
}

std::string check_allsigns_assembly() {
    for (i64 r : {1, -2, 6}) {
        u64 assembled = count_allsigns(r, 25).value;
        u64 enumerated = enumerate_allsigns(r, 25);
        if (assembled != enumerated)
            throw std::runtime_error(format("all-signs mismatch at r=%g", static_cast<double>(r)));
    }
    return "3 cells against the 4-loop enumeration";
}

std::string check_kloosterman() {
    std::mt19937_64 rng(0x7E57ull);
    std::uniform_int_distribution<u64> cdist(1, 800);
    std::uniform_int_distribution<i64> fdist(-50, 50);
    double worst_sym = 0.0, worst_crt = 0.0;
    for (int i = 0; i < 150; ++i) {
        ExpSumQuery q{fdist(rng), fdist(rng), cdist(rng)};
        double direct = kloosterman_direct(q).value;
        double swapped = kloosterman_direct({q.n, q.m, q.c}).value;
        double sym = std::fabs(direct - swapped) / (1.0 + std::fabs(direct));
        double crt = std::fabs(kloosterman_crt(q).value - direct) / (1.0 + std::fabs(direct));
        worst_sym = std::max(worst_sym, sym);
        worst_crt = std::max(worst_crt, crt);
    }
    if (worst_sym > 1e-9)
        throw std::runtime_error(format("S(m,n;c) vs S(n,m;c) deviation %.3g", worst_sym));
    if (worst_crt > 1e-6)
        throw std::runtime_error(format("CRT vs direct deviation %.3g", worst_crt));
    return format("150 queries, symmetry %.2g, crt %.2g", worst_sym, worst_crt);
}

std::string check_weil() {
    std::mt19937_64 rng(0xB0B5ull);
    std::uniform_int_distribution<u64> cdist(1, 3000);
    std::uniform_int_distribution<i64> fdist(-200, 200);
    std::vector<ExpSumQuery> queries;
    for (int i = 0; i < 200; ++i)
        queries.push_back({fdist(rng), fdist(rng), cdist(rng)});
    WeilAuditReport audit = weil_audit(queries);
    if (!audit.violations.empty())
        throw std::runtime_error(format("%g cap violations", double(audit.violations.size())));
    return format("200 queries, max |S|/cap = %.4f", audit.max_ratio);
}

std::string check_ramanujan() {
    std::mt19937_64 rng(0x5A11ull);
    std::uniform_int_distribution<u64> qdist(1, 600);
    std::uniform_int_distribution<i64> ndist(-1000, 1000);
    for (int i = 0; i < 100; ++i) {
        u64 q = qdist(rng);
        i64 n = ndist(rng);
        double mobius = static_cast<double>(ramanujan_sum(q, n));
        double special = kloosterman_direct({0, n, q}).value;
        if (std::fabs(mobius - special) > 1e-6)
            throw std::runtime_error(
                format("Mobius form vs S(0,n;q) differ by %.3g", std::fabs(mobius - special)));
        u64 g = n == 0 ? q : std::gcd(q, static_cast<u64>(n < 0 ? -n : n));
        if (std::fabs(mobius) > static_cast<double>(g) + 1e-9)
            throw std::runtime_error("Ramanujan sum exceeds its gcd bound");
    }
    return "100 queries against the one-frequency specialization";
}

std::string check_cutoff() {
    double worst = 0.0;
    for (auto [X, H] : {std::pair<double, double>{400.0, 30.0}, {1000.0, 250.0}}) {
        WeightProfile profile = make_weight(X, H);
        for (int i = 0; i <= 2000; ++i) {
            double x = (1.0 - H) + i * ((X + H) - (1.0 - H)) / 2000.0;
            double w = weight_value(profile, x);
            if (w < 0.0 || w > 1.0)
                throw std::runtime_error("cutoff leaves [0, 1]");
            for (int j = 1; j <= 4; ++j) {
                double scaled = std::fabs(weight_derivative(profile, x, j)) * std::pow(H, j);
                worst = std::max(worst, scaled / kRampDerivativeBound[j]);
                if (scaled > kRampDerivativeBound[j] * (1.0 + 1e-9))
                    throw std::runtime_error(
                        format("derivative bound broken at order %g: %.3g", j, scaled));
            }
        }
    }
    return format("2 profiles, max |w^(j)| H^j at %.3f of its bound", worst);
}

std::string check_poisson() {
    std::mt19937_64 rng(0x90155ull);
    std::uniform_int_distribution<i64> adist(1, 6), cdist(-6, 6), qpick(0, 4);
    const i64 qs[5] = {3, 5, 7, 11, 12};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        TransformQuery query;
        query.a = adist(rng);
        query.c = cdist(rng);
        query.profile = make_weight(40.0, 6.5);
        query.y = 0.0;
        query.quadrature_tolerance = 1e-10;
        i64 q = qs[qpick(rng)];
        std::uniform_int_distribution<i64> alphadist(0, q - 1);
        i64 alpha = alphadist(rng);
        PoissonCheck pc =
            poisson_progression_check(alpha, q, query, default_poisson_n_max(q, query.profile));
        double ratio = pc.defect / (1.0 + std::fabs(pc.lhs));
        worst = std::max(worst, ratio);
        if (ratio > 1e-4)
            throw std::runtime_error(format("Poisson defect ratio %.3g", ratio));
    }
    return format("5 progressions, max defect ratio %.2g", worst);
}

std::string check_sw_decomposition() {
    SwDecomposition sw = sw_decompose(1, 200, std::sqrt(200.0));
    double gap = std::fabs(sw.B_w_direct - sw.B_w_fourier);
    double allowed = 0.01 * (1.0 + std::fabs(sw.B_w_direct));
    if (gap > allowed)
        throw std::runtime_error(format("B_w paths disagree: gap %.3g vs %.3g", gap, allowed));
    return format("B_w gap %.3g within %.3g", gap, allowed);
}

std::string check_stationary_grid() {
    std::mt19937_64 rng(0x57A7ull);
    std::uniform_int_distribution<i64> mdist(1, 5), ndist(1, 5), adist(1, 8);
    std::uniform_real_distribution<double> xdist(50.0, 400.0), bdist(1.6, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        PhaseIntegralSpec spec;
        spec.m = mdist(rng);
        spec.n = ndist(rng);
        spec.a1 = adist(rng);
        spec.X = xdist(rng);
        double x0 = std::sqrt(static_cast<double>(spec.m * spec.a1) * spec.X /
                              static_cast<double>(spec.n));
        spec.lo = x0 / bdist(rng);
        spec.hi = x0 * bdist(rng);
        StationaryReport rep = stationary_phase_main(spec, 1e-9);
        double ratio = std::abs(rep.quadrature_value - rep.main_term) /
                       (kStationaryBudgetMultiplier * (rep.R1 + rep.R2));
        worst = std::max(worst, ratio);
        if (ratio > 1.0)
            throw std::runtime_error(format("stationary budget exceeded, ratio %.3g", ratio));
    }
    for (int i = 0; i < 5; ++i) {
        PhaseIntegralSpec spec;
        spec.m = -mdist(rng);
        spec.n = ndist(rng);
        spec.a1 = adist(rng);
        spec.X = xdist(rng);
        spec.lo = 2.0;
        spec.hi = 2.0 + 40.0 * bdist(rng);
        derivative_bound_audit(spec, 1, 1e-9); // throws audit_failure on violation
    }
    return format("20 stationary + 5 monotone specs, max budget use %.2g", worst);
}

std::string check_scan(const std::string& csv_path) {
    ScanConfig config;
    config.r_values = {1};
    config.x_min = 256;
    config.x_max = 2048;
    config.ratio = 2.0;
    config.output = csv_path;
    ScanOutcome outcome = scan_error_exponent(config);
    double slope = outcome.slope_by_r.at(0).second;
    if (!(slope < 1.9))
        throw std::runtime_error(format("fitted slope %.3f not below 1.9", slope));
    return format("slope %.3f over 4 grid points", slope);
}

} // namespace

VerifyReport run_verification_suite(VerifyLevel level, const std::string& csv_path) {
    VerifyReport report;
    run_item(report, "counting oracles agree", check_counting_oracles);
    run_item(report, "all-signs assembly matches enumeration", check_allsigns_assembly);
    run_item(report, "kloosterman symmetry, realness, crt", check_kloosterman);
    run_item(report, "weil cap honored", check_weil);
    run_item(report, "ramanujan specialization", check_ramanujan);
    run_item(report, "smooth cutoff bounds", check_cutoff);
    run_item(report, "poisson progression defect", check_poisson);
    if (level == VerifyLevel::Full) {
        run_item(report, "smoothed count decomposition", check_sw_decomposition);
        run_item(report, "stationary phase grid", check_stationary_grid);
        run_item(report, "error exponent scan", [&] { return check_scan(csv_path); });
    }
    report.all_pass = true;
    for (const VerifyItem& item : report.items)
        report.all_pass = report.all_pass && item.pass;
    return report;
}

} // namespace detcount
