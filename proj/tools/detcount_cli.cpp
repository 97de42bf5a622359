// Command-line front end: every library-level operation is scriptable as a
// subcommand that prints one JSON object (or writes CSV for scans).  Exit
// codes: 0 success, 1 audit/quality failure, 2 bad configuration or usage,
// 3 compute budget exceeded.

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "detcount/counting.hpp"
#include "detcount/errors.hpp"
#include "detcount/expsums.hpp"
#include "detcount/oscillatory.hpp"
#include "detcount/scan.hpp"
#include "detcount/transforms.hpp"
#include "detcount/verify.hpp"
#include "detcount/weight.hpp"

using json = nlohmann::json;
using namespace detcount;

namespace {

int exit_code_for(errc code) {
    switch (code) {
        case errc::audit_failure:
        case errc::degenerate_fit:
            return 1;
        case errc::budget_exceeded:
        case errc::memory_budget_exceeded:
        case errc::limit_exceeded:
        case errc::quadrature_not_converged:
        case errc::not_converged:
            return 3;
        default:
            return 2;
    }
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

struct CliState {
    // count
    i64 r = 1;
    u64 x = 100;
    std::string orthant = "positive";
    std::string algorithm = "sieve";
    // mainterm
    std::string variant = "allsigns";
    // scan
    std::string config_path;
    std::vector<std::string> overrides;
    // kloosterman / ramanujan / shiftconv
    i64 m = 1, n = 1;
    u64 c = 1, q = 1, M = 100;
    std::string method = "direct";
    // poisson-check
    i64 alpha = 0, mod = 1, pa = 1, pc = 1;
    double px = 40.0, ph = 6.5, py = 0.0, ptol = 1e-10;
    i64 nmax = 0;
    // stationary-check
    i64 sm = 1, sn = 1, sa1 = 1, sl = 1;
    double sx = 100.0, slo = 0.0, shi = 0.0, stol = 1e-9;
    std::string skind = "scaled";
    // verify
    std::string level = "fast";
    std::string verify_csv;
};

int run_count(const CliState& st) {
    u64 value = 0;
    if (st.orthant == "zero") {
        if (st.r != 0)
            throw Error(errc::bad_config, "zero-determinant count needs --r 0");
        value = count_zero_det(st.x).value;
    } else if (st.orthant == "positive") {
        if (st.algorithm == "sieve")
            value = shifted_convolution(st.x, st.r);
        else if (st.algorithm == "brute")
            value = count_positive_brute(st.r, st.x).value;
        else if (st.algorithm == "congruence")
            value = count_congruence(st.r, st.x).value;
        else
            throw Error(errc::bad_config, "positive orthant supports sieve/brute/congruence");
    } else if (st.orthant == "allsigns") {
        value = count_allsigns(st.r, st.x, algorithm_from_name(st.algorithm)).value;
    } else {
        throw Error(errc::bad_config, "orthant must be positive, allsigns, or zero");
    }
    print({{"op", "count"},
           {"r", st.r},
           {"x", st.x},
           {"orthant", st.orthant},
           {"algorithm", st.algorithm},
           {"value", value}});
    return 0;
}

int run_mainterm(const CliState& st) {
    MainTermVariant variant;
    if (st.variant == "allsigns")
        variant = MainTermVariant::AllSigns16;
    else if (st.variant == "positive")
        variant = MainTermVariant::Positive2;
    else if (st.variant == "zerodet")
        variant = MainTermVariant::ZeroDet;
    else
        throw Error(errc::bad_config, "variant must be allsigns, positive, or zerodet");
    MainTermValue mt = main_term(st.r, st.x, variant);
    print({{"op", "mainterm"},
           {"r", st.r},
           {"x", st.x},
           {"variant", st.variant},
           {"value", mt.value}});
    return 0;
}

int run_scan(const CliState& st) {
    ScanConfig config = load_scan_config(st.config_path, st.overrides);
    ScanOutcome outcome = scan_error_exponent(config);
    json slopes = json::object();
    for (const auto& [r, slope] : outcome.slope_by_r)
        slopes[std::to_string(r)] = slope;
    print({{"op", "scan"},
           {"rows", outcome.rows.size()},
           {"output", config.output},
           {"slopes", slopes}});
    return 0;
}

int run_kloosterman(const CliState& st) {
    ExpSumQuery query{st.m, st.n, st.c};
    ExpSumResult res;
    if (st.method == "direct")
        res = kloosterman_direct(query);
    else if (st.method == "crt")
        res = kloosterman_crt(query);
    else
        throw Error(errc::bad_config, "method must be direct or crt");
    print({{"op", "kloosterman"},
           {"m", st.m},
           {"n", st.n},
           {"c", st.c},
           {"method", st.method},
           {"value", res.value},
           {"weil_cap", res.weil_cap}});
    return 0;
}

int run_ramanujan(const CliState& st) {
    print({{"op", "ramanujan"}, {"q", st.q}, {"n", st.n}, {"value", ramanujan_sum(st.q, st.n)}});
    return 0;
}

int run_shiftconv(const CliState& st) {
    print({{"op", "shiftconv"}, {"m", st.M}, {"r", st.r}, {"value", shifted_convolution(st.M, st.r)}});
    return 0;
}

int run_poisson(const CliState& st) {
    TransformQuery query;
    query.a = st.pa;
    query.c = st.pc;
    query.profile = make_weight(st.px, st.ph);
    query.y = st.py;
    query.quadrature_tolerance = st.ptol;
    i64 n_max = st.nmax > 0 ? st.nmax : default_poisson_n_max(st.mod, query.profile);
    PoissonCheck check = poisson_progression_check(st.alpha, st.mod, query, n_max);
    print({{"op", "poisson-check"},
           {"alpha", st.alpha},
           {"q", st.mod},
           {"a", st.pa},
           {"c", st.pc},
           {"x", st.px},
           {"h", st.ph},
           {"y", st.py},
           {"n_max", check.n_max},
           {"lhs", check.lhs},
           {"rhs", check.rhs},
           {"defect", check.defect},
           {"defect_ratio", check.defect / (1.0 + std::fabs(check.lhs))},
           {"lhs_terms", check.lhs_terms}});
    return 0;
}

int run_stationary(const CliState& st) {
    PhaseIntegralSpec spec;
    spec.m = st.sm;
    spec.n = st.sn;
    spec.a1 = st.sa1;
    spec.l = st.sl;
    spec.X = st.sx;
    if (st.skind == "scaled")
        spec.kind = PhaseKind::Scaled;
    else if (st.skind == "unit")
        spec.kind = PhaseKind::Unit;
    else
        throw Error(errc::bad_config, "kind must be scaled or unit");
    spec.lo = st.slo > 0.0 ? st.slo : static_cast<double>(st.sl * st.sa1);
    spec.hi = st.shi > 0.0 ? st.shi : spec.X;
    StationaryReport rep = stationary_phase_main(spec, st.stol);
    double defect = std::abs(rep.quadrature_value - rep.main_term);
    print({{"op", "stationary-check"},
           {"m", st.sm},
           {"n", st.sn},
           {"a1", st.sa1},
           {"l", st.sl},
           {"x", st.sx},
           {"lo", spec.lo},
           {"hi", spec.hi},
           {"x0", rep.x0},
           {"main", complex_json(rep.main_term)},
           {"quadrature", complex_json(rep.quadrature_value)},
           {"R1", rep.R1},
           {"R2", rep.R2},
           {"defect", defect},
           {"budget", kStationaryBudgetMultiplier * (rep.R1 + rep.R2)}});
    return 0;
}

int run_verify(const CliState& st) {
    VerifyLevel level;
    if (st.level == "fast")
        level = VerifyLevel::Fast;
    else if (st.level == "full")
        level = VerifyLevel::Full;
    else
        throw Error(errc::bad_config, "level must be fast or full");
    VerifyReport report = run_verification_suite(level, st.verify_csv);
    json items = json::array();
    for (const VerifyItem& item : report.items) {
        std::fprintf(stderr, "%s %s (%.2fs): %s\n", item.pass ? "ok  " : "FAIL",
                     item.name.c_str(), item.seconds, item.detail.c_str());
        items.push_back({{"name", item.name},
                         {"pass", item.pass},
                         {"detail", item.detail},
                         {"seconds", item.seconds}});
    }
    print({{"op", "verify"}, {"level", st.level}, {"all_pass", report.all_pass}, {"items", items}});
    return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"determinant-count verification toolkit"};
    app.require_subcommand(1);
    CliState st;
    int rc = 0;

    auto* count = app.add_subcommand("count", "exact matrix count in a sup-norm box");
    count->add_option("--r", st.r, "determinant value");
    count->add_option("--x", st.x, "box size")->required();
    count->add_option("--orthant", st.orthant, "positive | allsigns | zero");
    count->add_option("--algorithm", st.algorithm, "sieve | congruence | brute");
    count->callback([&] { rc = run_count(st); });

    auto* mainterm = app.add_subcommand("mainterm", "asymptotic leading term");
    mainterm->add_option("--r", st.r, "determinant value");
    mainterm->add_option("--x", st.x, "box size")->required();
    mainterm->add_option("--variant", st.variant, "allsigns | positive | zerodet");
    mainterm->callback([&] { rc = run_mainterm(st); });

    auto* scan = app.add_subcommand("scan", "error-exponent scan over a geometric grid");
    scan->add_option("--config", st.config_path, "JSON config path")->required();
    scan->add_option("--set", st.overrides, "key=value override (repeatable)");
    scan->callback([&] { rc = run_scan(st); });

    auto* kloosterman = app.add_subcommand("kloosterman", "Kloosterman sum S(m,n;c)");
    kloosterman->add_option("--m", st.m, "first frequency")->required();
    kloosterman->add_option("--n", st.n, "second frequency")->required();
    kloosterman->add_option("--c", st.c, "modulus")->required();
    kloosterman->add_option("--method", st.method, "direct | crt");
    kloosterman->callback([&] { rc = run_kloosterman(st); });

    auto* ramanujan = app.add_subcommand("ramanujan", "Ramanujan sum r_q(n)");
    ramanujan->add_option("--q", st.q, "modulus")->required();
    ramanujan->add_option("--n", st.n, "argument")->required();
    ramanujan->callback([&] { rc = run_ramanujan(st); });

    auto* shiftconv = app.add_subcommand("shiftconv", "restricted divisor autocorrelation");
    shiftconv->add_option("--m", st.M, "factor range bound M")->required();
    shiftconv->add_option("--r", st.r, "shift")->required();
    shiftconv->callback([&] { rc = run_shiftconv(st); });

    auto* poisson = app.add_subcommand("poisson-check",
                                       "progression sum against its frequency-side form");
    poisson->add_option("--alpha", st.alpha, "progression residue")->required();
    poisson->add_option("--q", st.mod, "progression modulus")->required();
    poisson->add_option("--a", st.pa, "cutoff scale a");
    poisson->add_option("--c", st.pc, "cutoff scale c");
    poisson->add_option("--x", st.px, "box size X");
    poisson->add_option("--H", st.ph, "ramp width H");
    poisson->add_option("--y", st.py, "modulation frequency");
    poisson->add_option("--tol", st.ptol, "quadrature tolerance");
    poisson->add_option("--nmax", st.nmax, "frequency truncation (0 = default)");
    poisson->callback([&] { rc = run_poisson(st); });

    auto* stationary = app.add_subcommand("stationary-check",
                                          "stationary-phase prediction vs quadrature");
    stationary->add_option("--m", st.sm, "phase numerator m")->required();
    stationary->add_option("--n", st.sn, "phase numerator n")->required();
    stationary->add_option("--a1", st.sa1, "phase denominator a1")->required();
    stationary->add_option("--l", st.sl, "window factor l");
    stationary->add_option("--x", st.sx, "scale X")->required();
    stationary->add_option("--lo", st.slo, "window start (default l*a1)");
    stationary->add_option("--hi", st.shi, "window end (default X)");
    stationary->add_option("--kind", st.skind, "scaled | unit");
    stationary->add_option("--tol", st.stol, "quadrature tolerance");
    stationary->callback([&] { rc = run_stationary(st); });

    auto* verify = app.add_subcommand("verify", "cross-module verification suite");
    verify->add_option("--level", st.level, "fast | full");
    verify->add_option("--output", st.verify_csv, "summary CSV path for the full level");
    verify->callback([&] { rc = run_verify(st); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int cli_rc = app.exit(e);
        return cli_rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
