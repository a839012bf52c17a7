// Copyright 2026 The weier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weier/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "weier/eisenstein.hpp"
#include "weier/expr.hpp"
#include "weier/reduction.hpp"
#include "weier/verify.hpp"

#ifndef WEIER_DEFAULT_TOL_FILE
#define WEIER_DEFAULT_TOL_FILE "config/tolerances.conf"
#endif

namespace weier
{

namespace
{

using nlohmann::json;

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

double parse_number(std::string_view s, const std::string &what)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError(what + ": '" + std::string(s) + "' is not a finite number");
    }
    return v;
}

// "RE,IM"
Complex parse_complex(const std::string &text, const std::string &what)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
        throw UsageError(what + ": expected RE,IM but got '" + text + "'");
    }
    return {parse_number(std::string_view(text).substr(0, comma), what),
            parse_number(std::string_view(text).substr(comma + 1), what)};
}

UpperHalfPoint parse_tau(const std::string &text)
{
    const Complex t = parse_complex(text, "--tau");
    if (!(t.imag() > 0.0)) {
        throw UsageError("--tau: imaginary part must be positive");
    }
    return UpperHalfPoint(t);
}

json complex_json(Complex v)
{
    return {{"re", v.real()}, {"im", v.imag()}};
}

void write_error(std::ostream &err, std::string_view kind, const std::string &message)
{
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
    std::string fn;
    std::string tau;
    std::string z;
};

int run_eval(const EvalArgs &a, std::ostream &out)
{
    const UpperHalfPoint tau = parse_tau(a.tau);
    const bool needs_z = a.fn == "wp" || a.fn == "wp1" || a.fn == "zeta";
    if (needs_z && a.z.empty()) {
        throw UsageError("eval --fn " + a.fn + " requires --z");
    }
    const Complex z = a.z.empty() ? Complex{} : parse_complex(a.z, "--z");

    Complex value;
    double est = 0.0;
    if (a.fn == "wp" || a.fn == "wp1" || a.fn == "zeta") {
        const WValue w = a.fn == "wp"    ? wp_anywhere(tau, z)
                         : a.fn == "wp1" ? wp_prime_anywhere(tau, z)
                                         : zeta_anywhere(tau, z);
        value = w.value;
        est = w.est_error;
    } else if (a.fn == "e2" || a.fn == "e4" || a.fn == "e6") {
        const auto e = eisenstein_anywhere(tau);
        value = a.fn == "e2" ? e.E2 : a.fn == "e4" ? e.E4 : e.E6;
        est = e.tail_bound;
    } else {
        const auto inv = invariants_anywhere(tau);
        const double tail = eisenstein_anywhere(tau).tail_bound;
        constexpr double eps = std::numeric_limits<double>::epsilon();
        if (a.fn == "g2") {
            value = inv.g2;
            est = (4.0 * std::pow(pi, 4) / 3.0) * tail;
        } else if (a.fn == "g3") {
            value = inv.g3;
            est = (8.0 * std::pow(pi, 6) / 27.0) * tail;
        } else {
            value = inv.delta;
            est = 64.0 * eps * std::abs(inv.delta);
        }
    }
    out << json{{"re", value.real()}, {"im", value.imag()}, {"est_error", est}}.dump() << '\n';
    return exit_ok;
}

// reduce ---------------------------------------------------------------------

int run_reduce(const std::string &tau_text, const std::string &z_text, std::ostream &out)
{
    const UpperHalfPoint tau = parse_tau(tau_text);
    const Complex z = z_text.empty() ? Complex{} : parse_complex(z_text, "--z");
    const auto r = reduce(tau, z);
    const json j{
        {"gamma", {{"a", r.gamma.a()}, {"b", r.gamma.b()}, {"c", r.gamma.c()}, {"d", r.gamma.d()}}},
        {"tau_star", complex_json(r.tau_star.value())},
        {"m", r.m},
        {"n", r.n},
        {"z_star", complex_json(r.z_star)},
        {"scale", complex_json(r.scale)},
    };
    out << j.dump() << '\n';
    return exit_ok;
}

// diff -----------------------------------------------------------------------

int run_diff(const std::string &text, const std::string &var, std::ostream &out)
{
    Expr e;
    try {
        e = parse_expr(text);
    } catch (const Error &ex) {
        throw UsageError(std::string("--expr: ") + ex.what());
    }
    out << to_string(differentiate(e, var == "z" ? DiffVar::D_Z : DiffVar::D_TAU)) << '\n';
    return exit_ok;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t seed = 42;
    std::string tol_file;
    bool json_out = false;
    bool csv_out = false;
    std::optional<double> identity_tol;
    std::optional<double> oracle_tol;
    std::optional<double> fd_tol;
    std::optional<double> pole_guard;
    std::vector<std::string> cases;
};

int run_verify(const VerifyArgs &a, std::ostream &out)
{
    if (a.json_out && a.csv_out) {
        throw UsageError("--json and --csv are exclusive");
    }
    SuiteConfig cfg;
    const std::string path = a.tol_file.empty() ? resolve_config_path(WEIER_DEFAULT_TOL_FILE) : a.tol_file;
    const bool explicit_path = !a.tol_file.empty() || path != WEIER_DEFAULT_TOL_FILE;
    try {
        if (explicit_path || std::filesystem::exists(path)) {
            cfg = load_suite_config(path);
        }
    } catch (const Error &ex) {
        throw UsageError(ex.what());
    }
    auto &p = cfg.policy;
    if (a.identity_tol) {
        p.identity_tol = *a.identity_tol;
    }
    if (a.oracle_tol) {
        p.oracle_tol = *a.oracle_tol;
    }
    if (a.fd_tol) {
        p.fd_tol = *a.fd_tol;
    }
    if (a.pole_guard) {
        p.pole_guard_radius = *a.pole_guard;
    }
    SuiteOptions options;
    options.case_tolerances = cfg.case_tolerances;
    options.only = a.cases;
    try {
        p.validate();
        for (const auto &name : a.cases) {
            default_case_tolerance(name, p);
        }
    } catch (const Error &ex) {
        throw UsageError(ex.what());
    }
    const IdentityReport report = run_identity_suite(a.seed, p, options);

    if (a.json_out) {
        out << to_json(report).dump(2) << '\n';
    } else if (a.csv_out) {
        out << to_csv(report);
    } else {
        for (const auto &c : report.cases) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "%s  %-24s n=%-4d max=%.3e tol=%.1e", c.passed ? "PASS" : "FAIL",
                          c.name.c_str(), c.sample_count, c.max_residual, c.tolerance);
            out << buf << '\n';
        }
        const auto &f = report.findings;
        out << "wp transport weight: " << f.wp_s_law_exponent << '\n'
            << "three-term zeta sign: " << f.zeta_three_term_sign << '\n'
            << "duplication sign: " << f.duplication_sign << '\n';
    }
    return report.all_passed() ? exit_ok : exit_verify_failed;
}

// series ---------------------------------------------------------------------

int run_series(const std::string &fn, int order, std::ostream &out)
{
    json j{{"fn", fn}, {"order", order}};
    if (fn == "e2" || fn == "e4" || fn == "e6") {
        j["coefficients"] = eisenstein_coefficients(fn == "e2" ? 2 : fn == "e4" ? 4 : 6, order);
    } else if (fn == "wp0") {
        // Not expanded in u; the m-indexed term table is printed instead.
        json terms = json::array();
        for (int m = -order; m <= order; ++m) {
            terms.push_back({{"m", m}, {"term", "u*q^" + std::to_string(m) + "/(1 - u*q^" + std::to_string(m) + ")^2"}});
        }
        json constant = json::array({"1/12"});
        for (int n = 1; n <= order; ++n) {
            constant.push_back(std::to_string(-2 * divisor_sum(1, n)));
        }
        j["prefactor"] = "(2*pi*I)^2";
        j["terms"] = terms;
        j["constant_q_coefficients"] = constant;
    } else {
        json terms = json::array();
        for (int n = 0; n <= order; ++n) {
            terms.push_back({{"n", n}, {"term", "-q^" + std::to_string(n) + "*u/(1 - q^" + std::to_string(n) + "*u)"}});
        }
        for (int n = 1; n <= order; ++n) {
            terms.push_back(
                {{"n", n}, {"term", "q^" + std::to_string(n) + "/u/(1 - q^" + std::to_string(n) + "/u)"}});
        }
        j["prefactor"] = "2*pi*I";
        j["terms"] = terms;
        j["linear_term"] = "eta1*z/(2*pi*I) - 1/2";
        j["eta1"] = "(pi^2/3)*E2";
        j["e2_coefficients"] = eisenstein_coefficients(2, order);
    }
    out << j.dump(2) << '\n';
    return exit_ok;
}

} // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Weierstrass elliptic functions, Eisenstein series and identity checks", "weier"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto *eval = app.add_subcommand("eval", "Evaluate a function at (tau, z)");
    eval->add_option("--fn", eval_args.fn, "Function")
        ->required()
        ->check(CLI::IsMember({"wp", "wp1", "zeta", "e2", "e4", "e6", "g2", "g3", "delta"}));
    eval->add_option("--tau", eval_args.tau, "tau as RE,IM")->required();
    eval->add_option("--z", eval_args.z, "z as RE,IM");

    std::string reduce_tau_text;
    std::string reduce_z_text;
    auto *red = app.add_subcommand("reduce", "Reduce (tau, z) to the standard domain and cell");
    red->add_option("--tau", reduce_tau_text, "tau as RE,IM")->required();
    red->add_option("--z", reduce_z_text, "z as RE,IM");

    std::string expr_text;
    std::string var;
    auto *diff = app.add_subcommand("diff", "Differentiate an expression");
    diff->add_option("--expr", expr_text, "Expression")->required();
    diff->add_option("--var", var, "Variable")->required()->check(CLI::IsMember({"z", "tau"}));

    VerifyArgs verify_args;
    auto *verify = app.add_subcommand("verify", "Run the identity suite");
    verify->add_option("--seed", verify_args.seed, "Seed")->capture_default_str();
    verify->add_option("--tol-file", verify_args.tol_file, "Tolerance config file (key=value)");
    verify->add_flag("--json", verify_args.json_out, "JSON report");
    verify->add_flag("--csv", verify_args.csv_out, "CSV report");
    verify->add_option("--identity-tol", verify_args.identity_tol, "Override identity_tol");
    verify->add_option("--oracle-tol", verify_args.oracle_tol, "Override oracle_tol");
    verify->add_option("--fd-tol", verify_args.fd_tol, "Override fd_tol");
    verify->add_option("--pole-guard", verify_args.pole_guard, "Override pole_guard_radius");
    verify->add_option("--case", verify_args.cases, "Run only the named case (repeatable)");

    std::string series_fn;
    int order = 0;
    auto *series = app.add_subcommand("series", "Print q-expansion data");
    series->add_option("--fn", series_fn, "Series")->required()->check(CLI::IsMember({"wp0", "zeta0", "e2", "e4", "e6"}));
    series->add_option("--order", order, "Number of q-terms")->required()->check(CLI::Range(0, 1000));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*eval) {
            return run_eval(eval_args, out);
        }
        if (*red) {
            return run_reduce(reduce_tau_text, reduce_z_text, out);
        }
        if (*diff) {
            return run_diff(expr_text, var, out);
        }
        if (*verify) {
            return run_verify(verify_args, out);
        }
        return run_series(series_fn, order, out);
    } catch (const UsageError &e) {
        write_error(err, "Usage", e.what());
        return exit_usage;
    } catch (const Error &e) {
        write_error(err, to_string(e.kind()), e.what());
        return exit_evaluation;
    } catch (const std::exception &e) {
        write_error(err, "Internal", e.what());
        return exit_evaluation;
    }
}

int cli_main(int argc, char **argv, std::ostream &out, std::ostream &err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return cli_main(args, out, err);
}

} // namespace weier
