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

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "weier/verify.hpp"

using namespace weier;

namespace
{

const IdentityReport &default_report()
{
    static const IdentityReport report = [] {
        SuiteOptions o;
        o.with_timestamp = false;
        return run_identity_suite(42, {}, o);
    }();
    return report;
}

} // namespace

TEST_CASE("default suite passes")
{
    const auto &r = default_report();
    CHECK(r.cases.size() == identity_case_names().size());
    for (const auto &c : r.cases) {
        INFO(c.name << ": " << c.max_residual << " vs " << c.tolerance << " " << c.notes);
        CHECK(c.passed);
        CHECK(c.sample_count > 0);
        CHECK(c.passed == (c.max_residual <= c.tolerance));
        CHECK(c.mean_residual <= c.max_residual);
    }
    CHECK(r.all_passed());
}

TEST_CASE("cases are sorted by name")
{
    const auto names = identity_case_names();
    CHECK(std::is_sorted(names.begin(), names.end()));
}

TEST_CASE("findings")
{
    const auto &f = default_report().findings;
    CHECK(f.wp_s_law_exponent == 2);
    CHECK(f.wp_s_law_residual_weight1 > 1e-2);
    CHECK(f.zeta_three_term_sign == "-");
    CHECK(f.zeta_three_term_residual_plus > 1e-2);
    CHECK(f.duplication_sign == "+");
    CHECK(f.duplication_residual_minus > 1e-2);
    CHECK(f.duplication_branch_hits >= 5);
}

TEST_CASE("same seed gives the same report")
{
    SuiteOptions o;
    o.with_timestamp = false;
    const auto again = run_identity_suite(42, {}, o);
    CHECK(to_json(again).dump() == to_json(default_report()).dump());
    CHECK(to_csv(again) == to_csv(default_report()));
}

TEST_CASE("a different seed draws different samples")
{
    SuiteOptions o;
    o.with_timestamp = false;
    o.only = {"ode_residual"};
    const auto a = run_identity_suite(1, {}, o);
    const auto b = run_identity_suite(2, {}, o);
    REQUIRE(a.cases.size() == 1);
    CHECK(a.cases[0].passed);
    CHECK(a.cases[0].max_residual != b.cases[0].max_residual);
}

TEST_CASE("corrupted Ramanujan coefficient fails the E2 derivative case")
{
    RuleCoefficients c;
    c[RuleCoefficient::RamanujanE2] = Rational(1, 13);
    const DerivativeRules mutated(c);
    SuiteOptions o;
    o.rules = &mutated;
    o.only = {"ramanujan_fd"};
    const auto r = run_identity_suite(42, {}, o);
    REQUIRE(r.cases.size() == 1);
    CHECK_FALSE(r.cases[0].passed);
    CHECK(r.cases[0].max_residual > 1e-2);
}

TEST_CASE("tolerance overrides and filters")
{
    SuiteOptions o;
    o.only = {"sine_limit"};
    o.case_tolerances = {{"sine_limit", 1e-30}};
    const auto r = run_identity_suite(42, {}, o);
    REQUIRE(r.cases.size() == 1);
    CHECK_FALSE(r.cases[0].passed);
    CHECK_FALSE(r.all_passed());

    o.only = {"no_such_case"};
    CHECK_THROWS_AS(run_identity_suite(42, {}, o), Error);
}

TEST_CASE("config parsing")
{
    const auto cfg = parse_suite_config("# comment\n identity_tol = 2e-9 \nfd_tol=1e-6\ncase.sine_limit = 1e-11 # trailing\n");
    CHECK(cfg.policy.identity_tol == 2e-9);
    CHECK(cfg.policy.fd_tol == 1e-6);
    CHECK(cfg.case_tolerances.at("sine_limit") == 1e-11);
    CHECK_THROWS_AS(parse_suite_config("bogus = 1"), Error);
    CHECK_THROWS_AS(parse_suite_config("fd_tol = abc"), Error);
    CHECK_THROWS_AS(parse_suite_config("fd_tol"), Error);
    CHECK_THROWS_AS(parse_suite_config("case.nope = 1"), Error);
    CHECK_THROWS_AS(parse_suite_config("identity_tol = 1"), Error);
    CHECK_THROWS_AS(load_suite_config("/nonexistent/file.conf"), Error);
}

TEST_CASE("committed config equals the documented defaults")
{
    const auto cfg = load_suite_config(WEIER_TOL_FILE_PATH);
    const TolerancePolicy d;
    CHECK(cfg.policy.series_tail_bound == d.series_tail_bound);
    CHECK(cfg.policy.identity_tol == d.identity_tol);
    CHECK(cfg.policy.oracle_tol == d.oracle_tol);
    CHECK(cfg.policy.fd_tol == d.fd_tol);
    CHECK(cfg.policy.pole_guard_radius == d.pole_guard_radius);
    for (const auto &name : identity_case_names()) {
        INFO(name);
        REQUIRE(cfg.case_tolerances.count(name) == 1);
        CHECK(cfg.case_tolerances.at(name) == default_case_tolerance(name, d));
    }
}

TEST_CASE("config path from the environment")
{
    ::unsetenv("WEIER_TOL_FILE");
    CHECK(resolve_config_path("x.conf") == "x.conf");
    ::setenv("WEIER_TOL_FILE", "/tmp/y.conf", 1);
    CHECK(resolve_config_path("x.conf") == "/tmp/y.conf");
    ::unsetenv("WEIER_TOL_FILE");
}

TEST_CASE("JSON report schema")
{
    const auto j = to_json(default_report());
    CHECK(j.at("seed").get<std::uint64_t>() == 42);
    CHECK(j.at("all_passed").is_boolean());
    CHECK(j.at("timestamp").is_string());
    for (const char *k : {"series_tail_bound", "identity_tol", "oracle_tol", "fd_tol", "pole_guard_radius"}) {
        CHECK(j.at("policy").at(k).is_number());
    }
    const auto &f = j.at("findings");
    CHECK(f.at("wp_s_law_exponent").is_number_integer());
    CHECK(f.at("zeta_three_term_sign").is_string());
    CHECK(f.at("duplication_sign").is_string());
    REQUIRE(j.at("cases").is_array());
    for (const auto &c : j.at("cases")) {
        CHECK(c.at("name").is_string());
        CHECK(c.at("sample_count").is_number_integer());
        CHECK(c.at("max_residual").is_number());
        CHECK(c.at("mean_residual").is_number());
        CHECK(c.at("tolerance").is_number());
        CHECK(c.at("passed").is_boolean());
        CHECK(c.at("notes").is_string());
    }
    CHECK(nlohmann::json::parse(j.dump()) == j);
}

TEST_CASE("CSV report")
{
    const std::string csv = to_csv(default_report());
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "name,sample_count,max_residual,mean_residual,tolerance,passed,notes");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.back() == '"');
        CHECK(std::count(line.begin(), line.end(), ',') >= 6);
    }
    CHECK(rows == default_report().cases.size());
}
