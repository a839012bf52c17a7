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

#include <random>

#include "weier/expr.hpp"
#include "weier/reduction.hpp"
#include "weier/verify.hpp"

using namespace weier;

namespace
{

const UpperHalfPoint I(0.0, 1.0);

Expr gen(Generator g)
{
    return Expr::generator(g);
}

Expr random_expr(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, generator_count - 1);
    std::uniform_int_distribution<long long> coef(-4, 4);
    Expr e = Expr::integer(coef(rng));
    for (int k = 0; k < 3; ++k) {
        e = e + Expr::rational(coef(rng), 3) * gen(all_generators[pick(rng)]) * gen(all_generators[pick(rng)]);
    }
    if (rng() % 2 == 0) {
        e = e / (gen(Generator::E2) + Expr::integer(3));
    }
    return e;
}

} // namespace

TEST_CASE("basic derivative rules")
{
    CHECK(differentiate(gen(Generator::WP), DiffVar::D_Z) == gen(Generator::WPP));
    CHECK(differentiate(gen(Generator::ZETA), DiffVar::D_Z) == -gen(Generator::WP));
    const Expr ramanujan = parse_expr("2*pi*I*(E2^2 - E4)/12");
    CHECK(differentiate(gen(Generator::E2), DiffVar::D_TAU) == ramanujan);
    CHECK(differentiate(gen(Generator::Z), DiffVar::D_Z) == Expr::integer(1));
    CHECK(differentiate(gen(Generator::TAU), DiffVar::D_TAU) == Expr::integer(1));
    CHECK(differentiate(gen(Generator::TAU), DiffVar::D_Z).is_zero());
    CHECK(differentiate(gen(Generator::Z), DiffVar::D_TAU).is_zero());
    for (Generator g : {Generator::E2, Generator::E4, Generator::E6}) {
        CHECK(differentiate(gen(g), DiffVar::D_Z).is_zero());
    }
}

TEST_CASE("the differential equation differentiates consistently")
{
    const Expr wp = gen(Generator::WP);
    const Expr lhs = differentiate(gen(Generator::WPP).pow(2), DiffVar::D_Z);
    const Expr rhs = differentiate(Expr::integer(4) * wp.pow(3) - g2_expr() * wp - g3_expr(), DiffVar::D_Z);
    CHECK((lhs - rhs).is_zero());
}

TEST_CASE("closure: every rule is an expression in the generators")
{
    for (Generator g : all_generators) {
        for (DiffVar v : {DiffVar::D_Z, DiffVar::D_TAU}) {
            const Expr &r = default_rules().rule(g, v);
            CHECK(r.size() < 200);
            // numerically evaluable wherever the generators are
            CHECK(std::isfinite(std::abs(eval_expr(r, UpperHalfPoint(0.1, 1.2), {0.3, 0.4}))));
        }
    }
}

TEST_CASE("evaluation binds generators")
{
    const Complex z{0.3, 0.2};
    CHECK(eval_expr(gen(Generator::WP), I, z) == wp_anywhere(I, z).value);
    CHECK(eval_expr(gen(Generator::ZETA), I, z) == zeta_anywhere(I, z).value);
    CHECK(eval_expr(gen(Generator::Z), I, z) == z);
    CHECK(eval_expr(gen(Generator::TAU), I, z) == I.value());

    const Expr wp = gen(Generator::WP);
    const Expr ode = Expr::integer(4) * wp.pow(3) - g2_expr() * wp - g3_expr() - gen(Generator::WPP).pow(2);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.1, 0.9), re(-0.5, 0.5), im(strip_height, 2.5);
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau(re(rng), im(rng));
        const Complex zz = u(rng) + u(rng) * tau.value();
        if (lattice_distance(tau, zz) < 0.05) {
            continue;
        }
        const double scale = std::max(1.0, std::pow(std::abs(wp_anywhere(tau, zz).value), 3));
        CHECK(std::abs(eval_expr(ode, tau, zz)) / scale < 1e-8);
    }

    const Complex g2 = invariants_anywhere(I).g2;
    CHECK(std::abs(eval_expr(delta_expr(), I, z) - g2 * g2 * g2) < 1e-9 * std::abs(g2 * g2 * g2));
}

TEST_CASE("near-singular denominators are refused")
{
    const Expr inv_e6 = Expr::integer(1) / gen(Generator::E6);
    try {
        eval_expr(inv_e6, I, 0.3);
        FAIL("expected NearSingular");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::NearSingular);
    }
}

TEST_CASE("finite-difference checks")
{
    const Complex z{0.4, 0.3};
    CHECK(fd_check(gen(Generator::WP), DiffVar::D_Z, I, z) < 1e-6);
    CHECK(fd_check(gen(Generator::WP), DiffVar::D_TAU, I, z) < 1e-5);
    CHECK(fd_check(gen(Generator::E2), DiffVar::D_TAU, UpperHalfPoint(0.0, 1.1), z) < 1e-6);
    for (Generator g : all_generators) {
        for (DiffVar v : {DiffVar::D_Z, DiffVar::D_TAU}) {
            CHECK(fd_check(gen(g), v, UpperHalfPoint(-0.3, 1.05), {0.35, 0.6}) < 1e-5);
        }
    }
}

TEST_CASE("mixed partials commute numerically")
{
    const Expr wp = gen(Generator::WP);
    const Expr a = differentiate(differentiate(wp, DiffVar::D_Z), DiffVar::D_TAU);
    const Expr b = differentiate(differentiate(wp, DiffVar::D_TAU), DiffVar::D_Z);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.15, 0.85), re(-0.5, 0.5), im(0.9, 2.0);
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau(re(rng), im(rng));
        const Complex z = u(rng) + u(rng) * tau.value();
        const Complex va = eval_expr(a, tau, z);
        const Complex vb = eval_expr(b, tau, z);
        CHECK(std::abs(va - vb) <= 1e-6 * std::max(1.0, std::abs(va)));
    }
}

TEST_CASE("Leibniz rule")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 15; ++i) {
        const Expr a = random_expr(rng);
        const Expr b = random_expr(rng);
        for (DiffVar v : {DiffVar::D_Z, DiffVar::D_TAU}) {
            const Expr lhs = differentiate(a * b, v);
            const Expr rhs = a * differentiate(b, v) + differentiate(a, v) * b;
            CHECK(formally_equal(lhs, rhs, i));
        }
    }
    CHECK_FALSE(formally_equal(gen(Generator::WP), gen(Generator::WPP)));
}

TEST_CASE("arithmetic normalizes")
{
    const Expr wp = gen(Generator::WP);
    const Expr e4 = gen(Generator::E4);
    CHECK((wp * e4) / e4 == wp);
    CHECK((wp.pow(2) - Expr::integer(1)) / (wp - Expr::integer(1)) == wp + Expr::integer(1));
    CHECK((wp / e4) * (e4 / wp) == Expr::integer(1));
    CHECK(Expr::pi_power(3) / Expr::pi_power(5) == Expr::pi_power(-2));
    CHECK(wp.pow(-2) * wp.pow(2) == Expr::integer(1));
    CHECK(wp - wp == Expr());
    CHECK_THROWS_AS(wp / Expr(), Error);
}

TEST_CASE("printing")
{
    CHECK(to_string(differentiate(gen(Generator::ZETA), DiffVar::D_Z)) == "-(wp)");
    CHECK(to_string(Expr()) == "0");
    CHECK(to_string(Expr::integer(1)) == "(1)");
    CHECK(to_string(Expr::rational(-3, 4) * gen(Generator::E4)) == "-(3/4*E4)");
    CHECK(to_string(Expr::imaginary_unit() * Expr::pi_power(2)) == "(I*pi^2)");
    CHECK(to_string(Expr::integer(1) / gen(Generator::WP)) == "((1))/((wp))");
    CHECK(to_string(Expr::pi_power(-1) * gen(Generator::Z)) == "(pi^(-1)*z)");
}

TEST_CASE("print and parse round trip")
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        const Expr e = random_expr(rng);
        const std::string s = to_string(e);
        const Expr back = parse_expr(s);
        CHECK(back == e);
        CHECK(to_string(back) == s);
    }
    for (Generator g : all_generators) {
        for (DiffVar v : {DiffVar::D_Z, DiffVar::D_TAU}) {
            const Expr &r = default_rules().rule(g, v);
            CHECK(parse_expr(to_string(r)) == r);
        }
    }
    const Expr c = Expr::constant(Coefficient(Rational(1, 2), Rational(-3, 5))) * gen(Generator::E6);
    CHECK(parse_expr(to_string(c)) == c);
}

TEST_CASE("parser")
{
    CHECK(parse_expr("-wp^2") == -(gen(Generator::WP).pow(2)));
    CHECK(parse_expr("0.25*z") == Expr::rational(1, 4) * gen(Generator::Z));
    CHECK(parse_expr("wp^(-1)") == Expr::integer(1) / gen(Generator::WP));
    CHECK(parse_expr("Delta") == delta_expr());
    CHECK(parse_expr("g2") == g2_expr());
    CHECK(parse_expr("2 + 3*4") == Expr::integer(14));
    CHECK(parse_expr("(1 - 2) - 3") == Expr::integer(-4));
    for (const char *bad : {"", "wp +", "foo", "(wp", "wp)", "1/0", "wp^100", "2..3", "wp $ z"}) {
        try {
            parse_expr(bad);
            FAIL("accepted '" << bad << "'");
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::Parse);
        }
    }
}

TEST_CASE("exact division")
{
    const Polynomial x = Polynomial::generator(Generator::WP);
    const Polynomial y = Polynomial::generator(Generator::E4);
    const auto q = exact_divide(x * x - y * y, x + y);
    REQUIRE(q.has_value());
    CHECK(*q == x - y);
    CHECK_FALSE(exact_divide(x * x + y, x).has_value());
}

TEST_CASE("corrupting any rule coefficient is detected")
{
    SuiteOptions options;
    options.only = {"derivative_closure_fd", "ramanujan_fd"};
    options.with_timestamp = false;
    for (std::size_t i = 0; i < rule_coefficient_count; ++i) {
        const auto which = static_cast<RuleCoefficient>(i);
        RuleCoefficients c;
        c[which] += 1;
        const DerivativeRules mutated(c);
        options.rules = &mutated;
        const auto report = run_identity_suite(42, {}, options);
        INFO(rule_coefficient_name(which));
        CHECK_FALSE(report.all_passed());
    }
}
