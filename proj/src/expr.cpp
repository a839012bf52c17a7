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

#include "weier/expr.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <random>
#include <vector>

#include "weier/reduction.hpp"

namespace weier
{

std::string_view generator_name(Generator g)
{
    switch (g) {
        case Generator::Z:
            return "z";
        case Generator::TAU:
            return "tau";
        case Generator::WP:
            return "wp";
        case Generator::WPP:
            return "wp1";
        case Generator::ZETA:
            return "zeta";
        case Generator::E2:
            return "E2";
        case Generator::E4:
            return "E4";
        case Generator::E6:
            return "E6";
    }
    return "?";
}

// Coefficient ---------------------------------------------------------------

Complex Coefficient::to_complex() const
{
    return {re.convert_to<double>(), im.convert_to<double>()};
}

Coefficient operator+(const Coefficient &a, const Coefficient &b)
{
    return {a.re + b.re, a.im + b.im};
}

Coefficient operator-(const Coefficient &a, const Coefficient &b)
{
    return {a.re - b.re, a.im - b.im};
}

Coefficient operator*(const Coefficient &a, const Coefficient &b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Coefficient operator/(const Coefficient &a, const Coefficient &b)
{
    const Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "division by zero");
    }
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

Coefficient operator-(const Coefficient &a)
{
    return {-a.re, -a.im};
}

// Monomial ------------------------------------------------------------------

int Monomial::degree() const
{
    int d = 0;
    for (int p : powers) {
        d += p;
    }
    return d;
}

bool MonomialOrder::operator()(const Monomial &x, const Monomial &y) const
{
    const int dx = x.degree();
    const int dy = y.degree();
    if (dx != dy) {
        return dx > dy;
    }
    for (std::size_t i = 0; i < generator_count; ++i) {
        if (x.powers[i] != y.powers[i]) {
            return x.powers[i] > y.powers[i];
        }
    }
    return x.pi_power > y.pi_power;
}

namespace
{

Monomial times(const Monomial &a, const Monomial &b)
{
    Monomial m;
    for (std::size_t i = 0; i < generator_count; ++i) {
        m.powers[i] = a.powers[i] + b.powers[i];
    }
    m.pi_power = a.pi_power + b.pi_power;
    return m;
}

std::optional<Monomial> quotient(const Monomial &a, const Monomial &b)
{
    Monomial m;
    for (std::size_t i = 0; i < generator_count; ++i) {
        m.powers[i] = a.powers[i] - b.powers[i];
        if (m.powers[i] < 0) {
            return std::nullopt;
        }
    }
    m.pi_power = a.pi_power - b.pi_power;
    return m;
}

} // namespace

// Polynomial ----------------------------------------------------------------

Polynomial Polynomial::constant(const Coefficient &c)
{
    Polynomial p;
    p.add_term(Monomial{}, c);
    return p;
}

Polynomial Polynomial::generator(Generator g)
{
    Monomial m;
    m.powers[static_cast<std::size_t>(g)] = 1;
    Polynomial p;
    p.add_term(m, 1);
    return p;
}

bool Polynomial::is_one() const
{
    return terms_.size() == 1 && terms_.begin()->first == Monomial{} && terms_.begin()->second == Coefficient(1);
}

bool Polynomial::uses(Generator g) const
{
    const auto i = static_cast<std::size_t>(g);
    return std::any_of(terms_.begin(), terms_.end(), [i](const auto &t) { return t.first.powers[i] > 0; });
}

void Polynomial::add_term(const Monomial &m, const Coefficient &c)
{
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

Polynomial Polynomial::partial(Generator g) const
{
    const auto i = static_cast<std::size_t>(g);
    Polynomial out;
    for (const auto &[m, c] : terms_) {
        if (m.powers[i] > 0) {
            Monomial d = m;
            --d.powers[i];
            out.add_term(d, c * Coefficient(m.powers[i]));
        }
    }
    return out;
}

Complex Polynomial::evaluate(const std::array<Complex, generator_count> &values, double *mass) const
{
    Complex acc{};
    double total = 0.0;
    for (const auto &[m, c] : terms_) {
        Complex v = c.to_complex() * std::pow(pi, m.pi_power);
        for (std::size_t i = 0; i < generator_count; ++i) {
            for (int k = 0; k < m.powers[i]; ++k) {
                v *= values[i];
            }
        }
        acc += v;
        total += std::abs(v);
    }
    if (mass != nullptr) {
        *mass = total;
    }
    return acc;
}

Polynomial operator+(const Polynomial &a, const Polynomial &b)
{
    Polynomial out = a;
    for (const auto &[m, c] : b.terms_) {
        out.add_term(m, c);
    }
    return out;
}

Polynomial operator-(const Polynomial &a)
{
    Polynomial out;
    for (const auto &[m, c] : a.terms_) {
        out.terms_.emplace(m, -c);
    }
    return out;
}

Polynomial operator-(const Polynomial &a, const Polynomial &b)
{
    return a + (-b);
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
    Polynomial out;
    for (const auto &[ma, ca] : a.terms_) {
        for (const auto &[mb, cb] : b.terms_) {
            out.add_term(times(ma, mb), ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::scaled(const Coefficient &c, const Monomial &shift, bool divide) const
{
    Polynomial out;
    for (const auto &[m, coef] : terms_) {
        Monomial s = m;
        const int sign = divide ? -1 : 1;
        for (std::size_t i = 0; i < generator_count; ++i) {
            s.powers[i] += sign * shift.powers[i];
        }
        s.pi_power += sign * shift.pi_power;
        out.add_term(s, divide ? coef / c : coef * c);
    }
    return out;
}

std::optional<Polynomial> exact_divide(const Polynomial &p, const Polynomial &d)
{
    if (d.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "division by zero polynomial");
    }
    const auto &[lead_m, lead_c] = *d.terms().begin();
    Polynomial rest = p;
    Polynomial q;
    // pi may carry negative powers, so the graded order is not well founded
    // on its own; bound the work instead.
    const std::size_t limit = 4 * (p.terms().size() + 1) * (d.terms().size() + 1) + 64;
    for (std::size_t step = 0; !rest.is_zero(); ++step) {
        if (step > limit) {
            return std::nullopt;
        }
        const auto &[rm, rc] = *rest.terms().begin();
        const auto t = quotient(rm, lead_m);
        if (!t) {
            return std::nullopt;
        }
        const Coefficient c = rc / lead_c;
        Polynomial single;
        single.add_term(*t, c);
        q.add_term(*t, c);
        rest = rest - single * d;
    }
    return q;
}

// Expr ----------------------------------------------------------------------

Expr::Expr(const Polynomial &num) : num_(num), den_(Polynomial::constant(1)) {}

Expr::Expr(const Polynomial &num, const Polynomial &den) : num_(num), den_(den)
{
    normalize();
}

void Expr::normalize()
{
    if (den_.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "division by zero");
    }
    if (num_.is_zero()) {
        den_ = Polynomial::constant(1);
        return;
    }
    if (den_.is_one()) {
        return;
    }

    Monomial common = num_.terms().begin()->first;
    auto fold = [&common](const Polynomial &p) {
        for (const auto &[m, c] : p.terms()) {
            for (std::size_t i = 0; i < generator_count; ++i) {
                common.powers[i] = std::min(common.powers[i], m.powers[i]);
            }
            common.pi_power = std::min(common.pi_power, m.pi_power);
        }
    };
    fold(num_);
    fold(den_);
    const Coefficient lead = den_.terms().begin()->second;
    num_ = num_.scaled(lead, common, true);
    den_ = den_.scaled(lead, common, true);

    if (!den_.is_one()) {
        if (auto q = exact_divide(num_, den_)) {
            num_ = std::move(*q);
            den_ = Polynomial::constant(1);
        }
    }
}

Expr Expr::generator(Generator g)
{
    return Expr(Polynomial::generator(g));
}

Expr Expr::constant(const Coefficient &c)
{
    return Expr(Polynomial::constant(c));
}

Expr Expr::rational(long long p, long long q)
{
    return constant(Coefficient(Rational(p, q)));
}

Expr Expr::pi_power(int k)
{
    Monomial m;
    m.pi_power = k;
    Polynomial p;
    p.add_term(m, 1);
    return Expr(p);
}

Expr Expr::imaginary_unit()
{
    return constant(Coefficient(0, 1));
}

Expr operator+(const Expr &a, const Expr &b)
{
    if (a.den_ == b.den_) {
        return {a.num_ + b.num_, a.den_};
    }
    if (b.den_.is_one()) {
        return {a.num_ + b.num_ * a.den_, a.den_};
    }
    if (a.den_.is_one()) {
        return {a.num_ * b.den_ + b.num_, b.den_};
    }
    if (auto k = exact_divide(a.den_, b.den_)) {
        return {a.num_ + b.num_ * *k, a.den_};
    }
    if (auto k = exact_divide(b.den_, a.den_)) {
        return {a.num_ * *k + b.num_, b.den_};
    }
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Expr operator-(const Expr &a)
{
    Expr out = a;
    out.num_ = -a.num_;
    return out;
}

Expr operator-(const Expr &a, const Expr &b)
{
    return a + (-b);
}

Expr operator*(const Expr &a, const Expr &b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    if (a.den_ == b.num_) {
        return {a.num_, b.den_};
    }
    if (b.den_ == a.num_) {
        return {b.num_, a.den_};
    }
    return {a.num_ * b.num_, a.den_ * b.den_};
}

Expr operator/(const Expr &a, const Expr &b)
{
    if (b.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "division by zero");
    }
    return a * Expr(b.den_, b.num_);
}

Expr Expr::pow(int k) const
{
    if (k < 0) {
        return Expr::integer(1) / pow(-k);
    }
    Expr result = Expr::integer(1);
    Expr base = *this;
    while (k > 0) {
        if (k & 1) {
            result = result * base;
        }
        k >>= 1;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

Expr g2_expr()
{
    return Expr::rational(4, 3) * Expr::pi_power(4) * Expr::generator(Generator::E4);
}

Expr g3_expr()
{
    return Expr::rational(8, 27) * Expr::pi_power(6) * Expr::generator(Generator::E6);
}

Expr delta_expr()
{
    return g2_expr().pow(3) - Expr::integer(27) * g3_expr().pow(2);
}

// Derivative rules ------------------------------------------------------------

std::string_view rule_coefficient_name(RuleCoefficient c)
{
    static constexpr std::array<std::string_view, rule_coefficient_count> names{
        "wpp_cubic",       "wpp_g2",          "zeta_wp",        "ramanujan_e2",   "ramanujan_e4",
        "ramanujan_e6",    "bridge_g2",       "bridge_g3",      "wp_g3_zeta_wpp", "wp_g3_z_wpp",
        "wp_g3_wp2",       "wp_g3_wp",        "wp_g3_one",      "wp_g2_zeta_wpp", "wp_g2_z_wpp",
        "wp_g2_wp2",       "wp_g2_wp",        "wp_g2_one",      "zeta_g3_zeta_wp", "zeta_g3_zeta",
        "zeta_g3_z_wp",    "zeta_g3_z",       "zeta_g3_wpp",    "zeta_g2_zeta_wp", "zeta_g2_zeta",
        "zeta_g2_z_wp",    "zeta_g2_z",       "zeta_g2_wpp"};
    return names[static_cast<std::size_t>(c)];
}

RuleCoefficients::RuleCoefficients()
{
    using R = RuleCoefficient;
    auto set = [this](R c, long long p, long long q = 1) { (*this)[c] = Rational(p, q); };
    set(R::WppCubic, 6);
    set(R::WppG2, -1, 2);
    set(R::ZetaWp, -1);
    set(R::RamanujanE2, 1, 12);
    set(R::RamanujanE4, 1, 3);
    set(R::RamanujanE6, 1, 2);
    set(R::BridgeG2, 4, 3);
    set(R::BridgeG3, 8, 27);
    // Delta dwp/dg3 = (3 g2 zeta - 9/2 g3 z) wp' + 6 g2 wp^2 - 9 g3 wp - g2^2
    set(R::WpG3ZetaWpp, 3);
    set(R::WpG3ZWpp, -9, 2);
    set(R::WpG3Wp2, 6);
    set(R::WpG3Wp, -9);
    set(R::WpG3One, -1);
    // Delta dwp/dg2 = (-9/2 g3 zeta + g2^2 z/4) wp' - 9 g3 wp^2 + g2^2/2 wp + 3/2 g2 g3
    set(R::WpG2ZetaWpp, -9, 2);
    set(R::WpG2ZWpp, 1, 4);
    set(R::WpG2Wp2, -9);
    set(R::WpG2Wp, 1, 2);
    set(R::WpG2One, 3, 2);
    // Delta dzeta/dg3 = -3 zeta (g2 wp + 3 g3/2) + z/2 (9 g3 wp + g2^2/2) - 3/2 g2 wp'
    set(R::ZetaG3ZetaWp, -3);
    set(R::ZetaG3Zeta, -9, 2);
    set(R::ZetaG3ZWp, 9, 2);
    set(R::ZetaG3Z, 1, 4);
    set(R::ZetaG3Wpp, -3, 2);
    // Delta dzeta/dg2 = zeta/2 (9 g3 wp + g2^2/2) - g2 z/2 (g2 wp/2 + 3 g3/4) + 9/4 g3 wp'
    set(R::ZetaG2ZetaWp, 9, 2);
    set(R::ZetaG2Zeta, 1, 4);
    set(R::ZetaG2ZWp, -1, 4);
    set(R::ZetaG2Z, -3, 8);
    set(R::ZetaG2Wpp, 9, 4);
}

namespace
{

using RuleTable = std::array<std::array<Expr, 2>, generator_count>;

const Expr &lookup(const RuleTable &table, Generator g, DiffVar v)
{
    return table[static_cast<std::size_t>(g)][v == DiffVar::D_Z ? 0 : 1];
}

Expr derivative_of(const Polynomial &p, DiffVar v, const RuleTable &table)
{
    Expr acc;
    for (Generator g : all_generators) {
        const Expr &rule = lookup(table, g, v);
        if (rule.is_zero() || !p.uses(g)) {
            continue;
        }
        acc = acc + Expr(p.partial(g)) * rule;
    }
    return acc;
}

Expr derivative_of(const Expr &e, DiffVar v, const RuleTable &table)
{
    const Expr dn = derivative_of(e.num(), v, table);
    if (e.den().is_one()) {
        return dn;
    }
    const Expr dd = derivative_of(e.den(), v, table);
    if (dd.is_zero()) {
        return dn / Expr(e.den());
    }
    return (dn * Expr(e.den()) - Expr(e.num()) * dd) / Expr(e.den() * e.den());
}

} // namespace

DerivativeRules::DerivativeRules(const RuleCoefficients &coefficients) : coefficients_(coefficients)
{
    using R = RuleCoefficient;
    const auto &c = coefficients_;
    auto k = [&c](R r) { return Expr::constant(Coefficient(c[r])); };
    auto gen = Expr::generator;
    auto set = [this](Generator g, DiffVar v, Expr e) {
        table_[static_cast<std::size_t>(g)][v == DiffVar::D_Z ? 0 : 1] = std::move(e);
    };

    const Expr z = gen(Generator::Z);
    const Expr wp = gen(Generator::WP);
    const Expr wpp = gen(Generator::WPP);
    const Expr zeta = gen(Generator::ZETA);
    const Expr e2 = gen(Generator::E2);
    const Expr e4 = gen(Generator::E4);
    const Expr e6 = gen(Generator::E6);
    const Expr g2 = k(R::BridgeG2) * Expr::pi_power(4) * e4;
    const Expr g3 = k(R::BridgeG3) * Expr::pi_power(6) * e6;
    const Expr delta = g2.pow(3) - Expr::integer(27) * g3.pow(2);
    const Expr two_pi_i = Expr::constant(Coefficient(0, 2)) * Expr::pi_power(1);

    set(Generator::Z, DiffVar::D_Z, Expr::integer(1));
    set(Generator::WP, DiffVar::D_Z, wpp);
    set(Generator::WPP, DiffVar::D_Z, k(R::WppCubic) * wp * wp + k(R::WppG2) * g2);
    set(Generator::ZETA, DiffVar::D_Z, k(R::ZetaWp) * wp);

    set(Generator::TAU, DiffVar::D_TAU, Expr::integer(1));
    const Expr de2 = two_pi_i * k(R::RamanujanE2) * (e2 * e2 - e4);
    const Expr de4 = two_pi_i * k(R::RamanujanE4) * (e2 * e4 - e6);
    const Expr de6 = two_pi_i * k(R::RamanujanE6) * (e2 * e6 - e4 * e4);
    set(Generator::E2, DiffVar::D_TAU, de2);
    set(Generator::E4, DiffVar::D_TAU, de4);
    set(Generator::E6, DiffVar::D_TAU, de6);

    // wp and zeta depend on tau only through (g2, g3).
    const Expr dg2 = k(R::BridgeG2) * Expr::pi_power(4) * de4;
    const Expr dg3 = k(R::BridgeG3) * Expr::pi_power(6) * de6;

    const Expr wp_g3 = k(R::WpG3ZetaWpp) * g2 * zeta * wpp + k(R::WpG3ZWpp) * g3 * z * wpp
                       + k(R::WpG3Wp2) * g2 * wp * wp + k(R::WpG3Wp) * g3 * wp + k(R::WpG3One) * g2 * g2;
    const Expr wp_g2 = k(R::WpG2ZetaWpp) * g3 * zeta * wpp + k(R::WpG2ZWpp) * g2 * g2 * z * wpp
                       + k(R::WpG2Wp2) * g3 * wp * wp + k(R::WpG2Wp) * g2 * g2 * wp + k(R::WpG2One) * g2 * g3;
    const Expr zeta_g3 = k(R::ZetaG3ZetaWp) * zeta * g2 * wp + k(R::ZetaG3Zeta) * zeta * g3
                         + k(R::ZetaG3ZWp) * z * g3 * wp + k(R::ZetaG3Z) * z * g2 * g2 + k(R::ZetaG3Wpp) * g2 * wpp;
    const Expr zeta_g2 = k(R::ZetaG2ZetaWp) * zeta * g3 * wp + k(R::ZetaG2Zeta) * zeta * g2 * g2
                         + k(R::ZetaG2ZWp) * z * g2 * g2 * wp + k(R::ZetaG2Z) * z * g2 * g3 + k(R::ZetaG2Wpp) * g3 * wpp;

    const Expr dwp = (wp_g2 * dg2 + wp_g3 * dg3) / delta;
    set(Generator::WP, DiffVar::D_TAU, dwp);
    set(Generator::ZETA, DiffVar::D_TAU, (zeta_g2 * dg2 + zeta_g3 * dg3) / delta);
    // Mixed partials commute: d(wp')/dtau = d/dz (dwp/dtau).
    set(Generator::WPP, DiffVar::D_TAU, derivative_of(dwp, DiffVar::D_Z, table_));
}

const DerivativeRules &default_rules()
{
    static const DerivativeRules rules;
    return rules;
}

Expr differentiate(const Expr &e, DiffVar v, const DerivativeRules &rules)
{
    RuleTable table;
    for (Generator g : all_generators) {
        for (DiffVar var : {DiffVar::D_Z, DiffVar::D_TAU}) {
            table[static_cast<std::size_t>(g)][var == DiffVar::D_Z ? 0 : 1] = rules.rule(g, var);
        }
    }
    return derivative_of(e, v, table);
}

// Evaluation ------------------------------------------------------------------

Complex eval_formal(const Expr &e, const std::array<Complex, generator_count> &values)
{
    const Complex d = e.den().evaluate(values);
    if (d == Complex{}) {
        throw Error(ErrorKind::NearSingular, "denominator vanishes");
    }
    return e.num().evaluate(values) / d;
}

bool formally_equal(const Expr &a, const Expr &b, std::uint64_t seed)
{
    if (a == b) {
        return true;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    for (int trial = 0; trial < 5; ++trial) {
        std::array<Complex, generator_count> values;
        for (auto &v : values) {
            v = {dist(rng), dist(rng)};
        }
        const Complex va = eval_formal(a, values);
        const Complex vb = eval_formal(b, values);
        if (std::abs(va - vb) > 1e-9 * std::max({1.0, std::abs(va), std::abs(vb)})) {
            return false;
        }
    }
    return true;
}

Complex eval_expr(const Expr &e, const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy)
{
    std::array<Complex, generator_count> values{};
    auto at = [&values](Generator g) -> Complex & { return values[static_cast<std::size_t>(g)]; };
    at(Generator::Z) = z;
    at(Generator::TAU) = tau.value();
    if (e.uses(Generator::WP)) {
        at(Generator::WP) = wp_anywhere(tau, z, policy).value;
    }
    if (e.uses(Generator::WPP)) {
        at(Generator::WPP) = wp_prime_anywhere(tau, z, policy).value;
    }
    if (e.uses(Generator::ZETA)) {
        at(Generator::ZETA) = zeta_anywhere(tau, z, policy).value;
    }
    if (e.uses(Generator::E2) || e.uses(Generator::E4) || e.uses(Generator::E6)) {
        const auto es = eisenstein_anywhere(tau);
        at(Generator::E2) = es.E2;
        at(Generator::E4) = es.E4;
        at(Generator::E6) = es.E6;
    }
    double den_mass = 0.0;
    const Complex d = e.den().evaluate(values, &den_mass);
    if (std::abs(d) < 1e-12 * std::max(1.0, den_mass)) {
        throw Error(ErrorKind::NearSingular, "eval_expr: denominator is numerically zero");
    }
    return checked(e.num().evaluate(values) / d, "eval_expr");
}

double fd_check(const Expr &e, DiffVar v, const UpperHalfPoint &tau, Complex z, double h,
                const DerivativeRules &rules, const TolerancePolicy &policy)
{
    auto f = [&](double step) {
        if (v == DiffVar::D_Z) {
            return eval_expr(e, tau, z + step, policy);
        }
        return eval_expr(e, UpperHalfPoint(tau.value() + step), z, policy);
    };
    auto central = [&](double step) { return (f(step) - f(-step)) / (2.0 * step); };
    const Complex richardson = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    const Complex exact = eval_expr(differentiate(e, v, rules), tau, z, policy);
    return std::abs(richardson - exact) / std::max(1.0, std::abs(exact));
}

// Printing --------------------------------------------------------------------

namespace
{

std::string term_string(const Monomial &m, const Coefficient &c, bool &negative)
{
    std::vector<std::string> factors;
    const bool trivial = m == Monomial{};
    negative = false;
    if (c.im == 0) {
        negative = c.re < 0;
        const Rational mag = negative ? Rational(-c.re) : c.re;
        if (mag != 1 || trivial) {
            factors.push_back(mag.str());
        }
    } else if (c.re == 0) {
        negative = c.im < 0;
        const Rational mag = negative ? Rational(-c.im) : c.im;
        factors.push_back(mag == 1 ? std::string("I") : mag.str() + "*I");
    } else {
        const Rational mag = c.im < 0 ? Rational(-c.im) : c.im;
        factors.push_back("(" + c.re.str() + (c.im < 0 ? " - " : " + ") + mag.str() + "*I)");
    }
    if (m.pi_power == 1) {
        factors.emplace_back("pi");
    } else if (m.pi_power > 1) {
        factors.push_back("pi^" + std::to_string(m.pi_power));
    } else if (m.pi_power < 0) {
        factors.push_back("pi^(" + std::to_string(m.pi_power) + ")");
    }
    for (Generator g : all_generators) {
        const int p = m.powers[static_cast<std::size_t>(g)];
        if (p == 1) {
            factors.emplace_back(generator_name(g));
        } else if (p > 1) {
            factors.push_back(std::string(generator_name(g)) + "^" + std::to_string(p));
        }
    }
    std::string body;
    for (const auto &f : factors) {
        if (!body.empty()) {
            body += "*";
        }
        body += f;
    }
    return "(" + body + ")";
}

std::string poly_string(const Polynomial &p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[m, c] : p.terms()) {
        bool negative = false;
        const std::string t = term_string(m, c, negative);
        if (first) {
            out += negative ? "-" + t : t;
            first = false;
        } else {
            out += (negative ? " - " : " + ") + t;
        }
    }
    return out;
}

} // namespace

std::string to_string(const Expr &e)
{
    if (e.den().is_one()) {
        return poly_string(e.num());
    }
    return "(" + poly_string(e.num()) + ")/(" + poly_string(e.den()) + ")";
}

// Parsing ---------------------------------------------------------------------

namespace
{

class Parser
{
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse()
    {
        Expr e = sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const
    {
        throw Error(ErrorKind::Parse, msg + " at offset " + std::to_string(pos_));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr sum()
    {
        Expr acc = product();
        for (;;) {
            if (accept('+')) {
                acc = acc + product();
            } else if (accept('-')) {
                acc = acc - product();
            } else {
                return acc;
            }
        }
    }

    Expr product()
    {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                Expr d = unary();
                if (d.is_zero()) {
                    fail("division by zero");
                }
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    Expr unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept('^')) {
            const bool paren = accept('(');
            const bool negative = accept('-');
            const long long k = integer();
            if (paren && !accept(')')) {
                fail("expected ')'");
            }
            if (k > 64) {
                fail("exponent too large");
            }
            const int e = static_cast<int>(negative ? -k : k);
            if (e < 0 && base.is_zero()) {
                fail("division by zero");
            }
            return base.pow(e);
        }
        return base;
    }

    long long integer()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected an integer");
        }
        if (pos_ - start > 18) {
            fail("integer too long");
        }
        return std::stoll(std::string(text_.substr(start, pos_ - start)));
    }

    Expr number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        std::string digits(text_.substr(start, pos_ - start));
        Rational scale = 1;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            const std::size_t frac = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            digits += std::string(text_.substr(frac, pos_ - frac));
            for (std::size_t i = frac; i < pos_; ++i) {
                scale *= 10;
            }
        }
        if (digits.empty()) {
            fail("malformed number");
        }
        // cpp_int reads a leading 0 as an octal prefix.
        const auto first = digits.find_first_not_of('0');
        digits = first == std::string::npos ? "0" : digits.substr(first);
        return Expr::constant(Coefficient(Rational(boost::multiprecision::cpp_int(digits)) / scale));
    }

    Expr primary()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size()
                   && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            return identifier(text_.substr(start, pos_ - start));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr identifier(std::string_view name)
    {
        for (Generator g : all_generators) {
            if (name == generator_name(g)) {
                return Expr::generator(g);
            }
        }
        if (name == "pi") {
            return Expr::pi_power(1);
        }
        if (name == "I") {
            return Expr::imaginary_unit();
        }
        if (name == "g2") {
            return g2_expr();
        }
        if (name == "g3") {
            return g3_expr();
        }
        if (name == "Delta" || name == "delta") {
            return delta_expr();
        }
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view text)
{
    return Parser(text).parse();
}

} // namespace weier
