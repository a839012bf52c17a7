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

#ifndef WEIER_EXPR_HPP
#define WEIER_EXPR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "weier/numerics.hpp"

namespace weier
{

// Exact rational functions in z, tau, wp, wp', zeta, E2, E4, E6 and their
// derivatives in z and tau. g2, g3 and Delta are abbreviations:
//
//   g2 = (4 pi^4 / 3) E4,  g3 = (8 pi^6 / 27) E6,  Delta = g2^3 - 27 g3^2.

enum class Generator : std::uint8_t { Z, TAU, WP, WPP, ZETA, E2, E4, E6 };
inline constexpr std::size_t generator_count = 8;
inline constexpr std::array<Generator, generator_count> all_generators{
    Generator::Z,  Generator::TAU, Generator::WP, Generator::WPP,
    Generator::ZETA, Generator::E2, Generator::E4, Generator::E6};

std::string_view generator_name(Generator g);

enum class DiffVar { D_Z, D_TAU };

using Rational = boost::multiprecision::cpp_rational;

/// re + i im with exact rational parts.
struct Coefficient {
    Rational re;
    Rational im;

    Coefficient() = default;
    Coefficient(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    Coefficient(long long r) : re(r) {}

    bool is_zero() const
    {
        return re == 0 && im == 0;
    }
    Complex to_complex() const;

    friend Coefficient operator+(const Coefficient &a, const Coefficient &b);
    friend Coefficient operator-(const Coefficient &a, const Coefficient &b);
    friend Coefficient operator*(const Coefficient &a, const Coefficient &b);
    friend Coefficient operator/(const Coefficient &a, const Coefficient &b);
    friend Coefficient operator-(const Coefficient &a);
    friend bool operator==(const Coefficient &, const Coefficient &) = default;
};

struct Monomial {
    std::array<int, generator_count> powers{};
    int pi_power = 0;

    int degree() const;
    friend bool operator==(const Monomial &, const Monomial &) = default;
};

/// Graded order, highest first: total degree, then powers lexicographically
/// in generator order, then the power of pi.
struct MonomialOrder {
    bool operator()(const Monomial &x, const Monomial &y) const;
};

class Polynomial
{
public:
    using Terms = std::map<Monomial, Coefficient, MonomialOrder>;

    Polynomial() = default;
    static Polynomial constant(const Coefficient &c);
    static Polynomial generator(Generator g);

    const Terms &terms() const
    {
        return terms_;
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    bool is_one() const;
    bool uses(Generator g) const;

    void add_term(const Monomial &m, const Coefficient &c);

    Polynomial partial(Generator g) const;

    /// Value at the given generator values; mass receives sum of |term|.
    Complex evaluate(const std::array<Complex, generator_count> &values, double *mass = nullptr) const;

    friend Polynomial operator+(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator-(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator-(const Polynomial &a);
    friend bool operator==(const Polynomial &, const Polynomial &) = default;

    Polynomial scaled(const Coefficient &c, const Monomial &shift, bool divide) const;

private:
    Terms terms_;
};

/// Exact quotient if d divides p, otherwise nullopt.
std::optional<Polynomial> exact_divide(const Polynomial &p, const Polynomial &d);

/// Numerator over denominator, lightly normalized: common monomial factors
/// removed, denominator leading coefficient 1, and exact quotients taken.
class Expr
{
public:
    Expr() : den_(Polynomial::constant(1)) {}
    Expr(const Polynomial &num); // NOLINT(google-explicit-constructor)
    Expr(const Polynomial &num, const Polynomial &den);

    static Expr generator(Generator g);
    static Expr constant(const Coefficient &c);
    static Expr integer(long long v)
    {
        return constant(Coefficient(v));
    }
    static Expr rational(long long p, long long q);
    static Expr pi_power(int k);
    static Expr imaginary_unit();

    const Polynomial &num() const
    {
        return num_;
    }
    const Polynomial &den() const
    {
        return den_;
    }
    bool is_zero() const
    {
        return num_.is_zero();
    }
    bool uses(Generator g) const
    {
        return num_.uses(g) || den_.uses(g);
    }
    std::size_t size() const
    {
        return num_.terms().size() + den_.terms().size();
    }

    friend Expr operator+(const Expr &a, const Expr &b);
    friend Expr operator-(const Expr &a, const Expr &b);
    friend Expr operator*(const Expr &a, const Expr &b);
    friend Expr operator/(const Expr &a, const Expr &b);
    friend Expr operator-(const Expr &a);
    friend bool operator==(const Expr &, const Expr &) = default;

    Expr pow(int k) const;

private:
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

Expr g2_expr();
Expr g3_expr();
Expr delta_expr();

/// Every numeric constant in the derivative rule table, addressable so that
/// tests can corrupt a single one.
enum class RuleCoefficient : std::uint8_t {
    WppCubic,     // D_Z wp' = 6 wp^2 ...
    WppG2,        //           ... - g2/2
    ZetaWp,       // D_Z zeta = -wp
    RamanujanE2,  // (1/2 pi i) E2' = (E2^2 - E4)/12
    RamanujanE4,  // (1/2 pi i) E4' = (E2 E4 - E6)/3
    RamanujanE6,  // (1/2 pi i) E6' = (E2 E6 - E4^2)/2
    BridgeG2,     // g2 = (4/3) pi^4 E4
    BridgeG3,     // g3 = (8/27) pi^6 E6
    // Delta d(wp)/d(g3)
    WpG3ZetaWpp, WpG3ZWpp, WpG3Wp2, WpG3Wp, WpG3One,
    // Delta d(wp)/d(g2)
    WpG2ZetaWpp, WpG2ZWpp, WpG2Wp2, WpG2Wp, WpG2One,
    // Delta d(zeta)/d(g3)
    ZetaG3ZetaWp, ZetaG3Zeta, ZetaG3ZWp, ZetaG3Z, ZetaG3Wpp,
    // Delta d(zeta)/d(g2)
    ZetaG2ZetaWp, ZetaG2Zeta, ZetaG2ZWp, ZetaG2Z, ZetaG2Wpp,
    Count
};
inline constexpr std::size_t rule_coefficient_count = static_cast<std::size_t>(RuleCoefficient::Count);

std::string_view rule_coefficient_name(RuleCoefficient c);

struct RuleCoefficients {
    RuleCoefficients();
    Rational &operator[](RuleCoefficient c)
    {
        return values[static_cast<std::size_t>(c)];
    }
    const Rational &operator[](RuleCoefficient c) const
    {
        return values[static_cast<std::size_t>(c)];
    }
    std::array<Rational, rule_coefficient_count> values;
};

/// d(generator)/d(var) for every generator and both variables.
class DerivativeRules
{
public:
    explicit DerivativeRules(const RuleCoefficients &coefficients = {});

    const Expr &rule(Generator g, DiffVar v) const
    {
        return table_[static_cast<std::size_t>(g)][v == DiffVar::D_Z ? 0 : 1];
    }
    const RuleCoefficients &coefficients() const
    {
        return coefficients_;
    }

private:
    RuleCoefficients coefficients_;
    std::array<std::array<Expr, 2>, generator_count> table_;
};

const DerivativeRules &default_rules();

Expr differentiate(const Expr &e, DiffVar v, const DerivativeRules &rules = default_rules());

/// Evaluates with every generator bound to an arbitrary value; used to test
/// identities of rational functions.
Complex eval_formal(const Expr &e, const std::array<Complex, generator_count> &values);

/// Structural equality, falling back to agreement of eval_formal at five
/// pseudo-random points.
bool formally_equal(const Expr &a, const Expr &b, std::uint64_t seed = 1);

/// Binds the generators to the Weierstrass functions at (tau, z).
Complex eval_expr(const Expr &e, const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy = {});

/// |Richardson central difference - eval(differentiate(e, v))| / max(1, |eval(differentiate(e, v))|).
double fd_check(const Expr &e, DiffVar v, const UpperHalfPoint &tau, Complex z, double h = 1e-4,
                const DerivativeRules &rules = default_rules(), const TolerancePolicy &policy = {});

/// Fully parenthesized infix; generators z, tau, wp, wp1, zeta, E2, E4, E6,
/// constants pi and I, rational coefficients p/q.
std::string to_string(const Expr &e);

/// Accepts the printed form and ordinary infix with + - * / ^ (integer
/// exponents), decimals, and the abbreviations g2, g3, Delta.
Expr parse_expr(std::string_view text);

} // namespace weier

#endif
