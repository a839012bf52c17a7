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

#include "weier/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "weier/eisenstein.hpp"
#include "weier/reduction.hpp"
#include "weier/weierstrass.hpp"

namespace weier
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr int oracle_radius = 400;

using Rng = std::mt19937_64;

double uniform(Rng &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::uint64_t fnv1a(const std::string &s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Residual scaled by max(1, magnitudes of the terms being compared).
double rel(Complex diff, std::initializer_list<double> scales)
{
    double s = 1.0;
    for (double v : scales) {
        s = std::max(s, v);
    }
    return std::abs(diff) / s;
}

// Jittered 5 x 4 grid, reduced back into the standard domain.
UpperHalfPoint sample_tau(Rng &rng, int i)
{
    static constexpr std::array<double, 5> grid_re{-0.4, -0.2, 0.0, 0.2, 0.4};
    static constexpr std::array<double, 4> grid_im{0.9, 1.2, 2.0, 5.0};
    const int k = i % 20;
    const double re = grid_re[k % 5] + uniform(rng, -0.05, 0.05);
    const double im = grid_im[k / 5] + uniform(rng, -0.05, 0.05);
    return reduce_tau(UpperHalfPoint(re, im)).second;
}

// Cell point z = b + a tau away from the lattice.
Complex sample_z(Rng &rng, const UpperHalfPoint &tau, double min_dist = 0.05)
{
    for (;;) {
        const double a = uniform(rng, 0.0, 1.0);
        const double b = uniform(rng, 0.0, 1.0);
        const Complex z = b + a * tau.value();
        if (lattice_distance_anywhere(tau, z) >= min_dist) {
            return z;
        }
    }
}

class Accumulator
{
public:
    void add(double r)
    {
        residuals_.push_back(std::isnan(r) ? inf : r);
    }

    template <typename F>
    void guarded(F &&f)
    {
        try {
            f();
        } catch (const std::exception &e) {
            add(inf);
            if (errors_++ == 0) {
                first_error_ = e.what();
            }
        }
    }

    void note(const std::string &text)
    {
        if (!notes_.empty()) {
            notes_ += "; ";
        }
        notes_ += text;
    }

    IdentityCase finish(const std::string &name, double tolerance) const
    {
        IdentityCase c;
        c.name = name;
        c.tolerance = tolerance;
        c.sample_count = static_cast<int>(residuals_.size());
        double sum = 0.0;
        c.max_residual = residuals_.empty() ? inf : 0.0;
        for (double r : residuals_) {
            c.max_residual = std::max(c.max_residual, r);
            sum += r;
        }
        c.mean_residual = residuals_.empty() ? inf : sum / double(residuals_.size());
        c.passed = c.max_residual <= tolerance;
        c.notes = notes_;
        if (errors_ > 0) {
            if (!c.notes.empty()) {
                c.notes += "; ";
            }
            c.notes += std::to_string(errors_) + " sample(s) raised: " + first_error_;
        }
        return c;
    }

private:
    std::vector<double> residuals_;
    std::string notes_;
    int errors_ = 0;
    std::string first_error_;
};

struct Context {
    std::uint64_t seed;
    TolerancePolicy policy;
    const DerivativeRules &rules;
    Findings &findings;

    Rng rng_for(const std::string &name) const
    {
        return Rng(seed ^ fnv1a(name));
    }
};

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------------------

void case_ode_residual(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("ode_residual");
    for (int i = 0; i < 100; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        const Complex z = sample_z(rng, tau);
        acc.guarded([&] {
            const Complex p = wp_q(tau, z).value;
            const Complex p1 = wp_prime_q(tau, z).value;
            const auto inv = invariants_at(tau);
            const Complex lhs = p1 * p1;
            const Complex cubic = 4.0 * p * p * p;
            acc.add(rel(lhs - (cubic - inv.g2 * p - inv.g3),
                        {std::abs(lhs), std::abs(cubic), std::abs(inv.g2 * p), std::abs(inv.g3)}));
        });
    }
    acc.note("relative to the largest term");
}

Expr random_generator(Rng &rng)
{
    const auto i = std::uniform_int_distribution<std::size_t>(0, generator_count - 1)(rng);
    return Expr::generator(all_generators[i]);
}

Expr random_coefficient(Rng &rng)
{
    long long p = std::uniform_int_distribution<long long>(1, 5)(rng);
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
        p = -p;
    }
    return Expr::rational(p, std::uniform_int_distribution<long long>(1, 3)(rng));
}

// c1 A B + c2 C^2 + c3 D, optionally over (E2 + k) or (E4^2 + k); the
// denominators cannot vanish on the standard domain.
Expr random_composite(Rng &rng)
{
    Expr e = random_coefficient(rng) * random_generator(rng) * random_generator(rng)
             + random_coefficient(rng) * random_generator(rng).pow(2) + random_coefficient(rng) * random_generator(rng);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0:
            return e;
        case 1:
            return e / (Expr::generator(Generator::E2) + Expr::integer(3));
        default:
            return e / (Expr::generator(Generator::E4).pow(2) + Expr::integer(6));
    }
}

void case_derivative_closure_fd(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("derivative_closure_fd");
    std::vector<std::pair<UpperHalfPoint, Complex>> points;
    for (int i = 0; i < 4; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, 5 * i + i % 5);
        points.emplace_back(tau, sample_z(rng, tau, 0.1));
    }
    std::vector<Expr> composites;
    for (int i = 0; i < 5; ++i) {
        composites.push_back(random_composite(rng));
    }
    for (const auto &[tau, z] : points) {
        for (DiffVar v : {DiffVar::D_Z, DiffVar::D_TAU}) {
            for (Generator g : all_generators) {
                acc.guarded([&] { acc.add(fd_check(Expr::generator(g), v, tau, z, 1e-4, ctx.rules, ctx.policy)); });
            }
            for (const Expr &e : composites) {
                acc.guarded([&] { acc.add(fd_check(e, v, tau, z, 1e-4, ctx.rules, ctx.policy)); });
            }
        }
    }
    acc.note("16 generator/variable pairs and 5 composites at 4 points, h=1e-4 with Richardson");
}

void case_ramanujan_fd(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("ramanujan_fd");
    for (int i = 0; i < 10; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i * 3);
        for (Generator g : {Generator::E2, Generator::E4, Generator::E6}) {
            acc.guarded([&] {
                acc.add(fd_check(Expr::generator(g), DiffVar::D_TAU, tau, 0.3, 1e-4, ctx.rules, ctx.policy));
            });
        }
    }
}

void case_mixed_partials(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("mixed_partials");
    const Expr wp = Expr::generator(Generator::WP);
    const Expr zt = differentiate(differentiate(wp, DiffVar::D_Z, ctx.rules), DiffVar::D_TAU, ctx.rules);
    const Expr tz = differentiate(differentiate(wp, DiffVar::D_TAU, ctx.rules), DiffVar::D_Z, ctx.rules);
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        const Complex z = sample_z(rng, tau, 0.1);
        acc.guarded([&] {
            const Complex a = eval_expr(zt, tau, z, ctx.policy);
            const Complex b = eval_expr(tz, tau, z, ctx.policy);
            acc.add(rel(a - b, {std::abs(a), std::abs(b)}));
        });
    }
}

void case_leibniz_rule(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("leibniz_rule");
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    for (int i = 0; i < 10; ++i) {
        const Expr a = random_composite(rng);
        const Expr b = random_composite(rng);
        for (DiffVar v : {DiffVar::D_Z, DiffVar::D_TAU}) {
            acc.guarded([&] {
                const Expr lhs = differentiate(a * b, v, ctx.rules);
                const Expr rhs = a * differentiate(b, v, ctx.rules) + differentiate(a, v, ctx.rules) * b;
                double worst = 0.0;
                if (!(lhs == rhs)) {
                    for (int k = 0; k < 5; ++k) {
                        std::array<Complex, generator_count> values;
                        for (auto &x : values) {
                            x = {dist(rng), dist(rng)};
                        }
                        const Complex l = eval_formal(lhs, values);
                        const Complex r = eval_formal(rhs, values);
                        worst = std::max(worst, rel(l - r, {std::abs(l), std::abs(r)}));
                    }
                }
                acc.add(worst);
            });
        }
    }
    acc.note("structural equality, else agreement at 5 formal points");
}

void case_quasimodular_g2(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("quasimodular_g2");
    const QTruncation deep = QTruncation::with_order(200);
    const std::array<UnimodularMatrix, 3> gammas{UnimodularMatrix::S(), UnimodularMatrix::T() * UnimodularMatrix::S(),
                                                 UnimodularMatrix::S() * UnimodularMatrix::T(-1)};
    const double z2 = zeta_even(1);
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        for (const auto &g : gammas) {
            acc.guarded([&] {
                const Complex lambda = g.automorphy(tau.value());
                const Complex lhs = z2 * eisenstein_at(UpperHalfPoint(g.apply(tau.value())), deep).E2;
                const Complex rhs = lambda * lambda * z2 * eisenstein_at(tau, deep).E2
                                    - Complex{0.0, pi} * double(g.c()) * lambda;
                acc.add(rel(lhs - rhs, {std::abs(lhs)}));
            });
        }
    }
    acc.note("gamma in {S, TS, ST^-1}, both sides from the q-series");
}

void case_e2_anchor(Context &, Accumulator &acc)
{
    acc.guarded([&] { acc.add(std::abs(e2_anywhere(UpperHalfPoint(0.0, 1.0)) - 3.0 / pi)); });
    acc.note("E2(i) = 3/pi");
}

void case_eta1_anchor(Context &, Accumulator &acc)
{
    acc.guarded([&] { acc.add(std::abs(quasi_periods(UpperHalfPoint(0.0, 1.0)).first - pi)); });
    acc.note("eta1(i) = pi");
}

void case_legendre_relation(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("legendre_relation");
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        acc.guarded([&] {
            const auto [eta1, eta2] = quasi_periods(tau);
            const Complex a = eta1 * tau.value();
            acc.add(rel(a - eta2 - two_pi_i, {std::abs(a), std::abs(eta2)}));
        });
    }
}

void case_zeta_quasi_periodicity(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("zeta_quasi_periodicity");
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        const Complex t = tau.value();
        Complex z;
        do {
            z = uniform(rng, 0.0, 1.0) + uniform(rng, -0.9, -0.1) * t;
        } while (lattice_distance(tau, z) < 0.05 || lattice_distance(tau, z + t) < 0.05);
        acc.guarded([&] {
            const auto [eta1, eta2] = quasi_periods(tau);
            const Complex a = zeta_q(tau, z, default_truncation, ctx.policy).value;
            const Complex a1 = zeta_q(tau, z + 1.0, default_truncation, ctx.policy).value;
            const Complex at = zeta_q(tau, z + t, default_truncation, ctx.policy).value;
            acc.add(rel(a1 - a - eta1, {std::abs(a), std::abs(eta1)}));
            acc.add(rel(at - a - eta2, {std::abs(a), std::abs(eta2)}));
        });
    }
    acc.note("shifts by 1 and tau evaluated directly from the series");
}

struct AdditionSample {
    UpperHalfPoint tau;
    Complex u;
    Complex v;
};

std::vector<AdditionSample> duplication_samples(Rng &rng)
{
    std::vector<AdditionSample> out{{UpperHalfPoint(0.0, 1.0), 0.3, 0.3}};
    while (out.size() < 10) {
        const UpperHalfPoint tau = sample_tau(rng, int(out.size()) * 2);
        const Complex u = sample_z(rng, tau);
        if (lattice_distance_anywhere(tau, 2.0 * u) >= 0.05) {
            out.push_back({tau, u, u});
        }
    }
    return out;
}

void case_addition_formula(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("addition_formula");
    std::vector<AdditionSample> samples;
    for (int i = 0; samples.size() < 40; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        const Complex u = sample_z(rng, tau);
        const Complex v = sample_z(rng, tau);
        if (lattice_distance_anywhere(tau, u + v) >= 0.05 && lattice_distance_anywhere(tau, u - v) >= 0.05) {
            samples.push_back({tau, u, v});
        }
    }
    for (const auto &s : duplication_samples(rng)) {
        samples.push_back(s);
    }
    int hits = 0;
    for (const auto &s : samples) {
        acc.guarded([&] {
            const auto r = wp_add_detail(s.tau, s.u, s.v, ctx.policy);
            hits += r.duplication ? 1 : 0;
            const Complex direct = wp_anywhere(s.tau, s.u + s.v, ctx.policy).value;
            acc.add(rel(r.value - direct, {std::abs(direct)}));
        });
    }
    ctx.findings.duplication_branch_hits = hits;
    acc.note("duplication branch taken " + std::to_string(hits) + " times");
}

void case_duplication_formula(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("duplication_formula");
    double worst_plus = 0.0;
    double worst_minus = 0.0;
    for (const auto &s : duplication_samples(rng)) {
        acc.guarded([&] {
            const auto r = wp_add_detail(s.tau, s.u, s.v, ctx.policy);
            const Complex direct = wp_anywhere(s.tau, 2.0 * s.u, ctx.policy).value;
            acc.add(r.duplication ? rel(r.value - direct, {std::abs(direct)}) : inf);

            const Complex p = wp_anywhere(s.tau, s.u, ctx.policy).value;
            const Complex p1 = wp_prime_anywhere(s.tau, s.u, ctx.policy).value;
            const Complex g2 = invariants_anywhere(s.tau).g2;
            const Complex q = (6.0 * p * p - 0.5 * g2) / (2.0 * p1);
            worst_plus = std::max(worst_plus, rel(-2.0 * p + q * q - direct, {std::abs(direct)}));
            worst_minus = std::max(worst_minus, rel(-2.0 * p - q * q - direct, {std::abs(direct)}));
        });
    }
    ctx.findings.duplication_residual_plus = worst_plus;
    ctx.findings.duplication_residual_minus = worst_minus;
    ctx.findings.duplication_sign = worst_plus <= worst_minus ? "+" : "-";
    acc.note("wp(2u) = -2 wp(u) " + ctx.findings.duplication_sign + " (wp''/(2 wp'))^2; residual with + "
             + format_double(worst_plus) + ", with - " + format_double(worst_minus));
}

struct Triple {
    UpperHalfPoint tau;
    Complex x, y, z;
};

std::vector<Triple> zeta_triples(Rng &rng)
{
    std::vector<Triple> out;
    for (int i = 0; out.size() < 30; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        const Complex x = sample_z(rng, tau);
        const Complex y = sample_z(rng, tau);
        if (lattice_distance_anywhere(tau, x + y) >= 0.05) {
            out.push_back({tau, x, y, -x - y});
        }
    }
    return out;
}

void case_three_term_zeta(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("three_term_zeta");
    std::vector<double> plus;
    std::vector<double> minus;
    int errors = 0;
    for (const auto &t : zeta_triples(rng)) {
        try {
            const Complex s = zeta_anywhere(t.tau, t.x, ctx.policy).value + zeta_anywhere(t.tau, t.y, ctx.policy).value
                              + zeta_anywhere(t.tau, t.z, ctx.policy).value;
            const Complex p = wp_anywhere(t.tau, t.x, ctx.policy).value + wp_anywhere(t.tau, t.y, ctx.policy).value
                              + wp_anywhere(t.tau, t.z, ctx.policy).value;
            const Complex s2 = s * s;
            plus.push_back(rel(s2 + p, {std::abs(s2), std::abs(p)}));
            minus.push_back(rel(s2 - p, {std::abs(s2), std::abs(p)}));
        } catch (const std::exception &) {
            plus.push_back(inf);
            minus.push_back(inf);
            ++errors;
        }
    }
    const double wp_ = *std::max_element(plus.begin(), plus.end());
    const double wm = *std::max_element(minus.begin(), minus.end());
    const bool minus_wins = wm <= wp_;
    ctx.findings.zeta_three_term_residual_plus = wp_;
    ctx.findings.zeta_three_term_residual_minus = wm;
    ctx.findings.zeta_three_term_sign = minus_wins ? "-" : "+";
    for (double r : minus_wins ? minus : plus) {
        acc.add(r);
    }
    acc.note("x+y+z=0: [sum zeta]^2 " + ctx.findings.zeta_three_term_sign + " sum wp = 0 selected; residual with + "
             + format_double(wp_) + ", with - " + format_double(wm));
    if (errors > 0) {
        acc.note(std::to_string(errors) + " triple(s) raised");
    }
}

void case_shared_sample_closure(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("three_term_zeta");
    for (const auto &t : zeta_triples(rng)) {
        acc.guarded([&] {
            const Complex direct = wp_anywhere(t.tau, t.z, ctx.policy).value;
            const Complex added = wp_add(t.tau, t.x, t.y, ctx.policy);
            acc.add(rel(added - direct, {std::abs(direct)}));
        });
    }
    acc.note("wp_add(x, y) = wp(z) on the three-term triples");
}

struct OraclePoint {
    UpperHalfPoint tau;
    Complex z;
};

// Half of the points have Im(tau) in [0.2, 0.8] and need S-steps.
std::vector<OraclePoint> oracle_points(const Context &ctx)
{
    Rng rng = ctx.rng_for("oracle_points");
    std::vector<OraclePoint> out{{UpperHalfPoint(0.0, 0.5), {0.2, 0.1}}, {UpperHalfPoint(0.0, 1.0), {0.25, 0.25}}};
    while (out.size() < 30) {
        const bool low = out.size() % 2 == 0;
        const UpperHalfPoint tau = low ? UpperHalfPoint(uniform(rng, -0.5, 0.5), uniform(rng, 0.2, 0.8))
                                       : sample_tau(rng, int(out.size()));
        const Complex z = uniform(rng, 0.2, 0.8) + uniform(rng, 0.2, 0.8) * tau.value();
        if (lattice_distance_anywhere(tau, z) >= 0.02) {
            out.push_back({tau, z});
        }
    }
    return out;
}

void case_oracle_wp(Context &ctx, Accumulator &acc)
{
    double weight1 = 0.0;
    double weight2 = 0.0;
    int reduced = 0;
    for (const auto &pt : oracle_points(ctx)) {
        acc.guarded([&] {
            const Complex oracle = wp_lattice_oracle(pt.tau, pt.z, oracle_radius, ctx.policy);
            const Complex value = wp_anywhere(pt.tau, pt.z, ctx.policy).value;
            acc.add(rel(value - oracle, {std::abs(oracle)}));
            const auto red = reduce(pt.tau, pt.z);
            if (red.gamma.c() != 0) {
                ++reduced;
                // The weight-1 alternative is lambda^-1 wp(tau*; z/lambda).
                weight1 = std::max(weight1, rel(value * red.scale - oracle, {std::abs(oracle)}));
                weight2 = std::max(weight2, rel(value - oracle, {std::abs(oracle)}));
            }
        });
    }
    ctx.findings.wp_s_law_residual_weight1 = weight1;
    ctx.findings.wp_s_law_residual_weight2 = weight2;
    ctx.findings.wp_s_law_exponent = reduced == 0 ? 0 : (weight2 <= weight1 ? 2 : 1);
    acc.note(std::to_string(reduced) + " points needed an S-step; transport weight "
             + std::to_string(ctx.findings.wp_s_law_exponent) + " selected (weight 1 residual " + format_double(weight1)
             + ", weight 2 residual " + format_double(weight2) + ")");
}

void case_oracle_zeta(Context &ctx, Accumulator &acc)
{
    for (const auto &pt : oracle_points(ctx)) {
        acc.guarded([&] {
            const Complex oracle = zeta_lattice_oracle(pt.tau, pt.z, oracle_radius, ctx.policy);
            const Complex value = zeta_anywhere(pt.tau, pt.z, ctx.policy).value;
            acc.add(rel(value - oracle, {std::abs(oracle)}));
        });
    }
}

void case_oracle_eisenstein(Context &ctx, Accumulator &acc, int k)
{
    for (const auto &pt : oracle_points(ctx)) {
        acc.guarded([&] {
            const Complex oracle = lattice_sum_E(pt.tau, k, oracle_radius) / (2.0 * zeta_even(k));
            const auto e = eisenstein_anywhere(pt.tau);
            const Complex value = k == 2 ? e.E4 : e.E6;
            acc.add(rel(value - oracle, {std::abs(oracle)}));
        });
    }
}

void case_sine_limit(Context &ctx, Accumulator &acc)
{
    const UpperHalfPoint tau(0.0, 30.0);
    for (double x : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        acc.guarded([&] {
            const double s = std::sin(pi * x);
            const double limit = pi * pi / (s * s) - pi * pi / 3.0;
            acc.add(std::abs(wp_anywhere(tau, x, ctx.policy).value - limit));
        });
    }
    acc.note("tau = 30i, absolute");
}

std::vector<UpperHalfPoint> half_period_taus(Rng &rng)
{
    std::vector<UpperHalfPoint> out{UpperHalfPoint(0.3, 1.2)};
    for (int i = 1; i < 10; ++i) {
        out.push_back(sample_tau(rng, 2 * i + 1));
    }
    return out;
}

void case_half_period_sum(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("half_period");
    for (const auto &tau : half_period_taus(rng)) {
        acc.guarded([&] {
            const auto h = half_periods(tau);
            acc.add(std::abs(h.e1 + h.e2 + h.e3));
        });
    }
    acc.note("absolute");
}

void case_half_period_symmetric(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("half_period");
    for (const auto &tau : half_period_taus(rng)) {
        acc.guarded([&] {
            const auto h = half_periods(tau);
            const auto inv = invariants_at(tau);
            const Complex g2 = -4.0 * (h.e1 * h.e2 + h.e1 * h.e3 + h.e2 * h.e3);
            const Complex g3 = 4.0 * h.e1 * h.e2 * h.e3;
            acc.add(rel(g2 - inv.g2, {std::abs(inv.g2)}));
            acc.add(rel(g3 - inv.g3, {std::abs(inv.g3)}));
        });
    }
}

void case_delta_consistency(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("delta_consistency");
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, i);
        acc.guarded([&] {
            const auto inv = invariants_at(tau);
            const Complex a = inv.g2 * inv.g2 * inv.g2;
            const Complex b = 27.0 * inv.g3 * inv.g3;
            acc.add(std::abs(inv.delta - (a - b)) / std::max({std::abs(inv.delta), std::abs(a), std::abs(b)}));
        });
    }
    acc.note("product formula against g2^3 - 27 g3^2, relative to the largest term");
}

// Fourier coefficients of E2 recovered from the lattice sum at Im(tau) = 0.2
// and compared with the divisor-sum printer.
void case_e2_q_coefficients(Context &, Accumulator &acc)
{
    constexpr int order = 10;
    constexpr int samples = 64;
    constexpr double y = 0.2;
    acc.guarded([&] {
        std::vector<Complex> values;
        for (int j = 0; j < samples; ++j) {
            const UpperHalfPoint tau(double(j) / samples - 0.5, y);
            values.push_back(lattice_sum_E(tau, 1, oracle_radius) / zeta_even(1));
        }
        const auto printed = eisenstein_coefficients(2, order);
        double worst_fraction = 0.0;
        for (int n = 0; n <= order; ++n) {
            Complex c{};
            for (int j = 0; j < samples; ++j) {
                const double x = double(j) / samples - 0.5;
                c += values[j] * std::exp(Complex{0.0, -2.0 * pi * n * x});
            }
            const double a = (c / double(samples)).real() * std::exp(2.0 * pi * n * y);
            const double rounded = std::round(a);
            worst_fraction = std::max(worst_fraction, std::abs(a - rounded));
            acc.add(std::abs(a - rounded) < 0.01 ? std::abs(rounded - double(printed[n])) : inf);
        }
        acc.note("oracle coefficients within " + format_double(worst_fraction) + " of integers");
    });
}

void case_principal_part(Context &ctx, Accumulator &acc)
{
    Rng rng = ctx.rng_for("principal_part");
    for (int i = 0; i < 5; ++i) {
        const UpperHalfPoint tau = sample_tau(rng, 4 * i);
        for (double eps : {1e-2, 1e-3}) {
            acc.guarded([&] {
                TolerancePolicy loose = ctx.policy;
                loose.pole_guard_radius = eps / 2.0;
                acc.add(std::abs(wp_lattice_oracle(tau, eps, 50, loose) * eps * eps - 1.0));
            });
        }
    }
    acc.note("|wp(eps) eps^2 - 1| from the lattice sum");
}

using CaseFn = std::function<void(Context &, Accumulator &)>;

const std::vector<std::pair<std::string, CaseFn>> &registry()
{
    static const std::vector<std::pair<std::string, CaseFn>> cases{
        {"addition_formula", case_addition_formula},
        {"delta_consistency", case_delta_consistency},
        {"derivative_closure_fd", case_derivative_closure_fd},
        {"duplication_formula", case_duplication_formula},
        {"e2_anchor", case_e2_anchor},
        {"e2_q_coefficients", case_e2_q_coefficients},
        {"eta1_anchor", case_eta1_anchor},
        {"half_period_sum", case_half_period_sum},
        {"half_period_symmetric", case_half_period_symmetric},
        {"legendre_relation", case_legendre_relation},
        {"leibniz_rule", case_leibniz_rule},
        {"mixed_partials", case_mixed_partials},
        {"ode_residual", case_ode_residual},
        {"oracle_e4", [](Context &c, Accumulator &a) { case_oracle_eisenstein(c, a, 2); }},
        {"oracle_e6", [](Context &c, Accumulator &a) { case_oracle_eisenstein(c, a, 3); }},
        {"oracle_wp", case_oracle_wp},
        {"oracle_zeta", case_oracle_zeta},
        {"principal_part", case_principal_part},
        {"quasimodular_g2", case_quasimodular_g2},
        {"ramanujan_fd", case_ramanujan_fd},
        {"shared_sample_closure", case_shared_sample_closure},
        {"sine_limit", case_sine_limit},
        {"three_term_zeta", case_three_term_zeta},
        {"zeta_quasi_periodicity", case_zeta_quasi_periodicity},
    };
    return cases;
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

bool IdentityReport::all_passed() const
{
    return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const auto &c) { return c.passed; });
}

const IdentityCase *IdentityReport::find(const std::string &name) const
{
    for (const auto &c : cases) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

std::vector<std::string> identity_case_names()
{
    std::vector<std::string> names;
    for (const auto &entry : registry()) {
        names.push_back(entry.first);
    }
    return names;
}

double default_case_tolerance(const std::string &name, const TolerancePolicy &policy)
{
    static const std::map<std::string, double> fixed{
        {"addition_formula", 1e-7}, {"delta_consistency", 1e-12},    {"duplication_formula", 1e-7},
        {"e2_anchor", 1e-10},       {"e2_q_coefficients", 0.0},      {"half_period_sum", 1e-10},
        {"leibniz_rule", 1e-9},     {"mixed_partials", 1e-6},        {"ode_residual", 1e-8},
        {"principal_part", 1e-5},   {"shared_sample_closure", 1e-7}, {"sine_limit", 1e-10},
        {"three_term_zeta", 1e-8},
    };
    if (auto it = fixed.find(name); it != fixed.end()) {
        return it->second;
    }
    if (name == "derivative_closure_fd" || name == "ramanujan_fd") {
        return policy.fd_tol;
    }
    if (name.rfind("oracle_", 0) == 0) {
        return policy.oracle_tol;
    }
    for (const auto &entry : registry()) {
        if (entry.first == name) {
            return policy.identity_tol;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown identity case '" + name + "'");
}

IdentityReport run_identity_suite(std::uint64_t seed, const TolerancePolicy &policy, const SuiteOptions &options)
{
    policy.validate();
    IdentityReport report;
    report.seed = seed;
    report.policy = policy;
    report.timestamp = options.with_timestamp ? utc_timestamp() : std::string();
    for (const auto &name : options.only) {
        default_case_tolerance(name, policy); // rejects unknown names
    }
    for (const auto &[name, tol] : options.case_tolerances) {
        default_case_tolerance(name, policy);
        (void)tol;
    }

    Context ctx{seed, policy, options.rules != nullptr ? *options.rules : default_rules(), report.findings};
    for (const auto &[name, fn] : registry()) {
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), name) == options.only.end()) {
            continue;
        }
        const auto override_it = options.case_tolerances.find(name);
        const double tol =
            override_it != options.case_tolerances.end() ? override_it->second : default_case_tolerance(name, policy);
        Accumulator acc;
        try {
            fn(ctx, acc);
        } catch (const std::exception &e) {
            acc.add(inf);
            acc.note(std::string("case aborted: ") + e.what());
        }
        report.cases.push_back(acc.finish(name, tol));
    }
    return report;
}

SuiteConfig parse_suite_config(const std::string &text)
{
    SuiteConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        const std::string where = "config line " + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, where + ": expected key=value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string raw = trim(std::string_view(body).substr(eq + 1));
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc() || ptr != raw.data() + raw.size() || !std::isfinite(value) || value < 0.0) {
            throw Error(ErrorKind::InvalidArgument, where + ": '" + raw + "' is not a non-negative number");
        }
        auto &p = cfg.policy;
        if (key == "series_tail_bound") {
            p.series_tail_bound = value;
        } else if (key == "identity_tol") {
            p.identity_tol = value;
        } else if (key == "oracle_tol") {
            p.oracle_tol = value;
        } else if (key == "fd_tol") {
            p.fd_tol = value;
        } else if (key == "pole_guard_radius") {
            p.pole_guard_radius = value;
        } else if (key.rfind("case.", 0) == 0) {
            const std::string name = key.substr(5);
            const auto names = identity_case_names();
            if (std::find(names.begin(), names.end(), name) == names.end()) {
                throw Error(ErrorKind::InvalidArgument, where + ": unknown case '" + name + "'");
            }
            cfg.case_tolerances[name] = value;
        } else {
            throw Error(ErrorKind::InvalidArgument, where + ": unknown key '" + key + "'");
        }
    }
    cfg.policy.validate();
    return cfg;
}

SuiteConfig load_suite_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_suite_config(text.str());
}

std::string resolve_config_path(const std::string &fallback)
{
    const char *env = std::getenv("WEIER_TOL_FILE");
    return env != nullptr && *env != '\0' ? std::string(env) : fallback;
}

nlohmann::json to_json(const IdentityReport &report)
{
    nlohmann::json cases = nlohmann::json::array();
    for (const auto &c : report.cases) {
        cases.push_back({{"name", c.name},
                         {"sample_count", c.sample_count},
                         {"max_residual", c.max_residual},
                         {"mean_residual", c.mean_residual},
                         {"tolerance", c.tolerance},
                         {"passed", c.passed},
                         {"notes", c.notes}});
    }
    const auto &f = report.findings;
    const auto &p = report.policy;
    return {
        {"seed", report.seed},
        {"timestamp", report.timestamp},
        {"all_passed", report.all_passed()},
        {"policy",
         {{"series_tail_bound", p.series_tail_bound},
          {"identity_tol", p.identity_tol},
          {"oracle_tol", p.oracle_tol},
          {"fd_tol", p.fd_tol},
          {"pole_guard_radius", p.pole_guard_radius}}},
        {"findings",
         {{"wp_s_law_exponent", f.wp_s_law_exponent},
          {"wp_s_law_residual_weight1", f.wp_s_law_residual_weight1},
          {"wp_s_law_residual_weight2", f.wp_s_law_residual_weight2},
          {"zeta_three_term_sign", f.zeta_three_term_sign},
          {"zeta_three_term_residual_plus", f.zeta_three_term_residual_plus},
          {"zeta_three_term_residual_minus", f.zeta_three_term_residual_minus},
          {"duplication_sign", f.duplication_sign},
          {"duplication_residual_plus", f.duplication_residual_plus},
          {"duplication_residual_minus", f.duplication_residual_minus},
          {"duplication_branch_hits", f.duplication_branch_hits}}},
        {"cases", cases},
    };
}

std::string to_csv(const IdentityReport &report)
{
    std::string out = "name,sample_count,max_residual,mean_residual,tolerance,passed,notes\n";
    for (const auto &c : report.cases) {
        std::string notes;
        for (char ch : c.notes) {
            notes += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%d,%.6e,%.6e,%.6e,%s,", c.name.c_str(), c.sample_count, c.max_residual,
                      c.mean_residual, c.tolerance, c.passed ? "true" : "false");
        out += buf;
        out += "\"" + notes + "\"\n";
    }
    return out;
}

} // namespace weier
