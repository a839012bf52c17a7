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

#include "weier/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace weier
{

namespace
{

constexpr double eps = std::numeric_limits<double>::epsilon();

// exp(w) - 1 without cancellation for small |w|.
Complex expm1(Complex w)
{
    const double x = w.real();
    const double y = w.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// x = exp(2 pi i t) together with 1 - x, accurate when t is near an integer.
struct Unit {
    Complex x;
    Complex one_minus_x;
};

Unit unit(Complex t)
{
    const Complex centred{t.real() - std::round(t.real()), t.imag()};
    const Complex w = two_pi_i * centred;
    return {std::exp(w), -expm1(w)};
}

// Each series term is a function of x = exp(2 pi i t) that is (anti)symmetric
// under x -> 1/x; the branch with |x| <= 1 is always used.

// x / (1 - x)^2, even under x -> 1/x.
Complex wp_term(Complex t)
{
    const Unit e = unit(t.imag() >= 0.0 ? t : -t);
    return e.x / (e.one_minus_x * e.one_minus_x);
}

// x (1 + x) / (1 - x)^3, odd under x -> 1/x.
Complex wp_prime_term(Complex t)
{
    const bool flip = t.imag() < 0.0;
    const Unit e = unit(flip ? -t : t);
    const Complex d = e.one_minus_x;
    const Complex v = e.x * (1.0 + e.x) / (d * d * d);
    return flip ? -v : v;
}

// x / (1 - x) = -1 - (1/x) / (1 - 1/x).
Complex zeta_term(Complex t)
{
    if (t.imag() >= 0.0) {
        const Unit e = unit(t);
        return e.x / e.one_minus_x;
    }
    const Unit e = unit(-t);
    return -1.0 / e.one_minus_x;
}

// Bound on sum_{k>=0} f(r |q|^k) for the geometric term envelopes below.
double geometric_tail(double r, double abs_q, int power)
{
    if (r <= 0.0) {
        return 0.0;
    }
    if (r >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return r * (1.0 + r) / std::pow(1.0 - r, power) / (1.0 - abs_q);
}

void check_domain(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy, const char *who)
{
    checked(z, who);
    if (std::abs(z.imag()) >= tau.im()) {
        throw Error(ErrorKind::ConvergenceDomain,
                    std::string(who) + ": |Im z| must be below Im tau (reduce first)");
    }
    if (lattice_distance(tau, z) < policy.pole_guard_radius) {
        throw Error(ErrorKind::PoleProximity, std::string(who) + ": z is within the pole guard of the lattice");
    }
}

WValue finish(Complex value, double tail, double mass, const TolerancePolicy &policy, const char *who)
{
    return {checked(value, who), std::max(policy.series_tail_bound, tail + 8.0 * eps * mass)};
}

} // namespace

WValue wp_q(const UpperHalfPoint &tau, Complex z, const QTruncation &trunc, const TolerancePolicy &policy)
{
    check_domain(tau, z, policy, "wp_q");
    const Complex t = tau.value();
    const int N = trunc.order;

    Complex sum{};
    double mass = 0.0;
    for (int m = N; m >= -N; --m) {
        const Complex term = wp_term(z + double(m) * t);
        sum += term;
        mass += std::abs(term);
    }
    Complex constant{};
    for (int m = N; m >= 1; --m) {
        constant += wp_term(double(m) * t);
    }
    sum += 1.0 / 12.0 - 2.0 * constant;
    mass += 1.0 / 12.0 + 2.0 * std::abs(constant);

    const double aq = std::exp(-2.0 * pi * tau.im());
    const double two_pi_sq = 4.0 * pi * pi;
    const double tail = two_pi_sq * (geometric_tail(std::exp(-2.0 * pi * (z.imag() + (N + 1) * tau.im())), aq, 2)
                                     + geometric_tail(std::exp(-2.0 * pi * ((N + 1) * tau.im() - z.imag())), aq, 2)
                                     + 2.0 * geometric_tail(std::pow(aq, N + 1), aq, 2));
    return finish(two_pi_i * two_pi_i * sum, tail, two_pi_sq * mass, policy, "wp_q");
}

WValue wp_prime_q(const UpperHalfPoint &tau, Complex z, const QTruncation &trunc, const TolerancePolicy &policy)
{
    check_domain(tau, z, policy, "wp_prime_q");
    const Complex t = tau.value();
    const int N = trunc.order;

    Complex sum{};
    double mass = 0.0;
    for (int m = N; m >= -N; --m) {
        const Complex term = wp_prime_term(z + double(m) * t);
        sum += term;
        mass += std::abs(term);
    }
    const double aq = std::exp(-2.0 * pi * tau.im());
    const double two_pi_cu = 8.0 * pi * pi * pi;
    const double tail = two_pi_cu * (geometric_tail(std::exp(-2.0 * pi * (z.imag() + (N + 1) * tau.im())), aq, 3)
                                     + geometric_tail(std::exp(-2.0 * pi * ((N + 1) * tau.im() - z.imag())), aq, 3));
    return finish(two_pi_i * two_pi_i * two_pi_i * sum, tail, two_pi_cu * mass, policy, "wp_prime_q");
}

WValue zeta_q(const UpperHalfPoint &tau, Complex z, const QTruncation &trunc, const TolerancePolicy &policy)
{
    check_domain(tau, z, policy, "zeta_q");
    const Complex t = tau.value();
    const int N = trunc.order;

    Complex sum{};
    double mass = 0.0;
    for (int n = N; n >= 0; --n) {
        const Complex term = zeta_term(z + double(n) * t);
        sum -= term;
        mass += std::abs(term);
    }
    for (int n = N; n >= 1; --n) {
        const Complex term = zeta_term(double(n) * t - z);
        sum += term;
        mass += std::abs(term);
    }
    const auto inv = invariants_at(tau, trunc);
    const Complex value = two_pi_i * sum + inv.eta1 * z - Complex{0.0, pi};

    const double aq = std::exp(-2.0 * pi * tau.im());
    const double tail = 2.0 * pi * (geometric_tail(std::exp(-2.0 * pi * (z.imag() + (N + 1) * tau.im())), aq, 1)
                                    + geometric_tail(std::exp(-2.0 * pi * ((N + 1) * tau.im() - z.imag())), aq, 1))
                        + std::abs(z) * (pi * pi / 3.0) * 24.0 * divisor_series_tail(1, N, aq);
    return finish(value, tail, 2.0 * pi * mass + std::abs(inv.eta1 * z) + pi, policy, "zeta_q");
}

HalfPeriodData half_periods(const UpperHalfPoint &tau, const QTruncation &trunc)
{
    const Complex t = tau.value();
    return {wp_q(tau, 0.5, trunc).value, wp_q(tau, 0.5 * t, trunc).value, wp_q(tau, 0.5 * (1.0 + t), trunc).value};
}

namespace
{

template <typename Term>
Complex lattice_sum(const UpperHalfPoint &tau, Complex z, int radius, const TolerancePolicy &policy, Term term,
                    const char *who)
{
    checked(z, who);
    if (radius < 50) {
        throw Error(ErrorKind::InvalidArgument, std::string(who) + ": radius must be >= 50");
    }
    const Complex t = tau.value();
    Complex acc{};
    double closest = std::abs(z);
    for (int n = -radius; n <= radius; ++n) {
        Complex row{};
        for (int m = -radius; m <= radius; ++m) {
            if (m == 0 && n == 0) {
                continue;
            }
            const Complex w = double(m) + double(n) * t;
            closest = std::min(closest, std::abs(z - w));
            row += term(z, w);
        }
        acc += row;
    }
    if (closest < policy.pole_guard_radius) {
        throw Error(ErrorKind::PoleProximity, std::string(who) + ": z is within the pole guard of the lattice");
    }
    return acc;
}

} // namespace

Complex wp_lattice_oracle(const UpperHalfPoint &tau, Complex z, int radius, const TolerancePolicy &policy)
{
    const Complex rest = lattice_sum(
        tau, z, radius, policy,
        [](Complex x, Complex w) {
            const Complex d = x - w;
            return 1.0 / (d * d) - 1.0 / (w * w);
        },
        "wp_lattice_oracle");
    return checked(1.0 / (z * z) + rest, "wp_lattice_oracle");
}

Complex zeta_lattice_oracle(const UpperHalfPoint &tau, Complex z, int radius, const TolerancePolicy &policy)
{
    const Complex rest = lattice_sum(
        tau, z, radius, policy,
        [](Complex x, Complex w) {
            const Complex iw = 1.0 / w;
            return 1.0 / (x - w) + iw + x * iw * iw;
        },
        "zeta_lattice_oracle");
    return checked(1.0 / z + rest, "zeta_lattice_oracle");
}

} // namespace weier
