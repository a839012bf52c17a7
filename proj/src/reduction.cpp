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

#include "weier/reduction.hpp"

#include <cmath>
#include <limits>

namespace weier
{

namespace
{

constexpr int max_reduction_steps = 10000;
constexpr double unit_circle_slack = 1e-14;

std::int64_t narrow(__int128 v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorKind::NonTermination, "SL(2,Z) entries overflow; tau is too close to the real axis");
    }
    return static_cast<std::int64_t>(v);
}

std::int64_t floor_to_int(double x)
{
    const double f = std::floor(x);
    if (!(std::abs(f) < 9e18)) {
        throw Error(ErrorKind::InvalidArgument, "coordinate out of integer range");
    }
    return static_cast<std::int64_t>(f);
}

} // namespace

UnimodularMatrix::UnimodularMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : a_(a), b_(b), c_(c), d_(d)
{
    if (__int128(a) * d - __int128(b) * c != 1) {
        throw Error(ErrorKind::InvalidArgument, "matrix determinant must be 1");
    }
}

// fma keeps c x + d to one rounding, which matters when tau sits close to
// -d/c. The imaginary part uses ad - bc = 1.
Complex UnimodularMatrix::apply(Complex tau) const
{
    const double x = tau.real();
    const double y = tau.imag();
    const double nr = std::fma(double(a_), x, double(b_));
    const double ni = double(a_) * y;
    const double dr = std::fma(double(c_), x, double(d_));
    const double di = double(c_) * y;
    const double den = dr * dr + di * di;
    return {(nr * dr + ni * di) / den, y / den};
}

Complex UnimodularMatrix::automorphy(Complex tau) const
{
    return {std::fma(double(c_), tau.real(), double(d_)), double(c_) * tau.imag()};
}

UnimodularMatrix operator*(const UnimodularMatrix &x, const UnimodularMatrix &y)
{
    UnimodularMatrix r;
    r.a_ = narrow(__int128(x.a_) * y.a_ + __int128(x.b_) * y.c_);
    r.b_ = narrow(__int128(x.a_) * y.b_ + __int128(x.b_) * y.d_);
    r.c_ = narrow(__int128(x.c_) * y.a_ + __int128(x.d_) * y.c_);
    r.d_ = narrow(__int128(x.c_) * y.b_ + __int128(x.d_) * y.d_);
    return r;
}

std::pair<UnimodularMatrix, UpperHalfPoint> reduce_tau(const UpperHalfPoint &tau)
{
    const Complex t0 = tau.value();
    UnimodularMatrix gamma;
    Complex cur = t0;
    // Past 2^53 the entries are no longer exact doubles and apply() loses
    // the point; that only happens for tau within ~1e-16 of a rational.
    constexpr double exact_limit = 9007199254740992.0;
    auto update = [&](const UnimodularMatrix &step) {
        gamma = step * gamma;
        for (const std::int64_t e : {gamma.a(), gamma.b(), gamma.c(), gamma.d()}) {
            if (std::abs(double(e)) > exact_limit) {
                throw Error(ErrorKind::NonTermination, "reduce_tau: tau is too close to the real axis");
            }
        }
        cur = gamma.apply(t0);
        if (!std::isfinite(cur.real()) || !(cur.imag() > 0.0) || !std::isfinite(cur.imag())) {
            throw Error(ErrorKind::NonTermination, "reduce_tau: lost the point near the real axis");
        }
    };
    auto translate = [&] {
        const double f = std::floor(cur.real() + 0.5);
        if (!(std::abs(f) < 9e18)) {
            throw Error(ErrorKind::NonTermination, "reduce_tau: translation out of integer range");
        }
        auto n = static_cast<std::int64_t>(f);
        const Complex next = cur - double(n);
        if (next.real() >= 0.5) {
            ++n;
        } else if (next.real() < -0.5) {
            --n;
        }
        if (n != 0) {
            update(UnimodularMatrix::T(-n));
        }
    };
    for (int step = 0;; ++step) {
        if (step == max_reduction_steps) {
            throw Error(ErrorKind::NonTermination, "reduce_tau did not terminate");
        }
        translate();
        if (std::norm(cur) < 1.0 - unit_circle_slack) {
            update(UnimodularMatrix::S());
        } else {
            break;
        }
    }
    if (std::abs(std::norm(cur) - 1.0) <= unit_circle_slack && cur.real() > 0.0) {
        update(UnimodularMatrix::S());
        translate();
    }
    if (std::abs(cur.real()) > 0.5 + 1e-9) {
        throw Error(ErrorKind::NonTermination, "reduce_tau: translation did not settle");
    }
    return {gamma, UpperHalfPoint(cur)};
}

ZReduction reduce_z(const UpperHalfPoint &tau, Complex z)
{
    checked(z, "reduce_z");
    const auto [a, b] = coords_wrt_lattice(tau, z);
    ZReduction r{floor_to_int(b), floor_to_int(a), {}};
    // Rounding in the subtraction can push the reduced point across a cell edge.
    for (int pass = 0; pass < 3; ++pass) {
        r.z_star = z - double(r.m) - double(r.n) * tau.value();
        const auto [as, bs] = coords_wrt_lattice(tau, r.z_star);
        if (as < 0.0) {
            --r.n;
        } else if (as >= 1.0) {
            ++r.n;
        } else if (bs < 0.0) {
            --r.m;
        } else if (bs >= 1.0) {
            ++r.m;
        } else {
            break;
        }
    }
    return r;
}

ReductionResult reduce(const UpperHalfPoint &tau, Complex z)
{
    auto [gamma, tau_star] = reduce_tau(tau);
    const Complex scale = gamma.automorphy(tau.value());
    const auto zr = reduce_z(tau_star, z / scale);
    return {gamma, tau_star, zr.m, zr.n, zr.z_star, scale};
}

namespace
{

struct Transported {
    ReductionResult red;
    TolerancePolicy reduced_policy;
};

Transported prepare(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy, const char *who)
{
    Transported t{reduce(tau, z), policy};
    const double s = std::abs(t.red.scale);
    if (lattice_distance(t.red.tau_star, t.red.z_star) * s < policy.pole_guard_radius) {
        throw Error(ErrorKind::PoleProximity, std::string(who) + ": z is within the pole guard of the lattice");
    }
    t.reduced_policy.pole_guard_radius = policy.pole_guard_radius / s;
    return t;
}

} // namespace

WValue wp_anywhere(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy)
{
    const auto [red, reduced] = prepare(tau, z, policy, "wp_anywhere");
    const auto v = wp_q(red.tau_star, red.z_star, default_truncation, reduced);
    const Complex s2 = red.scale * red.scale;
    return {checked(v.value / s2, "wp_anywhere"), v.est_error / std::abs(s2)};
}

WValue wp_prime_anywhere(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy)
{
    const auto [red, reduced] = prepare(tau, z, policy, "wp_prime_anywhere");
    const auto v = wp_prime_q(red.tau_star, red.z_star, default_truncation, reduced);
    const Complex s3 = red.scale * red.scale * red.scale;
    return {checked(v.value / s3, "wp_prime_anywhere"), v.est_error / std::abs(s3)};
}

WValue zeta_anywhere(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy)
{
    const auto [red, reduced] = prepare(tau, z, policy, "zeta_anywhere");
    const auto v = zeta_q(red.tau_star, red.z_star, default_truncation, reduced);
    Complex value = v.value;
    double err = v.est_error;
    if (red.m != 0 || red.n != 0) {
        const Complex ts = red.tau_star.value();
        const auto h1 = zeta_q(red.tau_star, 0.5, default_truncation);
        const auto h2 = zeta_q(red.tau_star, 0.5 * ts, default_truncation);
        value += 2.0 * (double(red.m) * h1.value + double(red.n) * h2.value);
        err += 2.0 * (std::abs(double(red.m)) * h1.est_error + std::abs(double(red.n)) * h2.est_error);
    }
    return {checked(value / red.scale, "zeta_anywhere"), err / std::abs(red.scale)};
}

Complex e2_anywhere(const UpperHalfPoint &tau)
{
    const auto [gamma, tau_star] = reduce_tau(tau);
    const Complex lambda = gamma.automorphy(tau.value());
    // G2(gamma tau) = lambda^2 G2(tau) - pi i c lambda, with G2 = zeta(2) E2.
    const Complex g2_star = zeta_even(1) * eisenstein_at(tau_star).E2;
    const Complex g2 = (g2_star + Complex{0.0, pi} * double(gamma.c()) * lambda) / (lambda * lambda);
    return checked(g2 / zeta_even(1), "e2_anywhere");
}

EisensteinValues eisenstein_anywhere(const UpperHalfPoint &tau)
{
    const auto [gamma, tau_star] = reduce_tau(tau);
    const Complex lambda = gamma.automorphy(tau.value());
    const auto e = eisenstein_at(tau_star);
    const Complex l2 = lambda * lambda;
    const Complex l4 = l2 * l2;
    EisensteinValues out;
    out.E2 = e2_anywhere(tau);
    out.E4 = checked(e.E4 / l4, "E4");
    out.E6 = checked(e.E6 / (l4 * l2), "E6");
    out.tail_bound = e.tail_bound / std::min(1.0, std::pow(std::abs(lambda), 6));
    return out;
}

LatticeInvariants invariants_anywhere(const UpperHalfPoint &tau)
{
    const auto [gamma, tau_star] = reduce_tau(tau);
    const Complex lambda = gamma.automorphy(tau.value());
    const auto inv = invariants_at(tau_star);
    const Complex l2 = lambda * lambda;
    const Complex l4 = l2 * l2;
    const Complex l6 = l4 * l2;
    LatticeInvariants out;
    out.g2 = checked(inv.g2 / l4, "g2");
    out.g3 = checked(inv.g3 / l6, "g3");
    out.delta = checked(inv.delta / (l6 * l6), "delta");
    out.eta1 = (pi * pi / 3.0) * e2_anywhere(tau);
    return out;
}

std::pair<Complex, Complex> quasi_periods(const UpperHalfPoint &tau)
{
    return {2.0 * zeta_anywhere(tau, 0.5).value, 2.0 * zeta_anywhere(tau, 0.5 * tau.value()).value};
}

double lattice_distance_anywhere(const UpperHalfPoint &tau, Complex z)
{
    const auto red = reduce(tau, z);
    return lattice_distance(red.tau_star, red.z_star) * std::abs(red.scale);
}

AdditionResult wp_add_detail(const UpperHalfPoint &tau, Complex u, Complex v, const TolerancePolicy &policy)
{
    if (lattice_distance_anywhere(tau, u) < policy.pole_guard_radius
        || lattice_distance_anywhere(tau, v) < policy.pole_guard_radius) {
        throw Error(ErrorKind::PoleProximity, "wp_add: an argument is within the pole guard of the lattice");
    }
    if (lattice_distance_anywhere(tau, u + v) < policy.pole_guard_radius) {
        throw Error(ErrorKind::DegenerateConfiguration, "wp_add: u = -v modulo the lattice");
    }
    const Complex pu = wp_anywhere(tau, u, policy).value;
    const Complex pv = wp_anywhere(tau, v, policy).value;
    const Complex du = wp_prime_anywhere(tau, u, policy).value;

    const bool coincide = std::abs(pu - pv) < 1e-8 * std::max(std::abs(pu), 1.0)
                          && lattice_distance_anywhere(tau, u - v) < 1e-6;
    if (coincide) {
        const Complex g2 = invariants_anywhere(tau).g2;
        const Complex second = 6.0 * pu * pu - 0.5 * g2;
        const Complex r = second / (2.0 * du);
        return {checked(-2.0 * pu + r * r, "wp_add"), true};
    }
    const Complex dv = wp_prime_anywhere(tau, v, policy).value;
    const Complex r = (du - dv) / (pu - pv);
    return {checked(0.25 * r * r - pu - pv, "wp_add"), false};
}

} // namespace weier
