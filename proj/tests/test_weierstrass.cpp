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

#include <cmath>
#include <random>

#include "weier/eisenstein.hpp"
#include "weier/weierstrass.hpp"

using namespace weier;

namespace
{

const UpperHalfPoint I(0.0, 1.0);

template <typename F>
ErrorKind kind_of(F &&f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected an exception");
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("wp vanishes at the centre of the square lattice")
{
    CHECK(std::abs(wp_q(I, {0.5, 0.5}).value) < 1e-9);
}

TEST_CASE("wp is even modulo the lattice")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (Complex t : {Complex{0.0, 1.0}, Complex{0.3, 1.2}, Complex{-0.45, 0.95}}) {
        const UpperHalfPoint tau(t);
        for (int i = 0; i < 10; ++i) {
            const Complex z = u(rng) + u(rng) * t;
            const Complex a = wp_q(tau, z).value;
            const Complex b = wp_q(tau, -z + 1.0 + t).value;
            CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("trigonometric limit")
{
    const double s = std::sin(pi * 0.3);
    const double expected = pi * pi / (s * s) - pi * pi / 3.0;
    CHECK(std::abs(wp_q(UpperHalfPoint(0.0, 30.0), 0.3).value - expected) < 1e-10);
}

TEST_CASE("wp' vanishes at half periods and satisfies the differential equation")
{
    CHECK(std::abs(wp_prime_q(I, {0.5, 0.5}).value) < 1e-9);
    CHECK(std::abs(wp_prime_q(I, 0.5).value) < 1e-9);

    const Complex z{0.3, 0.2};
    const Complex p = wp_q(I, z).value;
    const Complex p1 = wp_prime_q(I, z).value;
    const auto inv = invariants_at(I);
    CHECK(std::abs(p1 * p1 - (4.0 * p * p * p - inv.g2 * p - inv.g3)) < 1e-8);
}

TEST_CASE("wp' is odd modulo the lattice")
{
    const UpperHalfPoint tau(0.2, 1.1);
    for (Complex z : {Complex{0.3, 0.2}, Complex{0.7, 0.9}, Complex{0.1, 0.4}}) {
        const Complex a = wp_prime_q(tau, z).value;
        const Complex b = wp_prime_q(tau, -z + 1.0 + tau.value()).value;
        CHECK(std::abs(a + b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("sign of wp' follows -2/z^3 near the origin")
{
    const UpperHalfPoint tau(0.1, 1.3);
    for (Complex z : {Complex{0.02, 0.01}, Complex{0.01, 0.03}, Complex{0.03, 0.002}}) {
        const Complex p = wp_q(tau, z).value;
        const Complex p1 = wp_prime_q(tau, z).value;
        const auto inv = invariants_at(tau);
        const Complex root = std::sqrt(4.0 * p * p * p - inv.g2 * p - inv.g3);
        const Complex guess = -2.0 / (z * z * z);
        const Complex branch = std::abs(root - guess) < std::abs(root + guess) ? root : -root;
        CHECK(std::abs(p1 - branch) < 1e-8 * std::abs(p1));
    }
}

TEST_CASE("zeta at the real half period of the square lattice")
{
    CHECK(std::abs(zeta_q(I, 0.5).value - pi / 2.0) < 1e-9);
}

TEST_CASE("zeta is odd up to quasi-periods")
{
    // zeta(1 + tau - z) = -zeta(z) + eta1 + eta2
    const UpperHalfPoint tau(-0.2, 1.4);
    const Complex t = tau.value();
    const Complex eta1 = 2.0 * zeta_q(tau, 0.5).value;
    const Complex eta2 = 2.0 * zeta_q(tau, 0.5 * t).value;
    for (Complex z : {Complex{0.3, 0.2}, Complex{0.6, 1.0}}) {
        const Complex a = zeta_q(tau, z).value;
        const Complex b = zeta_q(tau, 1.0 + t - z).value;
        CHECK(std::abs(a + b - eta1 - eta2) < 1e-10);
    }
}

TEST_CASE("dzeta/dz = -wp")
{
    const Complex z{0.4, 0.3};
    const double h = 1e-4;
    const Complex d = (zeta_q(I, z + h).value - zeta_q(I, z - h).value) / (2.0 * h);
    const Complex w = wp_q(I, z).value;
    CHECK(std::abs(d + w) / std::abs(w) < 1e-6);
}

TEST_CASE("half periods")
{
    const auto h = half_periods(UpperHalfPoint(0.3, 1.2));
    CHECK(std::abs(h.e1 + h.e2 + h.e3) < 1e-10);

    const auto s = half_periods(I);
    CHECK(std::abs(s.e3) < 1e-9);
    CHECK(std::abs(s.e1 + s.e2) < 1e-9);
    CHECK(s.e1.real() > 0.0);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(1.0, 3.0);
    for (int i = 0; i < 10; ++i) {
        const UpperHalfPoint tau(re(rng), im(rng));
        const auto e = half_periods(tau);
        const auto inv = invariants_at(tau);
        CHECK(std::abs(-4.0 * (e.e1 * e.e2 + e.e1 * e.e3 + e.e2 * e.e3) - inv.g2) < 1e-9 * std::abs(inv.g2));
        CHECK(std::abs(4.0 * e.e1 * e.e2 * e.e3 - inv.g3) < 1e-9 * std::max(1.0, std::abs(inv.g3)));
        CHECK(std::abs(e.e1 - e.e2) > 1e-6);
        CHECK(std::abs(e.e1 - e.e3) > 1e-6);
        CHECK(std::abs(e.e2 - e.e3) > 1e-6);
    }
}

TEST_CASE("lattice-sum oracles")
{
    const Complex z{0.25, 0.25};
    CHECK(std::abs(wp_lattice_oracle(I, z, 400) - wp_q(I, z).value) < 1e-4);
    CHECK(std::abs(wp_lattice_oracle(I, z, 60) - wp_lattice_oracle(I, -z, 60)) < 1e-6);
    CHECK(std::abs(zeta_lattice_oracle(I, 0.5, 400) - pi / 2.0) < 1e-3);
    CHECK(std::abs(zeta_lattice_oracle(I, z, 400) - zeta_q(I, z).value) < 1e-4);
    CHECK_THROWS_AS(wp_lattice_oracle(I, z, 10), Error);
    CHECK(kind_of([] { wp_lattice_oracle(I, 1e-5, 50); }) == ErrorKind::PoleProximity);
}

TEST_CASE("principal part")
{
    TolerancePolicy loose;
    loose.pole_guard_radius = 1e-4;
    const double e2 = std::abs(wp_lattice_oracle(I, 1e-2, 50, loose) * 1e-4 - 1.0);
    const double e3 = std::abs(wp_lattice_oracle(I, 1e-3, 50, loose) * 1e-6 - 1.0);
    CHECK(e2 < 1e-5);
    CHECK(e3 < e2);
}

TEST_CASE("domain errors")
{
    CHECK(kind_of([] { wp_q(I, 1e-4); }) == ErrorKind::PoleProximity);
    CHECK(kind_of([] { zeta_q(I, {1.0, 1e-5}); }) == ErrorKind::PoleProximity);
    CHECK(kind_of([] { wp_q(I, {0.3, 1.5}); }) == ErrorKind::ConvergenceDomain);
    CHECK(kind_of([] { wp_prime_q(I, {0.3, -1.2}); }) == ErrorKind::ConvergenceDomain);
}

TEST_CASE("error estimates")
{
    TolerancePolicy p;
    for (Complex z : {Complex{0.3, 0.2}, Complex{0.5, 0.5}, Complex{0.01, 0.0}}) {
        CHECK(wp_q(I, z).est_error >= p.series_tail_bound);
        CHECK(zeta_q(I, z).est_error >= p.series_tail_bound);
        CHECK(wp_prime_q(I, z).est_error >= p.series_tail_bound);
    }
    CHECK(wp_q(I, 0.01).est_error > wp_q(I, {0.5, 0.5}).est_error);
}
