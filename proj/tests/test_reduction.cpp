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
#include <tuple>

#include "weier/reduction.hpp"

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

TEST_CASE("unimodular matrices")
{
    CHECK_THROWS_AS(UnimodularMatrix(1, 1, 1, 1), Error);
    const auto st = UnimodularMatrix::S() * UnimodularMatrix::T();
    CHECK(st == UnimodularMatrix(0, -1, 1, 1));
    CHECK(UnimodularMatrix::S() * UnimodularMatrix::S() == UnimodularMatrix(-1, 0, 0, -1));
    CHECK(std::abs(UnimodularMatrix::S().apply({0.0, 2.0}) - Complex{0.0, 0.5}) < 1e-15);
}

TEST_CASE("reduce_tau examples")
{
    auto [g, t] = reduce_tau(I);
    CHECK(g == UnimodularMatrix::identity());
    CHECK(t.value() == I.value());

    std::tie(g, t) = reduce_tau(UpperHalfPoint(7.0, 1.0));
    CHECK(g == UnimodularMatrix::T(-7));
    CHECK(std::abs(t.value() - I.value()) < 1e-15);

    std::tie(g, t) = reduce_tau(UpperHalfPoint(0.0, 0.5));
    CHECK(g == UnimodularMatrix::S());
    CHECK(std::abs(t.value() - Complex{0.0, 2.0}) < 1e-15);
}

TEST_CASE("reduce_tau lands in the standard domain and is idempotent")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(-20.0, 20.0), lim(-6.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const UpperHalfPoint tau(re(rng), std::pow(10.0, lim(rng)));
        const auto [g, t] = reduce_tau(tau);
        CHECK(in_standard_domain(t, 1e-12));
        CHECK(std::abs(g.apply(tau.value()) - t.value()) <= 1e-12 * std::max(1.0, std::abs(t.value())));
        const auto [g2, t2] = reduce_tau(t);
        CHECK(g2 == UnimodularMatrix::identity());
    }
}

TEST_CASE("unit circle tie-break")
{
    const Complex on{std::cos(1.2), std::sin(1.2)};
    const auto [g, t] = reduce_tau(UpperHalfPoint(on));
    CHECK(t.re() <= 0.0);
    CHECK(std::abs(std::abs(t.value()) - 1.0) < 1e-14);
}

TEST_CASE("reduce_tau close to a rational stays in the standard domain")
{
    for (const double x : {0.7071067811865476, 0.6180339887498949, 0.3}) {
        const UpperHalfPoint tau(x, 1e-20);
        const auto [g, t] = reduce_tau(tau);
        CHECK(in_standard_domain(t, 1e-12));
        CHECK(std::abs(g.automorphy(tau.value())) > 0.0);
    }
}

TEST_CASE("reduce_tau gives up near the real axis")
{
    CHECK(kind_of([] { reduce_tau(UpperHalfPoint(0.3, 1e-300)); }) == ErrorKind::NonTermination);
}

TEST_CASE("reduce_z examples")
{
    auto r = reduce_z(I, {2.25, 3.5});
    CHECK(r.m == 2);
    CHECK(r.n == 3);
    CHECK(std::abs(r.z_star - Complex{0.25, 0.5}) < 1e-15);

    r = reduce_z(I, -0.25);
    CHECK(r.m == -1);
    CHECK(r.n == 0);
    CHECK(std::abs(r.z_star - 0.75) < 1e-15);
}

TEST_CASE("reduce_z recomposes")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(strip_height, 3.0), zc(-20.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const UpperHalfPoint tau(re(rng), im(rng));
        const Complex z{zc(rng), zc(rng)};
        const auto r = reduce_z(tau, z);
        CHECK(in_cell(tau, r.z_star));
        const Complex back = r.z_star + double(r.m) + double(r.n) * tau.value();
        CHECK(std::abs(back - z) < 1e-14 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("wp_anywhere")
{
    const Complex a = wp_anywhere(UpperHalfPoint(1.0, 1.0), 0.3).value;
    const Complex b = wp_anywhere(I, 0.3).value;
    CHECK(std::abs(a - b) < 1e-10);
    CHECK(std::abs(wp_anywhere(I, {2.3, 5.0}).value - b) < 1e-10);

    const UpperHalfPoint half(0.0, 0.5);
    const Complex z{0.2, 0.1};
    const Complex oracle = wp_lattice_oracle(half, z, 400);
    CHECK(std::abs(wp_anywhere(half, z).value - oracle) < 1e-4);
    // the weight-1 transport disagrees with the oracle
    const Complex lambda = reduce(half, z).scale;
    CHECK(std::abs(wp_anywhere(half, z).value * lambda - oracle) > 1e-2);
}

TEST_CASE("wp' and zeta transport")
{
    const UpperHalfPoint tau(0.15, 0.35);
    const Complex z{0.3, 0.12};
    CHECK(std::abs(zeta_anywhere(tau, z).value - zeta_lattice_oracle(tau, z, 400)) < 1e-4);
    const double h = 1e-5;
    const Complex fd = (wp_anywhere(tau, z + h).value - wp_anywhere(tau, z - h).value) / (2.0 * h);
    const Complex d = wp_prime_anywhere(tau, z).value;
    CHECK(std::abs(fd - d) < 1e-6 * std::abs(d));
}

TEST_CASE("zeta_anywhere")
{
    const Complex z{0.3, 0.2};
    CHECK(std::abs(zeta_anywhere(I, z + 1.0).value - zeta_anywhere(I, z).value - pi) < 1e-9);
    const UpperHalfPoint tau(0.1, 1.3);
    const UpperHalfPoint tau1(1.1, 1.3);
    CHECK(std::abs(zeta_anywhere(tau1, z).value - zeta_anywhere(tau, z).value) < 1e-10);
}

TEST_CASE("Legendre relation")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(strip_height, 3.0);
    for (int i = 0; i < 20; ++i) {
        const UpperHalfPoint tau(re(rng), im(rng));
        const auto [eta1, eta2] = quasi_periods(tau);
        CHECK(std::abs(eta1 * tau.value() - eta2 - two_pi_i) < 1e-9);
    }
}

TEST_CASE("e2_anywhere")
{
    for (Complex t : {Complex{0.1, 1.1}, Complex{-0.3, 0.4}}) {
        CHECK(std::abs(e2_anywhere(UpperHalfPoint(t + 1.0)) - e2_anywhere(UpperHalfPoint(t))) < 1e-12);
    }
    CHECK(std::abs(e2_anywhere(I) - 3.0 / pi) < 1e-10);

    // tau = i/2 directly, and as one S-step from 2i
    const Complex direct = e2_anywhere(UpperHalfPoint(0.0, 0.5));
    const Complex t0{0.0, 2.0};
    const double z2 = zeta_even(1);
    const Complex g2 = t0 * t0 * z2 * eisenstein_at(UpperHalfPoint(t0)).E2 - Complex{0.0, pi} * t0;
    CHECK(std::abs(direct - g2 / z2) < 1e-11);
}

TEST_CASE("modular forms transport with their weight")
{
    const UpperHalfPoint tau(0.2, 0.3);
    const auto e = eisenstein_anywhere(tau);
    CHECK(std::abs(e.E4 - lattice_sum_E(tau, 2, 300) / (2.0 * zeta_even(2))) < 1e-4 * std::abs(e.E4));
    CHECK(std::abs(e.E6 - lattice_sum_E(tau, 3, 300) / (2.0 * zeta_even(3))) < 1e-4 * std::abs(e.E6));
    const auto inv = invariants_anywhere(tau);
    const Complex d = inv.g2 * inv.g2 * inv.g2 - 27.0 * inv.g3 * inv.g3;
    CHECK(std::abs(inv.delta - d) < 1e-9 * std::abs(inv.g2 * inv.g2 * inv.g2));
}

TEST_CASE("addition formula")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(0.0, 1.0);
    int checked_pairs = 0;
    while (checked_pairs < 50) {
        const UpperHalfPoint tau(c(rng) - 0.5, 0.9 + 2.0 * c(rng));
        const Complex u = c(rng) + c(rng) * tau.value();
        const Complex v = c(rng) + c(rng) * tau.value();
        if (lattice_distance_anywhere(tau, u) < 0.05 || lattice_distance_anywhere(tau, v) < 0.05
            || lattice_distance_anywhere(tau, u + v) < 0.05 || lattice_distance_anywhere(tau, u - v) < 0.05) {
            continue;
        }
        const auto r = wp_add_detail(tau, u, v);
        CHECK_FALSE(r.duplication);
        const Complex direct = wp_anywhere(tau, u + v).value;
        CHECK(std::abs(r.value - direct) < 1e-7 * std::max(1.0, std::abs(direct)));
        ++checked_pairs;
    }
}

TEST_CASE("duplication")
{
    const auto r = wp_add_detail(I, 0.3, 0.3);
    CHECK(r.duplication);
    CHECK(std::abs(r.value - wp_anywhere(I, 0.6).value) < 1e-7);
    // u and u + 1 coincide modulo the lattice
    const auto s = wp_add_detail(I, 0.3, 1.3);
    CHECK(s.duplication);
    CHECK(std::abs(s.value - wp_anywhere(I, 0.6).value) < 1e-7);
}

TEST_CASE("addition degenerates when u = -v")
{
    CHECK(kind_of([] { wp_add(I, 0.3, -0.3); }) == ErrorKind::DegenerateConfiguration);
    CHECK(kind_of([] { wp_add(I, {0.3, 0.2}, {0.7, 0.8}); }) == ErrorKind::DegenerateConfiguration);
    CHECK(kind_of([] { wp_add(I, 1.0, 0.3); }) == ErrorKind::PoleProximity);
    CHECK(kind_of([] { wp_anywhere(I, {3.0, 2.0}); }) == ErrorKind::PoleProximity);
}
