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

#ifndef WEIER_REDUCTION_HPP
#define WEIER_REDUCTION_HPP

#include <cstdint>
#include <utility>

#include "weier/eisenstein.hpp"
#include "weier/numerics.hpp"
#include "weier/weierstrass.hpp"

namespace weier
{

/// An element of SL(2, Z).
class UnimodularMatrix
{
public:
    UnimodularMatrix() = default;
    /// Throws InvalidArgument unless ad - bc = 1.
    UnimodularMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    static UnimodularMatrix identity()
    {
        return {};
    }
    /// tau -> -1/tau.
    static UnimodularMatrix S()
    {
        return {0, -1, 1, 0};
    }
    /// tau -> tau + n.
    static UnimodularMatrix T(std::int64_t n = 1)
    {
        return {1, n, 0, 1};
    }

    std::int64_t a() const noexcept
    {
        return a_;
    }
    std::int64_t b() const noexcept
    {
        return b_;
    }
    std::int64_t c() const noexcept
    {
        return c_;
    }
    std::int64_t d() const noexcept
    {
        return d_;
    }

    /// (a tau + b) / (c tau + d).
    Complex apply(Complex tau) const;
    /// c tau + d.
    Complex automorphy(Complex tau) const;

    friend UnimodularMatrix operator*(const UnimodularMatrix &x, const UnimodularMatrix &y);
    friend bool operator==(const UnimodularMatrix &, const UnimodularMatrix &) = default;

private:
    std::int64_t a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

/// gamma maps tau to tau_star in the standard domain; scale = c tau + d, and
/// z / scale = z_star + m + n tau_star with z_star in the half-open cell.
struct ReductionResult {
    UnimodularMatrix gamma;
    UpperHalfPoint tau_star{0.0, 1.0};
    std::int64_t m = 0;
    std::int64_t n = 0;
    Complex z_star;
    Complex scale{1.0, 0.0};
};

struct ZReduction {
    std::int64_t m = 0;
    std::int64_t n = 0;
    Complex z_star;
};

/// Translate into -1/2 <= Re < 1/2, invert while |tau| < 1, repeat.
/// Points on the unit circle with Re > 0 are sent to the Re < 0 half.
std::pair<UnimodularMatrix, UpperHalfPoint> reduce_tau(const UpperHalfPoint &tau);

/// n = floor(a), m = floor(b) for z = a tau + b.
ZReduction reduce_z(const UpperHalfPoint &tau, Complex z);

/// Full reduction of (tau, z).
ReductionResult reduce(const UpperHalfPoint &tau, Complex z = {});

// Evaluators on all of H x C. Values are transported by homogeneity of the
// lattice functions under Lambda_tau = (c tau + d) Lambda_{tau_star}:
// weight 2 for wp, 3 for wp', 1 for zeta, 2k for E_2k (plus the anomaly for E2).

WValue wp_anywhere(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy = {});
WValue wp_prime_anywhere(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy = {});
WValue zeta_anywhere(const UpperHalfPoint &tau, Complex z, const TolerancePolicy &policy = {});

Complex e2_anywhere(const UpperHalfPoint &tau);
EisensteinValues eisenstein_anywhere(const UpperHalfPoint &tau);
LatticeInvariants invariants_anywhere(const UpperHalfPoint &tau);

/// Quasi-periods eta1 = 2 zeta(1/2), eta2 = 2 zeta(tau/2) for the lattice Z + tau Z.
std::pair<Complex, Complex> quasi_periods(const UpperHalfPoint &tau);

/// Distance from z to Z + tau Z for any tau.
double lattice_distance_anywhere(const UpperHalfPoint &tau, Complex z);

struct AdditionResult {
    Complex value;
    bool duplication = false;
};

/// wp(tau; u + v) from the values at u and v, via the addition formula or, when
/// u and v coincide modulo the lattice, the duplication formula
/// wp(2u) = -2 wp(u) + (wp''(u) / (2 wp'(u)))^2.
/// DegenerateConfiguration when u = -v modulo the lattice.
AdditionResult wp_add_detail(const UpperHalfPoint &tau, Complex u, Complex v, const TolerancePolicy &policy = {});

inline Complex wp_add(const UpperHalfPoint &tau, Complex u, Complex v, const TolerancePolicy &policy = {})
{
    return wp_add_detail(tau, u, v, policy).value;
}

} // namespace weier

#endif
