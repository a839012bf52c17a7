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

#ifndef WEIER_EISENSTEIN_HPP
#define WEIER_EISENSTEIN_HPP

#include <cstdint>
#include <vector>

#include "weier/numerics.hpp"

namespace weier
{

// Normalized Eisenstein series (constant term 1 in q) and the Weierstrass
// lattice invariants of Z + tau Z, evaluated through q-expansions:
//
//   E2 = 1 - 24 sum sigma_1(n) q^n
//   E4 = 1 + 240 sum sigma_3(n) q^n
//   E6 = 1 - 504 sum sigma_5(n) q^n
//
// The unnormalized lattice sums G_{2k} = sum' (m + n tau)^(-2k) are
// 2 zeta(2k) E_{2k}; g2 = 60 G4 and g3 = 140 G6.

/// Number of q-terms kept and a geometric bound on what is dropped when
/// |q| <= exp(-2 pi sqrt(3)/2).
struct QTruncation {
    int order = 40;
    double tail_bound = 0.0;

    static QTruncation with_order(int order);
};

inline const QTruncation default_truncation = QTruncation::with_order(40);

struct EisensteinValues {
    Complex E2;
    Complex E4;
    Complex E6;
    /// Truncation bound at the actual nome (rounding not included).
    double tail_bound = 0.0;
};

struct LatticeInvariants {
    Complex g2;
    Complex g3;
    Complex delta;
    Complex eta1;
};

/// sigma_k(n) by divisor enumeration.
std::int64_t divisor_sum(int k, int n);

/// Rigorous bound on sum_{n > order} n^(k+1) |q|^n, used to bound the dropped
/// part of the divisor-sum series (sigma_k(n) <= n^(k+1)).
double divisor_series_tail(int k, int order, double abs_q);

/// Requires Im(tau) >= 0.1, otherwise ConvergenceDomain.
EisensteinValues eisenstein_at(const UpperHalfPoint &tau, const QTruncation &trunc = default_truncation);

/// g2 = (4 pi^4/3) E4, g3 = (8 pi^6/27) E6, delta from the product
/// (2 pi)^12 q prod (1 - q^n)^24, eta1 = (pi^2/3) E2.
LatticeInvariants invariants_at(const UpperHalfPoint &tau, const QTruncation &trunc = default_truncation);

/// Truncated lattice sum sum' (m + n tau)^(-2k) over max(|m|,|n|) <= radius for
/// k = 2, 3, with the 1/radius^(2k-2) tail removed by comparing against the box of
/// radius/2. For k = 1 returns G2 = zeta(2) E2 in the conditionally convergent
/// order, with the inner sum over n summed in closed form
/// (sum_n (w + n)^-2 = pi^2 / sin^2(pi w)) and |m| <= radius.
Complex lattice_sum_E(const UpperHalfPoint &tau, int k, int radius);

/// zeta(2k) for k = 1, 2, 3.
double zeta_even(int k);

/// q-expansion coefficients [1, c sigma(1), ..., c sigma(order)] of the
/// normalized E_weight for weight in {2, 4, 6}.
std::vector<std::int64_t> eisenstein_coefficients(int weight, int order);

} // namespace weier

#endif
