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

#ifndef WEIER_WEIERSTRASS_HPP
#define WEIER_WEIERSTRASS_HPP

#include "weier/eisenstein.hpp"
#include "weier/numerics.hpp"

namespace weier
{

/// A function value with an error estimate: truncation tail plus a
/// magnitude-weighted rounding bound, floored at the policy's series_tail_bound.
/// Terms near a pole dominate the magnitude sum, so the estimate grows there.
struct WValue {
    Complex value;
    double est_error = 0.0;
};

struct HalfPeriodData {
    Complex e1;
    Complex e2;
    Complex e3;
};

// q-series evaluators for the lattice Z + tau Z. They accept any z with
// |Im z| < Im tau and are accurate for reduced tau; callers outside that
// regime should go through the reduction layer.

/// wp(tau; z) = (2 pi i)^2 [ sum_m u q^m / (1 - u q^m)^2 + 1/12
///                           - 2 sum_{m>=1} q^m / (1 - q^m)^2 ].
WValue wp_q(const UpperHalfPoint &tau, Complex z, const QTruncation &trunc = default_truncation,
            const TolerancePolicy &policy = {});

/// Term-wise z-derivative of the wp series.
WValue wp_prime_q(const UpperHalfPoint &tau, Complex z, const QTruncation &trunc = default_truncation,
                  const TolerancePolicy &policy = {});

/// zeta(tau; z) = 2 pi i [ -sum_{n>=0} q^n u/(1 - q^n u) + sum_{n>=1} q^n u^-1/(1 - q^n u^-1) ]
///               + eta1 z - pi i.
/// The linear term uses z as passed, never a logarithm of u.
WValue zeta_q(const UpperHalfPoint &tau, Complex z, const QTruncation &trunc = default_truncation,
              const TolerancePolicy &policy = {});

/// e1 = wp(1/2), e2 = wp(tau/2), e3 = wp((1 + tau)/2).
HalfPeriodData half_periods(const UpperHalfPoint &tau, const QTruncation &trunc = default_truncation);

// Slow, independent oracles: absolutely convergent lattice sums truncated to
// max(|m|,|n|) <= radius. Measured error is O(radius^-2) for moderate |z|
// (about 1e-6 at radius 400 over the test grid).
Complex wp_lattice_oracle(const UpperHalfPoint &tau, Complex z, int radius,
                          const TolerancePolicy &policy = {});
Complex zeta_lattice_oracle(const UpperHalfPoint &tau, Complex z, int radius,
                            const TolerancePolicy &policy = {});

} // namespace weier

#endif
