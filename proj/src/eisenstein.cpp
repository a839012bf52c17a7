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

#include "weier/eisenstein.hpp"

#include <cmath>
#include <limits>

namespace weier
{

namespace
{

constexpr double min_im_tau = 0.1;

double coefficient_of_weight(int weight)
{
    switch (weight) {
        case 2:
            return -24.0;
        case 4:
            return 240.0;
        case 6:
            return -504.0;
    }
    throw Error(ErrorKind::InvalidArgument, "weight must be 2, 4 or 6");
}

// sum_{n=1}^{order} sigma_k(n) q^n by Horner.
Complex divisor_series(int k, int order, Complex q)
{
    Complex acc{};
    for (int n = order; n >= 1; --n) {
        acc = q * (acc + double(divisor_sum(k, n)));
    }
    return acc;
}

} // namespace

QTruncation QTruncation::with_order(int order)
{
    if (order < 1) {
        throw Error(ErrorKind::InvalidArgument, "truncation order must be positive");
    }
    // The widest coefficient growth among E2, E4, E6 is sigma_5.
    return {order, 504.0 * divisor_series_tail(5, order, nome_bound())};
}

std::int64_t divisor_sum(int k, int n)
{
    if (n < 1 || k < 0) {
        throw Error(ErrorKind::InvalidArgument, "divisor_sum needs n >= 1, k >= 0");
    }
    std::int64_t total = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d == 0) {
            std::int64_t p = 1;
            for (int j = 0; j < k; ++j) {
                p *= d;
            }
            total += p;
        }
    }
    return total;
}

double divisor_series_tail(int k, int order, double abs_q)
{
    if (abs_q == 0.0) {
        return 0.0;
    }
    const double n1 = order + 1.0;
    const double ratio = std::pow((n1 + 1.0) / n1, k + 1) * abs_q;
    if (ratio >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(n1, k + 1) * std::pow(abs_q, n1) / (1.0 - ratio);
}

EisensteinValues eisenstein_at(const UpperHalfPoint &tau, const QTruncation &trunc)
{
    if (tau.im() < min_im_tau) {
        throw Error(ErrorKind::ConvergenceDomain, "eisenstein_at requires Im(tau) >= 0.1");
    }
    const Complex q = tau.nome();
    const double aq = std::abs(q);
    EisensteinValues out;
    out.E2 = checked(1.0 - 24.0 * divisor_series(1, trunc.order, q), "E2");
    out.E4 = checked(1.0 + 240.0 * divisor_series(3, trunc.order, q), "E4");
    out.E6 = checked(1.0 - 504.0 * divisor_series(5, trunc.order, q), "E6");
    out.tail_bound = 504.0 * divisor_series_tail(5, trunc.order, aq);
    return out;
}

LatticeInvariants invariants_at(const UpperHalfPoint &tau, const QTruncation &trunc)
{
    const auto e = eisenstein_at(tau, trunc);
    const double pi2 = pi * pi;
    const double pi4 = pi2 * pi2;
    const double pi6 = pi4 * pi2;

    LatticeInvariants out;
    out.g2 = (4.0 * pi4 / 3.0) * e.E4;
    out.g3 = (8.0 * pi6 / 27.0) * e.E6;
    out.eta1 = (pi2 / 3.0) * e.E2;

    const Complex q = tau.nome();
    Complex prod = 1.0;
    Complex qn = q;
    for (int n = 1; n <= trunc.order; ++n) {
        prod *= std::pow(1.0 - qn, 24);
        qn *= q;
    }
    out.delta = checked(std::pow(2.0 * pi, 12) * q * prod, "delta");
    return out;
}

double zeta_even(int k)
{
    switch (k) {
        case 1:
            return pi * pi / 6.0;
        case 2:
            return std::pow(pi, 4) / 90.0;
        case 3:
            return std::pow(pi, 6) / 945.0;
    }
    throw Error(ErrorKind::InvalidArgument, "zeta_even supports k = 1, 2, 3");
}

Complex lattice_sum_E(const UpperHalfPoint &tau, int k, int radius)
{
    if (radius < 1) {
        throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    }
    const Complex t = tau.value();
    if (k == 1) {
        // 1/2 sum_{n != 0} n^-2 + 1/2 sum_{m != 0} pi^2 / sin^2(pi m tau);
        // the m and -m terms coincide.
        Complex acc = zeta_even(1);
        for (int m = radius; m >= 1; --m) {
            const Complex s = std::sin(pi * double(m) * t);
            acc += pi * pi / (s * s);
        }
        return checked(acc, "lattice_sum_E");
    }
    if (k != 2 && k != 3) {
        throw Error(ErrorKind::InvalidArgument, "lattice_sum_E supports k = 1, 2, 3");
    }
    // The box tail is c / radius^(2k-2) to leading order (it does not cancel
    // on a square box), so the sums over radius and radius/2 are combined to
    // remove it. Only points inside the box are used.
    const int half = radius / 2;
    Complex acc{};
    Complex inner{};
    for (int n = -radius; n <= radius; ++n) {
        Complex row{};
        Complex row_inner{};
        for (int m = -radius; m <= radius; ++m) {
            if (m == 0 && n == 0) {
                continue;
            }
            const Complex w = double(m) + double(n) * t;
            const Complex w2 = 1.0 / (w * w);
            const Complex term = k == 2 ? w2 * w2 : w2 * w2 * w2;
            row += term;
            if (std::abs(m) <= half && std::abs(n) <= half) {
                row_inner += term;
            }
        }
        acc += row;
        inner += row_inner;
    }
    if (half >= 1) {
        const double r2 = std::pow(double(radius), 2 * k - 2);
        const double h2 = std::pow(double(half), 2 * k - 2);
        acc = (r2 * acc - h2 * inner) / (r2 - h2);
    }
    return checked(acc, "lattice_sum_E");
}

std::vector<std::int64_t> eisenstein_coefficients(int weight, int order)
{
    const auto c = static_cast<std::int64_t>(coefficient_of_weight(weight));
    std::vector<std::int64_t> out{1};
    for (int n = 1; n <= order; ++n) {
        out.push_back(c * divisor_sum(weight - 1, n));
    }
    return out;
}

} // namespace weier
