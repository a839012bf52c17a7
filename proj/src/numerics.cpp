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

#include "weier/numerics.hpp"

#include <cmath>
#include <limits>

namespace weier
{

double nome_bound()
{
    return std::exp(-2.0 * pi * strip_height);
}

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::ZeroArgument:
            return "ZeroArgument";
        case ErrorKind::ConvergenceDomain:
            return "ConvergenceDomain";
        case ErrorKind::PoleProximity:
            return "PoleProximity";
        case ErrorKind::NonTermination:
            return "NonTermination";
        case ErrorKind::DegenerateConfiguration:
            return "DegenerateConfiguration";
        case ErrorKind::NearSingular:
            return "NearSingular";
        case ErrorKind::NonFinite:
            return "NonFinite";
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::Parse:
            return "Parse";
    }
    return "Unknown";
}

Complex checked(Complex v, std::string_view what)
{
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorKind::NonFinite, std::string(what) + ": non-finite result");
    }
    return v;
}

UpperHalfPoint::UpperHalfPoint(Complex tau) : tau_(checked(tau, "UpperHalfPoint"))
{
    if (!(tau.imag() > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "tau must lie in the upper half-plane");
    }
}

Complex UpperHalfPoint::nome() const
{
    return std::exp(two_pi_i * tau_);
}

void TolerancePolicy::validate() const
{
    for (double v : {series_tail_bound, identity_tol, oracle_tol, fd_tol, pole_guard_radius}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorKind::InvalidArgument, "tolerances must be finite and strictly positive");
        }
    }
    if (!(series_tail_bound <= identity_tol && identity_tol <= oracle_tol)) {
        throw Error(ErrorKind::InvalidArgument,
                    "tolerances must satisfy series_tail_bound <= identity_tol <= oracle_tol");
    }
}

bool in_fundamental_domain(const UpperHalfPoint &tau)
{
    return tau.re() >= -0.5 && tau.re() < 0.5 && tau.im() >= strip_height;
}

bool in_standard_domain(const UpperHalfPoint &tau, double slack)
{
    return tau.re() >= -0.5 && tau.re() < 0.5 && std::norm(tau.value()) >= 1.0 - slack;
}

CellCoordinates coords_wrt_lattice(const UpperHalfPoint &tau, Complex z)
{
    const double a = z.imag() / tau.im();
    return {a, z.real() - a * tau.re()};
}

bool in_cell(const UpperHalfPoint &tau, Complex z)
{
    const auto [a, b] = coords_wrt_lattice(tau, z);
    return a >= 0.0 && a < 1.0 && b >= 0.0 && b < 1.0;
}

UpperHalfPoint tau_from_nome(Complex q)
{
    if (q == Complex{}) {
        throw Error(ErrorKind::ZeroArgument, "q = 0 has no preimage in the upper half-plane");
    }
    if (!(std::abs(q) < 1.0)) {
        throw Error(ErrorKind::ConvergenceDomain, "|q| must be < 1");
    }
    double re = std::arg(q) / (2.0 * pi);
    if (re >= 0.5) {
        re -= 1.0;
    }
    return UpperHalfPoint(re, -std::log(std::abs(q)) / (2.0 * pi));
}

bool in_M_delta(Complex q, Complex u)
{
    if (q == Complex{} || u == Complex{}) {
        throw Error(ErrorKind::ZeroArgument, "q and u must be nonzero");
    }
    if (std::abs(q) > nome_bound()) {
        return false;
    }
    const UpperHalfPoint tau = tau_from_nome(q);
    const Complex z = std::log(u) / two_pi_i;
    // The shrunken cell is the parallelogram spanned from (1+tau)/8 by 1/4 and
    // tau/4; u only determines z up to integers, so try the adjacent branches.
    for (int k : {0, 1, -1}) {
        const Complex w = (z + double(k) - (1.0 + tau.value()) / 8.0) * 4.0;
        const auto [a, b] = coords_wrt_lattice(tau, w);
        if (a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0) {
            return true;
        }
    }
    return false;
}

double lattice_distance(const UpperHalfPoint &tau, Complex z)
{
    const auto [a, b] = coords_wrt_lattice(tau, z);
    const double n0 = std::floor(a);
    const double m0 = std::floor(b);
    double best = std::numeric_limits<double>::infinity();
    for (double n = n0 - 1.0; n <= n0 + 2.0; n += 1.0) {
        for (double m = m0 - 1.0; m <= m0 + 2.0; m += 1.0) {
            best = std::min(best, std::abs(z - m - n * tau.value()));
        }
    }
    return best;
}

} // namespace weier
