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

#ifndef WEIER_NUMERICS_HPP
#define WEIER_NUMERICS_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weier
{

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex two_pi_i{0.0, 2.0 * std::numbers::pi};

/// Lower edge of the strip Im(tau) >= sqrt(3)/2.
inline constexpr double strip_height = 0.86602540378443864676;

/// Bound on |q| over the strip, exp(-2 pi sqrt(3)/2).
double nome_bound();

enum class ErrorKind {
    ZeroArgument,
    ConvergenceDomain,
    PoleProximity,
    NonTermination,
    DegenerateConfiguration,
    NearSingular,
    NonFinite,
    InvalidArgument,
    Parse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept
    {
        return kind_;
    }

private:
    ErrorKind kind_;
};

/// Throws NonFinite if either component is NaN or infinite.
Complex checked(Complex v, std::string_view what);

/// A point of the upper half-plane.
class UpperHalfPoint
{
public:
    explicit UpperHalfPoint(Complex tau);
    UpperHalfPoint(double re, double im) : UpperHalfPoint(Complex{re, im}) {}

    Complex value() const noexcept
    {
        return tau_;
    }
    double re() const noexcept
    {
        return tau_.real();
    }
    double im() const noexcept
    {
        return tau_.imag();
    }
    /// q = exp(2 pi i tau).
    Complex nome() const;

private:
    Complex tau_;
};

struct CellCoordinates {
    double a = 0.0;
    double b = 0.0;
};

struct TolerancePolicy {
    double series_tail_bound = 1e-15;
    double identity_tol = 1e-9;
    double oracle_tol = 1e-4;
    double fd_tol = 1e-5;
    double pole_guard_radius = 1e-3;

    /// Throws InvalidArgument unless all fields are positive and
    /// series_tail_bound <= identity_tol <= oracle_tol.
    void validate() const;
};

bool in_fundamental_domain(const UpperHalfPoint &tau);

/// The standard domain -1/2 <= Re < 1/2, |tau| >= 1, with |tau|^2 >= 1 - slack.
bool in_standard_domain(const UpperHalfPoint &tau, double slack = 0.0);

CellCoordinates coords_wrt_lattice(const UpperHalfPoint &tau, Complex z);

bool in_cell(const UpperHalfPoint &tau, Complex z);

/// Membership of (q, u) in the image of the shrunken cell family under
/// (tau, z) -> (exp(2 pi i tau), exp(2 pi i z)).
bool in_M_delta(Complex q, Complex u);

/// Inverts q = exp(2 pi i tau) with Re(tau) in [-1/2, 1/2).
UpperHalfPoint tau_from_nome(Complex q);

/// Distance from z to the lattice Z + tau Z; intended for reduced tau.
double lattice_distance(const UpperHalfPoint &tau, Complex z);

} // namespace weier

#endif
