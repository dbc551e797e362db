// SPDX-License-Identifier: Apache-2.0
//
// bibc - cell-free bistatic backscatter simulation and optimization library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BIBC_NUMERICS_SPECIAL_HPP
#define BIBC_NUMERICS_SPECIAL_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bibc::numerics
{

namespace detail
{

// E1(z) = -gamma - ln z - sum_{n>=1} (-z)^n / (n n!), used for 0 < z <= 1.
inline double e1_series(double z)
{
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n < 200; ++n)
    {
        term *= -z / n;
        const double add = term / n;
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum))
            break;
    }
    return -std::numbers::egamma - std::log(z) - sum;
}

// e^z E1(z) by the modified Lentz continued fraction, z > 1.
inline double e1_scaled_cf(double z)
{
    constexpr double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i)
    {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            break;
    }
    return h;
}

} // namespace detail

/// e^z E1(z) for z > 0. Equals -e^{1/x} Ei(-1/x) with z = 1/x.
inline double exp_e1_scaled(double z)
{
    if (!(z > 0.0))
        throw std::domain_error("exp_e1_scaled requires z > 0");
    if (z <= 1.0)
        return std::exp(z) * detail::e1_series(z);
    return detail::e1_scaled_cf(z);
}

/// Exponential integral Ei(x) = integral_{-inf}^{x} e^u/u du, for x < 0.
inline double exp_integral_ei(double x)
{
    if (!(x < 0.0))
        throw std::domain_error("exp_integral_ei is only defined here for x < 0");
    const double z = -x;
    if (z <= 1.0)
        return -detail::e1_series(z);
    if (z > 745.0)
        return -0.0;
    return -std::exp(-z) * detail::e1_scaled_cf(z);
}

} // namespace bibc::numerics

#endif
