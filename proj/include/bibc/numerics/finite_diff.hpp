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

#ifndef BIBC_NUMERICS_FINITE_DIFF_HPP
#define BIBC_NUMERICS_FINITE_DIFF_HPP

#include <cmath>

#include <Eigen/Dense>

namespace bibc::numerics
{

/// Central-difference gradient, step 1e-6 (1 + |x_i|) per coordinate.
template <typename F>
Eigen::VectorXd finite_diff_grad(F&& f, const Eigen::VectorXd& x)
{
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        const double h = 1e-6 * (1.0 + std::abs(x(i)));
        xp(i) = x(i) + h;
        const double fp = f(xp);
        xp(i) = x(i) - h;
        const double fm = f(xp);
        xp(i) = x(i);
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace bibc::numerics

#endif
