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

#ifndef BIBC_OPTIMIZER_BASELINE_HPP
#define BIBC_OPTIMIZER_BASELINE_HPP

#include <cmath>
#include <cstdint>

#include "../rng.hpp"
#include "../system_model.hpp"

namespace bibc
{

/// Gaussian w scaled to full power at every AP, Gaussian unit-norm u_k, alpha_k = 0.6.
inline Solution random_baseline(int M, int K, int L, std::uint64_t seed, std::uint64_t drop = 0,
                                double alpha = 0.6)
{
    Solution sol;
    Rng rw(seed, drop, Stream::baseline, 0);
    sol.w.resize(static_cast<Eigen::Index>(M) * K);
    for (Eigen::Index i = 0; i < sol.w.size(); ++i)
        sol.w(i) = rw.complex_normal();
    for (int m = 0; m < M; ++m)
    {
        double p = 0.0;
        for (int i = 0; i < K; ++i)
            p += std::norm(sol.w(i * M + m));
        const double scale = 1.0 / std::sqrt(p);
        for (int i = 0; i < K; ++i)
            sol.w(i * M + m) *= scale;
    }
    Rng ru(seed, drop, Stream::baseline, 1);
    sol.U.resize(L, K);
    for (int k = 0; k < K; ++k)
    {
        for (int l = 0; l < L; ++l)
            sol.U(l, k) = ru.complex_normal();
        sol.U.col(k).normalize();
    }
    sol.alpha = Eigen::VectorXd::Constant(K, alpha);
    return sol;
}

} // namespace bibc

#endif
