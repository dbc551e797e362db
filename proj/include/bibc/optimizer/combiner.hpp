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

#ifndef BIBC_OPTIMIZER_COMBINER_HPP
#define BIBC_OPTIMIZER_COMBINER_HPP

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "../numerics/linalg.hpp"
#include "../system_model.hpp"

namespace bibc
{

/// Unit norm, first nonzero entry real positive.
inline CVec normalize_phase(const CVec& u)
{
    const double n = u.norm();
    if (!(n > 0.0))
    {
        CVec e = CVec::Zero(u.size());
        e(0) = 1.0;
        return e;
    }
    CVec v = u / n;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-300)
        {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            break;
        }
    return v;
}

/// u_k = normalize((sum_{j!=k} alpha_j p b_j b_j^H + sigma^2 I)^{-1} b_k), b_j = h_j(s).
inline CMat optimal_combiner(const CsiView& csi, const CVec& s, const Eigen::VectorXd& alpha, double p_t)
{
    const int K = csi.num_tags();
    const int L = csi.reader_antennas();
    std::vector<CVec> b(K);
    for (int j = 0; j < K; ++j)
        b[j] = csi.cascaded[j] * s;
    CMat U(L, K);
    for (int k = 0; k < K; ++k)
    {
        CMat A = csi.noise_power * CMat::Identity(L, L);
        for (int j = 0; j < K; ++j)
            if (j != k)
                A.noalias() += alpha(j) * p_t * b[j] * b[j].adjoint();
        U.col(k) = normalize_phase(numerics::hermitian_rank1_solve(A, b[k]));
    }
    return U;
}

/// Maximum-ratio combiner u_k = b_k / |b_k|.
inline CMat mrc_combiner(const CsiView& csi, const CVec& s)
{
    const int K = csi.num_tags();
    CMat U(csi.reader_antennas(), K);
    for (int k = 0; k < K; ++k)
        U.col(k) = normalize_phase(csi.cascaded[k] * s);
    return U;
}

} // namespace bibc

#endif
