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

#ifndef BIBC_TESTS_FIXTURES_HPP
#define BIBC_TESTS_FIXTURES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "bibc/bibc.hpp"

namespace fixture
{

// Frozen output of tests/oracles/reference_values.py.
inline constexpr double tag_xy_seed42[3][2] = {{21.795332990176597, 87.820562175134953},
                                                {29.198080485610276, 94.576063815011551},
                                                {72.012665108396263, 31.841270185494054}};
inline constexpr double normals_seed7_drop3_idx2[4] = {-0.04735307103484699, -0.010008520719791908,
                                                       0.98746758662811851, -2.0321866325385707};
inline constexpr double hata_2000_15_1 = 143.369809450864892;
inline constexpr double zeta_db_100m = -213.369809450864892;
inline constexpr double zeta_db_flat = -188.854359515905173;
inline constexpr double zeta_db_30m = -198.396784610298425;
inline constexpr double zeta_db_100m_km = -108.369809450864892;

inline constexpr double ei_minus_1 = -0.21938393439552029;
inline constexpr double ei_values[5][2] = {{-1e-3, -6.331539364136149},
                                           {-0.5, -0.55977359477616084},
                                           {-2.0, -0.048900510708061118},
                                           {-10.0, -4.1569689296853246e-06},
                                           {-50.0, -3.7832640295504591e-24}};
inline constexpr double exact_rate_1_0 = 0.86034738227088592;
inline constexpr double exact_rate_values[4][3] = {{0.1, 0.0, 0.13209796780219238},
                                                   {2.0, 0.5, 0.99040926778813243},
                                                   {10.0, 3.0, 1.5456572571248479},
                                                   {100.0, 10.0, 3.1096287545241403}};
inline constexpr double rate_bound_worst_gap = 0.20018369364511696;

inline bibc::CVec random_cvec(bibc::Rng& r, int n, double var = 1.0)
{
    bibc::CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = r.complex_normal(var);
    return v;
}

inline bibc::CMat random_cmat(bibc::Rng& r, int rows, int cols, double var = 1.0)
{
    bibc::CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = r.complex_normal(var);
    return m;
}

/// Unit-scale CSI with cascaded[k] = g_k f_k^T.
inline bibc::CsiView random_csi(std::uint64_t seed, int M, int K, int L, double noise = 1.0)
{
    bibc::Rng r(seed, 0, bibc::Stream::test, 0);
    bibc::CsiView c;
    c.forward = random_cmat(r, K, M);
    for (int k = 0; k < K; ++k)
    {
        const bibc::CVec g = random_cvec(r, L);
        c.cascaded.push_back(g * c.forward.row(k));
    }
    c.noise_power = noise;
    return c;
}

inline bibc::CVec unit_modulus(bibc::Rng& r, int n, double amp = 1.0)
{
    bibc::CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = std::polar(amp, 2.0 * std::numbers::pi * r.uniform());
    return v;
}

} // namespace fixture

#endif
