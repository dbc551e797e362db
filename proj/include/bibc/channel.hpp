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

#ifndef BIBC_CHANNEL_HPP
#define BIBC_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace bibc
{

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// One small-scale fading realization.
struct ChannelRealization
{
    CMat H0; // L x M, column m = h_{0,m}
    CMat F;  // K x M, f_{k,m}
    CMat G;  // L x K, column k = g_k
    double noise_power = 0.0;

    int num_aps() const { return static_cast<int>(F.cols()); }
    int num_tags() const { return static_cast<int>(F.rows()); }
    int reader_antennas() const { return static_cast<int>(G.rows()); }

    /// h_{k,m} = f_{k,m} g_k
    CVec cascaded(int k, int m) const { return F(k, m) * G.col(k); }
};

/// Draws every link as sqrt(zeta) times CN(0,1). Each link family has its
/// own stream, and each link its own index, so the draw of one link never
/// depends on the dimensions of another family.
inline ChannelRealization draw_channels(const NetworkGeometry& geo, const SystemConfig& cfg,
                                        std::uint64_t seed, std::uint64_t drop = 0)
{
    const int M = geo.num_aps();
    const int K = geo.num_tags();
    const int L = cfg.reader_antennas;
    ChannelRealization ch;
    ch.H0.resize(L, M);
    ch.F.resize(K, M);
    ch.G.resize(L, K);
    for (int m = 0; m < M; ++m)
    {
        Rng rng(seed, drop, Stream::direct, static_cast<std::uint64_t>(m));
        const double amp = std::sqrt(geo.zeta_h0(m));
        for (int l = 0; l < L; ++l)
            ch.H0(l, m) = amp * rng.complex_normal();
    }
    for (int k = 0; k < K; ++k)
    {
        Rng rng(seed, drop, Stream::forward, static_cast<std::uint64_t>(k));
        for (int m = 0; m < M; ++m)
            ch.F(k, m) = std::sqrt(geo.zeta_f(k, m)) * rng.complex_normal();
    }
    for (int k = 0; k < K; ++k)
    {
        Rng rng(seed, drop, Stream::backscatter, static_cast<std::uint64_t>(k));
        const double amp = std::sqrt(geo.zeta_g(k));
        for (int l = 0; l < L; ++l)
            ch.G(l, k) = amp * rng.complex_normal();
    }
    ch.noise_power = cfg.noise_power_w();
    return ch;
}

} // namespace bibc

#endif
