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

#ifndef BIBC_PILOTS_HPP
#define BIBC_PILOTS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "channel.hpp"
#include "config.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace bibc
{

/// Orthogonal constant-modulus pilots: X rows are the first K+1 rows of the
/// tau-point DFT matrix, s is all-ones, C = X without its leading row.
struct PilotBook
{
    CVec s;
    CMat X; // (K+1) x tau
    CMat C; // K x tau

    int num_tags() const { return static_cast<int>(X.rows()) - 1; }
    int length() const { return static_cast<int>(X.cols()); }
};

inline PilotBook build_pilot_book(int K, int tau)
{
    if (K < 0 || tau < K + 1)
        throw config_error("pilot book needs tau >= K+1 for orthogonality (K=" + std::to_string(K) +
                           ", tau=" + std::to_string(tau) + ")");
    PilotBook pb;
    pb.s = CVec::Ones(tau);
    pb.X.resize(K + 1, tau);
    for (int i = 0; i <= K; ++i)
        for (int n = 0; n < tau; ++n)
        {
            // Reduce the index first so the phase argument stays small.
            const int idx = (i * n) % tau;
            pb.X(i, n) = std::polar(1.0, -2.0 * std::numbers::pi * idx / tau);
        }
    pb.C = pb.X.bottomRows(K);
    return pb;
}

/// Y_m = sqrt(p_p) H_m X diag(s) + N_m.
inline CMat synthesize_reader_rx(const CMat& H_m, const PilotBook& pb, double p_p, double noise_power,
                                 Rng& rng)
{
    if (H_m.cols() != pb.X.rows())
        throw std::invalid_argument("synthesize_reader_rx: H_m must have K+1 columns");
    CMat Y = std::sqrt(p_p) * H_m * pb.X * pb.s.asDiagonal();
    for (Eigen::Index n = 0; n < Y.cols(); ++n)
        for (Eigen::Index l = 0; l < Y.rows(); ++l)
            Y(l, n) += rng.complex_normal(noise_power);
    return Y;
}

/// (Y diag(s)^H) X^H / tau = sqrt(p_p) H_m + noise of variance sigma^2/tau.
inline CMat despread(const CMat& Y, const PilotBook& pb)
{
    if (Y.cols() != pb.length())
        throw std::invalid_argument("despread: observation length does not match pilot book");
    return (Y * pb.s.conjugate().asDiagonal()) * pb.X.adjoint() / static_cast<double>(pb.length());
}

/// LS: Y diag(s)^H Xb^H (Xb Xb^H)^{-1}, Xb = sqrt(p_p) X.
inline CMat estimate_ls(const CMat& Y, const PilotBook& pb, double p_p)
{
    if (Y.cols() != pb.length())
        throw std::invalid_argument("estimate_ls: observation length does not match pilot book");
    const CMat Xb = std::sqrt(p_p) * pb.X;
    const CMat gram = Xb * Xb.adjoint();
    Eigen::LLT<CMat> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("estimate_ls: pilot matrix is rank deficient");
    const CMat Yd = Y * pb.s.conjugate().asDiagonal();
    // Yd Xb^H G^{-1} = (G^{-1} Xb Yd^H)^H since G is Hermitian.
    return llt.solve(Xb * Yd.adjoint()).adjoint();
}

/// Prior statistics for one slot: column 0 direct, columns 1..K cascaded.
struct SlotStatistics
{
    Eigen::VectorXd zeta;  // K+1 large-scale gains of h_{0,m}, h_{k,m}
    Eigen::VectorXd alpha; // K+1 training coefficients, alpha(0) = 1
};

/// Per-column MMSE statistic gamma = alpha p_p zeta^2 / (alpha p_p zeta + sigma_p^2),
/// the variance of the estimate of the unscaled channel entry.
inline Eigen::VectorXd mmse_gamma(const SlotStatistics& st, double p_p, double sigma_p2)
{
    Eigen::VectorXd g(st.zeta.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
    {
        const double a = st.alpha(k);
        g(k) = a * p_p * st.zeta(k) * st.zeta(k) / (a * p_p * st.zeta(k) + sigma_p2);
    }
    return g;
}

/// Entry-wise MMSE on the despread observation. Column k targets
/// sqrt(alpha_k) h_{k,m}, whose prior variance is alpha_k zeta_k.
inline CMat estimate_mmse(const CMat& Ybar, const SlotStatistics& st, double p_p, double sigma_p2)
{
    const Eigen::Index cols = Ybar.cols();
    if (st.zeta.size() != cols || st.alpha.size() != cols)
        throw std::invalid_argument("estimate_mmse: statistics missing for some columns");
    if (!(st.zeta.array() > 0.0).all() || !(st.alpha.array() > 0.0).all())
        throw std::invalid_argument("estimate_mmse: statistics must be positive");
    CMat H = Ybar;
    for (Eigen::Index k = 0; k < cols; ++k)
    {
        const double var = st.alpha(k) * st.zeta(k);
        H.col(k) *= std::sqrt(p_p) * var / (p_p * var + sigma_p2);
    }
    return H;
}

/// AP-side forward estimate for slot m. Returns fbar_hat (estimate of f^2)
/// and the principal square root f_hat.
struct ForwardEstimate
{
    CVec fbar_hat;
    CVec f_hat;
};

inline ForwardEstimate estimate_forward_ls(const PilotBook& pb, const CVec& f_col, const Eigen::VectorXd& alpha,
                                           double p_p, double noise_power, Rng& rng)
{
    const int K = pb.num_tags();
    const int tau = pb.length();
    if (f_col.size() != K || alpha.size() != K)
        throw std::invalid_argument("estimate_forward_ls: dimension mismatch");
    CVec y = CVec::Zero(tau);
    for (int i = 0; i < K; ++i)
        y += std::sqrt(p_p * alpha(i)) * f_col(i) * f_col(i) * pb.C.row(i).transpose();
    y = y.cwiseProduct(pb.s);
    for (int n = 0; n < tau; ++n)
        y(n) += rng.complex_normal(noise_power);
    const CVec yd = y.cwiseProduct(pb.s.conjugate());
    ForwardEstimate out;
    out.fbar_hat.resize(K);
    out.f_hat.resize(K);
    for (int k = 0; k < K; ++k)
    {
        const cd proj = pb.C.row(k).transpose().dot(yd) / static_cast<double>(tau);
        out.fbar_hat(k) = proj / std::sqrt(p_p * alpha(k));
        out.f_hat(k) = std::sqrt(out.fbar_hat(k));
    }
    return out;
}

/// sum ||v - v_hat||^2 / sum ||v||^2 over an ensemble.
inline double nmse(const std::vector<CVec>& truth, const std::vector<CVec>& estimate)
{
    if (truth.empty())
        throw std::invalid_argument("nmse: empty ensemble");
    if (truth.size() != estimate.size())
        throw std::invalid_argument("nmse: ensemble size mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        if (truth[i].size() != estimate[i].size())
            throw std::invalid_argument("nmse: shape mismatch");
        num += (truth[i] - estimate[i]).squaredNorm();
        den += truth[i].squaredNorm();
    }
    return num / den;
}

enum class Estimator
{
    ls,
    mmse
};

/// Per-drop estimates produced by the full pilot phase.
struct ChannelEstimates
{
    std::vector<CMat> H_hat; // M entries, L x (K+1)
    CMat f_hat;              // K x M
    CMat fbar_hat;           // K x M
    Estimator method = Estimator::ls;
    Eigen::VectorXd alpha_train;
    std::vector<Eigen::VectorXd> gamma; // MMSE statistics per slot (empty for LS)

    /// Cascaded estimate for tag k at AP m with sqrt(alpha_train) removed.
    CVec cascaded(int k, int m) const { return H_hat[m].col(k + 1) / std::sqrt(alpha_train(k)); }
    CVec direct(int m) const { return H_hat[m].col(0); }
};

/// True per-slot matrix H_m = [h_{0,m}, sqrt(alpha_1) h_{1,m}, ...].
inline CMat training_matrix(const ChannelRealization& ch, int m, const Eigen::VectorXd& alpha)
{
    const int K = ch.num_tags();
    CMat H(ch.reader_antennas(), K + 1);
    H.col(0) = ch.H0.col(m);
    for (int k = 0; k < K; ++k)
        H.col(k + 1) = std::sqrt(alpha(k)) * ch.cascaded(k, m);
    return H;
}

/// Runs both pilot phases for every AP slot. Each slot has its own noise stream.
inline ChannelEstimates estimate_channels(const ChannelRealization& ch, const NetworkGeometry& geo,
                                          const SystemConfig& cfg, std::uint64_t seed, std::uint64_t drop,
                                          Estimator method = Estimator::ls)
{
    const int M = ch.num_aps();
    const int K = ch.num_tags();
    const PilotBook pb = build_pilot_book(K, cfg.pilot_len);
    const double p_p = cfg.pilot_power_w();
    const double sigma2 = ch.noise_power;
    const double sigma_p2 = sigma2 / cfg.pilot_len;

    ChannelEstimates est;
    est.method = method;
    est.alpha_train = Eigen::VectorXd::Constant(K, cfg.alpha_train);
    est.H_hat.resize(M);
    est.f_hat.resize(K, M);
    est.fbar_hat.resize(K, M);

    for (int m = 0; m < M; ++m)
    {
        Rng reader_rng(seed, drop, Stream::reader_noise, static_cast<std::uint64_t>(m));
        const CMat Hm = training_matrix(ch, m, est.alpha_train);
        const CMat Y = synthesize_reader_rx(Hm, pb, p_p, sigma2, reader_rng);
        if (method == Estimator::ls)
        {
            est.H_hat[m] = estimate_ls(Y, pb, p_p);
        }
        else
        {
            SlotStatistics st;
            st.zeta.resize(K + 1);
            st.alpha.resize(K + 1);
            st.zeta(0) = geo.zeta_h0(m);
            st.alpha(0) = 1.0;
            for (int k = 0; k < K; ++k)
            {
                st.zeta(k + 1) = geo.zeta_f(k, m) * geo.zeta_g(k);
                st.alpha(k + 1) = est.alpha_train(k);
            }
            est.H_hat[m] = estimate_mmse(despread(Y, pb), st, p_p, sigma_p2);
            est.gamma.push_back(mmse_gamma(st, p_p, sigma_p2));
        }
        Rng ap_rng(seed, drop, Stream::ap_noise, static_cast<std::uint64_t>(m));
        const ForwardEstimate fe = estimate_forward_ls(pb, ch.F.col(m), est.alpha_train, p_p, sigma2, ap_rng);
        est.f_hat.col(m) = fe.f_hat;
        est.fbar_hat.col(m) = fe.fbar_hat;
    }
    return est;
}

} // namespace bibc

#endif
