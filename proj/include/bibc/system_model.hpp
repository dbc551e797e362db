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

#ifndef BIBC_SYSTEM_MODEL_HPP
#define BIBC_SYSTEM_MODEL_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "channel.hpp"
#include "config.hpp"
#include "numerics/special.hpp"
#include "pilots.hpp"

namespace bibc
{

/// The channel knowledge an optimizer works with (true or estimated).
struct CsiView
{
    std::vector<CMat> cascaded; // K entries, L x M; column m = h_{k,m}
    CMat forward;               // K x M
    double noise_power = 0.0;

    int num_tags() const { return static_cast<int>(forward.rows()); }
    int num_aps() const { return static_cast<int>(forward.cols()); }
    int reader_antennas() const { return cascaded.empty() ? 0 : static_cast<int>(cascaded[0].rows()); }
};

inline CsiView csi_from_truth(const ChannelRealization& ch)
{
    CsiView v;
    const int K = ch.num_tags();
    v.cascaded.resize(K);
    for (int k = 0; k < K; ++k)
        v.cascaded[k] = ch.G.col(k) * ch.F.row(k);
    v.forward = ch.F;
    v.noise_power = ch.noise_power;
    return v;
}

inline CsiView csi_from_estimates(const ChannelEstimates& est, double noise_power)
{
    CsiView v;
    const int M = static_cast<int>(est.H_hat.size());
    const int K = static_cast<int>(est.f_hat.rows());
    const int L = M ? static_cast<int>(est.H_hat[0].rows()) : 0;
    v.cascaded.assign(K, CMat(L, M));
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            v.cascaded[k].col(m) = est.cascaded(k, m);
    v.forward = est.f_hat;
    v.noise_power = noise_power;
    return v;
}

/// Stacked beamformer w = [w_1; ...; w_K] (each length M), combiners, reflection coefficients.
struct Solution
{
    CVec w;
    CMat U;
    Eigen::VectorXd alpha;

    int num_tags() const { return static_cast<int>(alpha.size()); }
    int num_aps() const { return num_tags() ? static_cast<int>(w.size()) / num_tags() : 0; }

    /// s = sum_i w_i, the carrier actually radiated by each AP.
    CVec effective_beam() const
    {
        const int K = num_tags();
        const int M = num_aps();
        CVec s = CVec::Zero(M);
        for (int i = 0; i < K; ++i)
            s += w.segment(i * M, M);
        return s;
    }

    /// max_m sum_i |w_{i,m}|^2
    double max_ap_power() const
    {
        const int K = num_tags();
        const int M = num_aps();
        double mx = 0.0;
        for (int m = 0; m < M; ++m)
        {
            double acc = 0.0;
            for (int i = 0; i < K; ++i)
                acc += std::norm(w(i * M + m));
            mx = std::max(mx, acc);
        }
        return mx;
    }
};

/// w_i = s / K for every i; per-AP power then equals |s_m|^2 / K.
inline CVec stack_from_beam(const CVec& s, int K)
{
    CVec w(s.size() * K);
    for (int i = 0; i < K; ++i)
        w.segment(i * s.size(), s.size()) = s / static_cast<double>(K);
    return w;
}

/// f_k^T s
inline cd forward_gain(const CsiView& csi, int k, const CVec& s)
{
    return (csi.forward.row(k).transpose().array() * s.array()).sum();
}

/// (1 - alpha_k) p_t |f_k^T s|^2
inline double incident_power(const CVec& f_row, const CVec& s, double alpha, double p_t)
{
    const cd g = (f_row.array() * s.array()).sum();
    return (1.0 - alpha) * p_t * std::norm(g);
}

/// p_t |f_k^T s|^2 before the reflection split.
inline double received_power(const CVec& f_row, const CVec& s, double p_t)
{
    return incident_power(f_row, s, 0.0, p_t);
}

/// Energy harvesting model with the activation threshold mapped to incident power.
class EHModel
{
public:
    EHModel(EHParams params, double threshold_w) : p_(params), threshold_w_(threshold_w)
    {
        if (p_.kind == EHKind::linear && !(p_.efficiency > 0.0 && p_.efficiency <= 1.0))
            throw config_error("linear EH efficiency must lie in (0, 1]");
        if (p_.kind == EHKind::nonlinear && !(p_.saturation_w > 0.0 && p_.steepness > 0.0))
            throw config_error("nonlinear EH needs positive saturation and steepness");
    }

    static EHModel from_config(const SystemConfig& cfg)
    {
        return EHModel(cfg.eh, dbm_to_watt(cfg.activation_threshold_dbm));
    }

    double harvested(double p_in) const
    {
        if (p_in < 0.0)
            throw std::invalid_argument("harvested: negative input power");
        if (p_.kind == EHKind::linear)
            return p_.efficiency * p_in;
        const double omega = offset();
        const double psi = 1.0 / (1.0 + std::exp(-p_.steepness * (p_in - p_.center_w)));
        return p_.saturation_w * (psi - omega) / (1.0 - omega);
    }

    /// Incident power that yields `p_h` harvested.
    double inverse(double p_h) const
    {
        if (p_.kind == EHKind::linear)
            return p_h / p_.efficiency;
        if (!(p_h >= 0.0 && p_h < p_.saturation_w))
            throw config_error("EH threshold outside the nonlinear model's range (0, P_max)");
        const double omega = offset();
        const double psi = p_h * (1.0 - omega) / p_.saturation_w + omega;
        return p_.center_w - std::log(1.0 / psi - 1.0) / p_.steepness;
    }

    /// p_b' : minimum incident power for activation.
    double required_incident() const { return inverse(threshold_w_); }

    bool active(double p_in) const { return p_in > 0.0 && p_in >= required_incident(); }

    const EHParams& params() const { return p_; }
    double threshold_w() const { return threshold_w_; }

private:
    double offset() const { return 1.0 / (1.0 + std::exp(p_.steepness * p_.center_w)); }

    EHParams p_;
    double threshold_w_;
};

/// c(k, j) = u_k^H h_j(s), where h_j(s) = sum_m h_{j,m} s_m.
inline CMat link_gains(const CsiView& csi, const CVec& s, const CMat& U)
{
    const int K = csi.num_tags();
    CMat c(K, K);
    std::vector<CVec> b(K);
    for (int j = 0; j < K; ++j)
        b[j] = csi.cascaded[j] * s;
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            c(k, j) = U.col(k).dot(b[j]);
    return c;
}

/// Numerator and denominator of the SINR of tag k.
struct SinrParts
{
    double signal = 0.0;
    double interference = 0.0;
    double noise = 0.0;

    double value() const { return signal / (interference + noise); }
};

inline SinrParts sinr_parts(const CMat& c, const Eigen::VectorXd& alpha, const CMat& U, int k, double p_t,
                            double noise_power)
{
    SinrParts sp;
    sp.signal = alpha(k) * p_t * std::norm(c(k, k));
    for (int j = 0; j < alpha.size(); ++j)
        if (j != k)
            sp.interference += alpha(j) * p_t * std::norm(c(k, j));
    sp.noise = U.col(k).squaredNorm() * noise_power;
    return sp;
}

inline double sinr(const CsiView& csi, const Solution& sol, int k, double p_t)
{
    const CMat c = link_gains(csi, sol.effective_beam(), sol.U);
    return sinr_parts(c, sol.alpha, sol.U, k, p_t, csi.noise_power).value();
}

inline Eigen::VectorXd sinr_all(const CsiView& csi, const Solution& sol, double p_t)
{
    const CMat c = link_gains(csi, sol.effective_beam(), sol.U);
    Eigen::VectorXd g(sol.num_tags());
    for (int k = 0; k < g.size(); ++k)
        g(k) = sinr_parts(c, sol.alpha, sol.U, k, p_t, csi.noise_power).value();
    return g;
}

/// Per-tag (a_k, b_k): SNR of the own and of the interfering paths for unit |s|^2.
inline std::pair<double, double> rate_coefficients(const CsiView& csi, const Solution& sol, int k, double p_t)
{
    const CMat c = link_gains(csi, sol.effective_beam(), sol.U);
    const SinrParts sp = sinr_parts(c, sol.alpha, sol.U, k, p_t, csi.noise_power);
    return {sp.signal / sp.noise, sp.interference / sp.noise};
}

/// E_s{log2(1 + a|s|^2 / (b|s|^2 + 1))} with |s|^2 ~ Exp(1), times psi.
inline double exact_rate(double a, double b, double psi)
{
    if (a < 0.0 || b < 0.0)
        throw std::invalid_argument("exact_rate: a and b must be non-negative");
    if (a == 0.0)
        return 0.0;
    const auto g = [](double x) { return x > 0.0 ? numerics::exp_e1_scaled(1.0 / x) : 0.0; };
    return psi * std::numbers::log2e * (g(a + b) - g(b));
}

/// psi log2(1 + gamma)
inline double rate_bound(double gamma, double psi)
{
    if (gamma < 0.0)
        throw std::invalid_argument("rate_bound: negative SINR");
    return psi * std::log2(1.0 + gamma);
}

inline double sum_rate_bound(const CsiView& csi, const Solution& sol, double p_t, double psi)
{
    const Eigen::VectorXd g = sinr_all(csi, sol, p_t);
    double r = 0.0;
    for (int k = 0; k < g.size(); ++k)
        r += rate_bound(g(k), psi);
    return r;
}

inline double sum_rate_exact(const CsiView& csi, const Solution& sol, double p_t, double psi)
{
    double r = 0.0;
    for (int k = 0; k < sol.num_tags(); ++k)
    {
        const auto [a, b] = rate_coefficients(csi, sol, k, p_t);
        r += exact_rate(a, b, psi);
    }
    return r;
}

} // namespace bibc

#endif
