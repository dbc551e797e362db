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

#ifndef BIBC_OPTIMIZER_REFLECTION_HPP
#define BIBC_OPTIMIZER_REFLECTION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "../numerics/lp.hpp"
#include "../system_model.hpp"
#include "beamforming.hpp"

namespace bibc
{

inline constexpr double alpha_min = 1e-4;
inline constexpr double alpha_max = 1.0 - 1e-4;

/// Everything the reflection block needs at fixed (s, U): the SINR of tag k is
/// A_k(alpha) / B_k(alpha) with A_k = alpha_k gain(k,k) and
/// B_k = sum_{j!=k} alpha_j gain(k,j) + noise(k).
struct ReflectionModel
{
    Eigen::MatrixXd gain;     // p_t |u_k^H h_j(s)|^2
    Eigen::VectorXd noise;    // |u_k|^2 sigma^2
    Eigen::VectorXd forward;  // p_t |f_k^T s|^2
    double p_req = 0.0;       // p_b'
    double psi = 1.0;

    int size() const { return static_cast<int>(noise.size()); }

    double numerator(const Eigen::VectorXd& alpha, int k) const { return alpha(k) * gain(k, k); }

    double denominator(const Eigen::VectorXd& alpha, int k) const
    {
        double b = noise(k);
        for (int j = 0; j < size(); ++j)
            if (j != k)
                b += alpha(j) * gain(k, j);
        return b;
    }

    double objective(const Eigen::VectorXd& alpha) const
    {
        double r = 0.0;
        for (int k = 0; k < size(); ++k)
            r += psi * std::log2(1.0 + numerator(alpha, k) / denominator(alpha, k));
        return r;
    }

    /// Largest alpha_k that keeps the incident power above p_b' with margin.
    Eigen::VectorXd upper_bounds(double margin = 4.0 * eh_margin) const
    {
        Eigen::VectorXd ub = Eigen::VectorXd::Constant(size(), alpha_max);
        if (p_req > 0.0)
            for (int k = 0; k < size(); ++k)
                ub(k) = std::min(ub(k), forward(k) > 0.0 ? 1.0 - p_req * (1.0 + margin) / forward(k) : -1.0);
        return ub;
    }
};

inline ReflectionModel make_reflection_model(const CsiView& csi, const CVec& s, const CMat& U, double p_t,
                                             double p_req, double psi)
{
    const int K = csi.num_tags();
    const CMat c = link_gains(csi, s, U);
    ReflectionModel rm;
    rm.gain = p_t * c.cwiseAbs2();
    rm.noise.resize(K);
    rm.forward.resize(K);
    for (int k = 0; k < K; ++k)
    {
        rm.noise(k) = U.col(k).squaredNorm() * csi.noise_power;
        rm.forward(k) = received_power(csi.forward.row(k).transpose(), s, p_t);
    }
    rm.p_req = p_req;
    rm.psi = psi;
    return rm;
}

/// mu_k = psi B_k / (A_k + B_k)
inline Eigen::VectorXd update_mu(const ReflectionModel& rm, const Eigen::VectorXd& alpha)
{
    Eigen::VectorXd mu(rm.size());
    for (int k = 0; k < rm.size(); ++k)
    {
        const double A = rm.numerator(alpha, k);
        const double B = rm.denominator(alpha, k);
        mu(k) = rm.psi * B / (A + B);
    }
    return mu;
}

/// theta_k = A_k / B_k, the current SINR.
inline Eigen::VectorXd update_theta(const ReflectionModel& rm, const Eigen::VectorXd& alpha)
{
    Eigen::VectorXd th(rm.size());
    for (int k = 0; k < rm.size(); ++k)
        th(k) = rm.numerator(alpha, k) / rm.denominator(alpha, k);
    return th;
}

struct AlphaFeasibility
{
    Eigen::VectorXd alpha;
    bool feasible = true;
    double min_slack = 0.0;
};

/// Finds alpha with theta_k B_k(alpha) <= A_k(alpha) for every k, maximizing the
/// smallest SINR slack (rows scaled to alpha units) inside the EH-limited box.
inline AlphaFeasibility solve_alpha_feasibility(const ReflectionModel& rm, const Eigen::VectorXd& theta,
                                                const Eigen::VectorXd& alpha_prev)
{
    const int K = rm.size();
    numerics::LPSlackProblem lp;
    lp.A = Eigen::MatrixXd::Zero(K, K);
    lp.b.resize(K);
    lp.weights = Eigen::VectorXd::Ones(K);
    for (int k = 0; k < K; ++k)
    {
        const double scale = rm.gain(k, k) > 0.0 ? rm.gain(k, k) : 1.0;
        for (int j = 0; j < K; ++j)
            lp.A(k, j) = j == k ? -rm.gain(k, k) / scale : theta(k) * rm.gain(k, j) / scale;
        lp.b(k) = -theta(k) * rm.noise(k) / scale;
    }
    lp.lower = Eigen::VectorXd::Constant(K, alpha_min);
    lp.upper = rm.upper_bounds();
    lp.box_in_slack = false;

    AlphaFeasibility out;
    if ((lp.upper.array() < lp.lower.array()).any())
    {
        out.alpha = alpha_prev;
        out.feasible = false;
        return out;
    }
    const numerics::LPSlackResult res = numerics::solve_lp_slack(lp);
    out.min_slack = res.min_slack;
    if (res.status != numerics::LPStatus::optimal)
    {
        out.alpha = alpha_prev;
        out.feasible = false;
        return out;
    }
    out.alpha = res.x;
    return out;
}

namespace detail
{

// Sum-of-ratios ascent: with theta = SINR and y the quadratic-transform
// variable, the alpha subproblem separates and has a closed form per tag.
inline Eigen::VectorXd fractional_alpha_ascent(const ReflectionModel& rm, Eigen::VectorXd alpha,
                                               const Eigen::VectorXd& lo, const Eigen::VectorXd& ub,
                                               int max_iters, double tol, int* iters = nullptr)
{
    const int K = rm.size();
    double obj = rm.objective(alpha);
    int it = 0;
    for (; it < max_iters; ++it)
    {
        Eigen::VectorXd y(K);
        Eigen::VectorXd e(K);
        for (int k = 0; k < K; ++k)
        {
            const double A = rm.numerator(alpha, k);
            const double B = rm.denominator(alpha, k);
            const double theta = A / B;
            y(k) = std::sqrt((1.0 + theta) * A) / (A + B);
            e(k) = (1.0 + theta) * rm.gain(k, k);
        }
        Eigen::VectorXd next(K);
        for (int j = 0; j < K; ++j)
        {
            double L = y(j) * y(j) * rm.gain(j, j);
            for (int k = 0; k < K; ++k)
                if (k != j)
                    L += y(k) * y(k) * rm.gain(k, j);
            const double a = L > 0.0 ? e(j) * y(j) * y(j) / (L * L) : ub(j);
            next(j) = std::clamp(a, lo(j), ub(j));
        }
        const double obj_next = rm.objective(next);
        if (!(obj_next >= obj))
            break;
        const double inc = (obj_next - obj) / std::max(obj, 1e-300);
        alpha = next;
        obj = obj_next;
        if (inc < tol)
        {
            ++it;
            break;
        }
    }
    if (iters)
        *iters = it;
    return alpha;
}

} // namespace detail

struct ReflectionOptions
{
    double eps = 1e-4;
    int max_iters = 60;
};

struct ReflectionResult
{
    Eigen::VectorXd alpha;
    bool feasible = true;
    int iterations = 0;
    std::vector<double> trace;
    Eigen::VectorXd mu; // last dual weights, diagnostics only
};

/// Reflection-coefficient block.
///
/// Runs the mu / theta / slack-LP iteration, then polishes with the
/// sum-of-ratios ascent from the LP point and from a few corner starts,
/// keeping the best. Every accepted step is monotone in the objective.
inline ReflectionResult optimize_reflection(const ReflectionModel& rm, const Eigen::VectorXd& alpha0,
                                            const ReflectionOptions& opt = {})
{
    const int K = rm.size();
    ReflectionResult out;
    out.alpha = alpha0;
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(K, alpha_min);
    const Eigen::VectorXd ub = rm.upper_bounds();
    if ((ub.array() < lo.array()).any())
    {
        out.feasible = false;
        return out;
    }
    double obj = rm.objective(out.alpha);
    out.trace.push_back(obj);

    for (int it = 0; it < opt.max_iters; ++it)
    {
        out.mu = update_mu(rm, out.alpha);
        const Eigen::VectorXd theta = update_theta(rm, out.alpha);
        const AlphaFeasibility af = solve_alpha_feasibility(rm, theta, out.alpha);
        ++out.iterations;
        if (!af.feasible)
        {
            out.feasible = false;
            break;
        }
        const double next = rm.objective(af.alpha);
        if (!(next >= obj))
            break;
        const double inc = (next - obj) / std::max(obj, 1e-300);
        out.alpha = af.alpha;
        obj = next;
        out.trace.push_back(obj);
        if (inc < opt.eps)
            break;
    }

    std::vector<Eigen::VectorXd> starts{out.alpha.cwiseMax(lo).cwiseMin(ub), ub};
    if (K > 1)
        for (int k = 0; k < K; ++k)
        {
            Eigen::VectorXd a = lo;
            a(k) = ub(k);
            starts.push_back(a);
        }
    for (const auto& st : starts)
    {
        int its = 0;
        const Eigen::VectorXd a = detail::fractional_alpha_ascent(rm, st, lo, ub, 2000, 1e-12, &its);
        out.iterations += its;
        const double v = rm.objective(a);
        if (v > obj)
        {
            obj = v;
            out.alpha = a;
        }
    }
    if (out.trace.empty() || obj > out.trace.back())
        out.trace.push_back(obj);
    return out;
}

} // namespace bibc

#endif
