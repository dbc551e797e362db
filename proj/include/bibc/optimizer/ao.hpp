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

#ifndef BIBC_OPTIMIZER_AO_HPP
#define BIBC_OPTIMIZER_AO_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "../config.hpp"
#include "../system_model.hpp"
#include "beamforming.hpp"
#include "combiner.hpp"
#include "reflection.hpp"

namespace bibc
{

struct AOIteration
{
    int iter = 0;
    double objective = 0.0;
    int block_iters_w = 0;
    int block_iters_alpha = 0;
};

struct AOTrace
{
    std::vector<AOIteration> iterations; // entry 0 is the starting point
    bool converged = false;
    bool feasible = true;

    int outer_iterations() const { return iterations.empty() ? 0 : iterations.back().iter; }

    std::vector<double> objectives() const
    {
        std::vector<double> v;
        for (const auto& it : iterations)
            v.push_back(it.objective);
        return v;
    }
};

inline void write_trace_header(std::ostream& os)
{
    os << "drop,iter,objective,block_iters_w,block_iters_alpha,feasible\n";
}

inline void write_trace_csv(std::ostream& os, const AOTrace& tr, std::uint64_t drop)
{
    for (const auto& it : tr.iterations)
        os << drop << ',' << it.iter << ',' << it.objective << ',' << it.block_iters_w << ','
           << it.block_iters_alpha << ',' << (tr.feasible ? 1 : 0) << '\n';
}

struct AOOptions
{
    bool optimize_alpha = true;
    std::optional<Eigen::VectorXd> fixed_alpha; // used when optimize_alpha is false
};

struct AOResult
{
    Solution solution;
    AOTrace trace;
    bool feasible = true;
};

/// Equal-power beam whose per-AP phases follow the sum of the tags' dominant
/// beam directions (each tag's own direction is co-phased by construction).
inline CVec mrt_beam(const CsiView& csi)
{
    const int M = csi.num_aps();
    const int K = csi.num_tags();
    CVec v = CVec::Zero(M);
    for (int k = 0; k < K; ++k)
    {
        Eigen::JacobiSVD<CMat> svd(csi.cascaded[k], Eigen::ComputeThinV);
        CVec d = svd.matrixV().col(0);
        // Anchor the arbitrary phase on the strongest entry.
        Eigen::Index imax = 0;
        d.cwiseAbs().maxCoeff(&imax);
        if (std::abs(d(imax)) > 0.0)
            d *= std::conj(d(imax)) / std::abs(d(imax));
        v += d;
    }
    CVec s(M);
    const double amp = std::sqrt(static_cast<double>(K));
    for (int m = 0; m < M; ++m)
        s(m) = std::abs(v(m)) > 0.0 ? amp * v(m) / std::abs(v(m)) : cd(amp, 0.0);
    return s;
}

/// Beamforming, combining and reflection blocks in turn until the normalized
/// objective increment drops below eps_outer. With alpha optimized, the first
/// stage holds alpha at its start value and the second stage frees it.
inline AOResult alternating_optimization(const CsiView& csi, const SystemConfig& cfg, const AOOptions& ao = {})
{
    const int K = csi.num_tags();
    const double p_t = cfg.tx_power_w();
    const double p_req = EHModel::from_config(cfg).required_incident();
    const double psi = cfg.psi();

    BeamformingOptions bopt;
    bopt.eps = cfg.eps_inner;
    bopt.max_iters = cfg.max_beamforming_iters;
    ReflectionOptions ropt;
    ropt.eps = cfg.eps_inner;
    ropt.max_iters = cfg.max_alpha_iters;

    AOResult res;
    Eigen::VectorXd alpha = ao.fixed_alpha && !ao.optimize_alpha ? *ao.fixed_alpha
                                                                 : Eigen::VectorXd::Constant(K, cfg.alpha_train);
    CVec s = mrt_beam(csi);
    if (detail::eh_slack(csi, s, alpha, p_t, p_req) < 2.0 * eh_margin &&
        !restore_eh_feasibility(csi, s, alpha, p_t, p_req))
    {
        // Less reflection leaves more power to harvest.
        if (ao.optimize_alpha)
            alpha = Eigen::VectorXd::Constant(K, alpha_min);
        if (!ao.optimize_alpha || !restore_eh_feasibility(csi, s, alpha, p_t, p_req))
        {
            res.feasible = false;
            res.trace.feasible = false;
            res.solution = {stack_from_beam(s, K), mrc_combiner(csi, s), alpha};
            return res;
        }
    }
    CMat U = mrc_combiner(csi, s);
    double obj = detail::objective_at(csi, s, U, alpha, p_t, psi);
    res.trace.iterations.push_back({0, obj, 0, 0});

    // w and U settle at the starting alpha before alpha is released.
    bool alpha_free = false;
    for (int it = 1; it <= cfg.max_outer_iters; ++it)
    {
        const BeamformingResult bf = solve_beamforming(csi, U, alpha, p_t, p_req, psi, s, bopt);
        if (!bf.feasible)
        {
            res.feasible = false;
            break;
        }
        s = bf.s;
        U = optimal_combiner(csi, s, alpha, p_t);
        int alpha_iters = 0;
        if (ao.optimize_alpha && alpha_free)
        {
            const ReflectionModel rm = make_reflection_model(csi, s, U, p_t, p_req, psi);
            const ReflectionResult rr = optimize_reflection(rm, alpha, ropt);
            alpha_iters = rr.iterations;
            if (rr.feasible || rm.objective(rr.alpha) >= rm.objective(alpha))
                alpha = rr.alpha;
        }
        const double next = detail::objective_at(csi, s, U, alpha, p_t, psi);
        res.trace.iterations.push_back({it, next, bf.iterations, alpha_iters});
        const double inc = (next - obj) / std::max(std::abs(obj), 1e-300);
        obj = next;
        if (inc < cfg.eps_outer)
        {
            if (ao.optimize_alpha && !alpha_free)
            {
                alpha_free = true;
                continue;
            }
            res.trace.converged = true;
            break;
        }
    }
    res.trace.feasible = res.feasible;
    res.solution = {stack_from_beam(s, K), U, alpha};
    return res;
}

} // namespace bibc

#endif
