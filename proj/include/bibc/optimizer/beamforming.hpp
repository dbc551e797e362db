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

#ifndef BIBC_OPTIMIZER_BEAMFORMING_HPP
#define BIBC_OPTIMIZER_BEAMFORMING_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "../numerics/concave.hpp"
#include "../numerics/linalg.hpp"
#include "../system_model.hpp"

namespace bibc
{

/// Relative margin kept above the activation threshold by every block.
inline constexpr double eh_margin = 1e-6;

using InteractionVectors = std::vector<std::vector<CVec>>; // [k][j]

/// a[k][j] with a[k][j]^H s = u_k^H h_j(s), in the M-dimensional beam space.
inline InteractionVectors interaction_vectors(const CsiView& csi, const CMat& U)
{
    const int K = csi.num_tags();
    InteractionVectors a(K, std::vector<CVec>(K));
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            a[k][j] = csi.cascaded[j].adjoint() * U.col(k);
    return a;
}

/// K stacked copies, the form acting on the full length-MK beamformer.
inline CVec stack_copies(const CVec& v, int K)
{
    CVec out(v.size() * K);
    for (int i = 0; i < K; ++i)
        out.segment(i * v.size(), v.size()) = v;
    return out;
}

inline InteractionVectors stack_interaction(const InteractionVectors& a)
{
    const int K = static_cast<int>(a.size());
    InteractionVectors out = a;
    for (auto& row : out)
        for (auto& v : row)
            v = stack_copies(v, K);
    return out;
}

/// Rotates a[k][k] so that a[k][k]^H x is real and non-negative.
inline InteractionVectors cophase(const InteractionVectors& a, const CVec& x)
{
    InteractionVectors out = a;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        const cd v = a[k][k].dot(x);
        if (std::abs(v) > 0.0)
            out[k][k] *= v / std::abs(v);
    }
    return out;
}

/// Auxiliary variable of the quadratic transform:
/// lambda_k = sqrt(alpha_k p) Re{a_kk^H x} / (p sum_{j!=k} alpha_j |a_kj^H x|^2 + sigma_k^2).
inline Eigen::VectorXd update_lambda(const CVec& x, const InteractionVectors& a, const Eigen::VectorXd& alpha,
                                     double p_t, const Eigen::VectorXd& sigma_w2)
{
    const int K = static_cast<int>(a.size());
    Eigen::VectorXd lam(K);
    for (int k = 0; k < K; ++k)
    {
        double den = sigma_w2(k);
        for (int j = 0; j < K; ++j)
            if (j != k)
                den += p_t * alpha(j) * std::norm(a[k][j].dot(x));
        lam(k) = std::sqrt(alpha(k) * p_t) * a[k][k].dot(x).real() / den;
    }
    return lam;
}

/// Per-tag concave quadratics q_k(x) = 1 - t_k + 2 Re{v_k^H x} - x^H U_k x.
struct SurrogateQuadratic
{
    std::vector<CMat> U;
    std::vector<CVec> v;
    Eigen::VectorXd t;
    Eigen::VectorXd lambda;

    double term(int k, const CVec& x) const
    {
        return 1.0 - t(k) + 2.0 * v[k].dot(x).real() - x.dot(U[k] * x).real();
    }

    /// sum_k psi log2(q_k(x))
    double value(const CVec& x, double psi) const
    {
        double f = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k)
            f += psi * std::log2(term(static_cast<int>(k), x));
        return f;
    }

    /// Gradient with respect to lift(x).
    Eigen::VectorXd gradient(const CVec& x, double psi) const
    {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * x.size());
        for (std::size_t k = 0; k < v.size(); ++k)
        {
            const double q = term(static_cast<int>(k), x);
            const CVec d = 2.0 * (v[k] - U[k] * x);
            g += psi / (q * std::numbers::ln2) * numerics::lift(d);
        }
        return g;
    }
};

inline SurrogateQuadratic build_surrogate(const Eigen::VectorXd& lambda, const InteractionVectors& a,
                                          const Eigen::VectorXd& alpha, double p_t,
                                          const Eigen::VectorXd& sigma_w2)
{
    const int K = static_cast<int>(a.size());
    const Eigen::Index n = K ? a[0][0].size() : 0;
    SurrogateQuadratic sq;
    sq.lambda = lambda;
    sq.t.resize(K);
    for (int k = 0; k < K; ++k)
    {
        CMat Uk = CMat::Zero(n, n);
        for (int j = 0; j < K; ++j)
            if (j != k)
                Uk.noalias() += alpha(j) * a[k][j] * a[k][j].adjoint();
        sq.U.push_back(lambda(k) * lambda(k) * p_t * Uk);
        sq.v.push_back(lambda(k) * std::sqrt(alpha(k) * p_t) * a[k][k]);
        sq.t(k) = lambda(k) * lambda(k) * sigma_w2(k);
    }
    return sq;
}

/// First-order model of |d^H x|^2 around an anchor:
/// P_lin(x) = |d^H x0|^2 + 2 Re{(d d^H x0)^H (x - x0)}.
struct EHLinearization
{
    CVec anchor;
    CVec grad; // d d^H x0
    double anchor_value = 0.0;
    double scale = 1.0; // (1 - alpha) p_t

    double power(const CVec& x) const { return anchor_value + 2.0 * grad.dot(x - anchor).real(); }
    double incident(const CVec& x) const { return scale * power(x); }
};

inline EHLinearization linearize_eh(const CVec& x_prev, const CVec& d, double alpha, double p_t)
{
    EHLinearization lin;
    lin.anchor = x_prev;
    const cd e = d.dot(x_prev);
    lin.grad = d * e;
    lin.anchor_value = std::norm(e);
    lin.scale = (1.0 - alpha) * p_t;
    return lin;
}

struct BeamformingOptions
{
    double eps = 1e-4;
    int max_iters = 60;
    numerics::ConcaveOptions solver;
    int random_starts = 4;        // extra random-phase starts in solve_beamforming_multistart
    std::uint64_t start_seed = 17;
};

struct BeamformingResult
{
    CVec s;
    bool feasible = true;
    int iterations = 0;
    std::vector<double> trace; // true objective after each accepted iterate
};

namespace detail
{

inline Eigen::VectorXd combiner_noise(const CsiView& csi, const CMat& U)
{
    Eigen::VectorXd s2(U.cols());
    for (Eigen::Index k = 0; k < U.cols(); ++k)
        s2(k) = U.col(k).squaredNorm() * csi.noise_power;
    return s2;
}

inline double objective_at(const CsiView& csi, const CVec& s, const CMat& U, const Eigen::VectorXd& alpha,
                           double p_t, double psi)
{
    const CMat c = link_gains(csi, s, U);
    double r = 0.0;
    for (int k = 0; k < alpha.size(); ++k)
        r += rate_bound(sinr_parts(c, alpha, U, k, p_t, csi.noise_power).value(), psi);
    return r;
}

/// min_k incident_k / p_b' - 1 (infinite when no threshold applies).
inline double eh_slack(const CsiView& csi, const CVec& s, const Eigen::VectorXd& alpha, double p_t,
                       double p_req)
{
    if (!(p_req > 0.0))
        return std::numeric_limits<double>::infinity();
    double slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < alpha.size(); ++k)
        slack = std::min(slack, incident_power(csi.forward.row(k).transpose(), s, alpha(k), p_t) / p_req - 1.0);
    return slack;
}

// Affine row for (1 - alpha_k) p_t P_lin(x) >= p_req (1 + margin), normalized.
inline numerics::AffineConstraint eh_row(const CsiView& csi, int k, const CVec& s_prev, double alpha,
                                         double p_t, double p_req, double margin = eh_margin)
{
    const CVec d = csi.forward.row(k).adjoint();
    const EHLinearization lin = linearize_eh(s_prev, d, alpha, p_t);
    // P_lin(x) = 2 Re{grad^H x} - |e|^2
    const double target = p_req * (1.0 + margin);
    numerics::AffineConstraint row;
    row.g = -2.0 * lin.scale / target * numerics::real_part_row(lin.grad);
    row.h = -1.0 - lin.scale * lin.anchor_value / target;
    return row;
}

inline std::vector<numerics::BallConstraint> ap_balls(int M, int K)
{
    std::vector<numerics::BallConstraint> balls(M);
    for (int m = 0; m < M; ++m)
        balls[m] = {{2 * m, 2 * m + 1}, static_cast<double>(K)};
    return balls;
}

} // namespace detail

/// Upper bound on |f_k^T s|^2 over the per-AP power set.
inline double max_forward_power(const CsiView& csi, int k)
{
    const double K = csi.num_tags();
    const double sum_abs = csi.forward.row(k).cwiseAbs().sum();
    return K * sum_abs * sum_abs;
}

/// Successive linearization toward an EH-feasible beam. Maximizes the minimum
/// normalized incident-power slack; succeeds once every slack exceeds `target`.
inline bool restore_eh_feasibility(const CsiView& csi, CVec& s, const Eigen::VectorXd& alpha, double p_t,
                                   double p_req, double target = 1e-3, int max_rounds = 40)
{
    const int M = csi.num_aps();
    const int K = csi.num_tags();
    if (!(p_req > 0.0))
        return true;
    for (int k = 0; k < K; ++k)
        if ((1.0 - alpha(k)) * p_t * max_forward_power(csi, k) < p_req * (1.0 + target))
            return false;
    if (detail::eh_slack(csi, s, alpha, p_t, p_req) >= target)
        return true;

    const int n = 2 * M;
    double prev = detail::eh_slack(csi, s, alpha, p_t, p_req);
    for (int round = 0; round < max_rounds; ++round)
    {
        numerics::ConcaveProgram prog;
        prog.n = n + 1;
        prog.linear = Eigen::VectorXd::Zero(n + 1);
        prog.linear(n) = 1.0;
        prog.balls = detail::ap_balls(M, K);
        const CVec s0 = s * (1.0 - 1e-6);
        Eigen::VectorXd x0(n + 1);
        x0.head(n) = numerics::lift(s0);
        double zmin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k)
        {
            numerics::AffineConstraint r = detail::eh_row(csi, k, s, alpha(k), p_t, p_req);
            numerics::AffineConstraint row;
            row.g.resize(n + 1);
            row.g.head(n) = r.g;
            row.g(n) = 1.0;
            row.h = r.h;
            zmin = std::min(zmin, row.h - r.g.dot(x0.head(n)));
            prog.affine.push_back(row);
        }
        numerics::AffineConstraint cap;
        cap.g = Eigen::VectorXd::Zero(n + 1);
        cap.g(n) = 1.0;
        cap.h = 2.0 * target;
        prog.affine.push_back(cap);
        x0(n) = std::min(zmin, target) - 1.0;
        numerics::ConcaveOptions opt;
        opt.tol = 1e-8;
        const auto res = numerics::solve_concave(prog, x0, opt);
        s = numerics::unlift(res.x.head(n));
        const double now = detail::eh_slack(csi, s, alpha, p_t, p_req);
        if (now >= target)
            return true;
        if (now - prev < 1e-9 * std::max(1.0, std::abs(prev)))
            return false;
        prev = now;
    }
    return false;
}

/// Fractional-programming beamforming in the beam space s (w_i = s / K).
///
/// The rate bound and the EH powers depend on w only through s = sum_i w_i,
/// and the per-AP constraint on w maps to |s_m|^2 <= K, so the concave
/// subproblem is solved over the 2M reals of s.
inline BeamformingResult solve_beamforming(const CsiView& csi, const CMat& U, const Eigen::VectorXd& alpha,
                                           double p_t, double p_req, double psi, const CVec& s_init,
                                           const BeamformingOptions& opt = {})
{
    const int M = csi.num_aps();
    const int K = csi.num_tags();
    BeamformingResult out;
    out.s = s_init;
    if (detail::eh_slack(csi, out.s, alpha, p_t, p_req) < 0.0 && !restore_eh_feasibility(csi, out.s, alpha, p_t, p_req))
    {
        out.feasible = false;
        return out;
    }

    const InteractionVectors a = interaction_vectors(csi, U);
    const Eigen::VectorXd sigma_w2 = detail::combiner_noise(csi, U);
    const double w_log = psi / std::numbers::ln2;
    double obj = detail::objective_at(csi, out.s, U, alpha, p_t, psi);
    out.trace.push_back(obj);

    for (int it = 0; it < opt.max_iters; ++it)
    {
        const InteractionVectors ac = cophase(a, out.s);
        const Eigen::VectorXd lam = update_lambda(out.s, ac, alpha, p_t, sigma_w2);

        numerics::ConcaveProgram prog;
        prog.n = 2 * M;
        for (int k = 0; k < K; ++k)
        {
            numerics::LogQuadPiece pc;
            pc.weight = w_log;
            pc.constant = 1.0 - lam(k) * lam(k) * sigma_w2(k);
            pc.linear = lam(k) * std::sqrt(alpha(k) * p_t) * numerics::real_part_row(ac[k][k]);
            pc.curvature = Eigen::MatrixXd::Zero(2 * M, 2 * M);
            for (int j = 0; j < K; ++j)
                if (j != k)
                    pc.curvature += lam(k) * lam(k) * p_t * alpha(j) * numerics::lifted_outer(a[k][j]);
            prog.pieces.push_back(std::move(pc));
        }
        prog.balls = detail::ap_balls(M, K);
        double eh_s = std::numeric_limits<double>::infinity();
        double margin = eh_margin;
        if (p_req > 0.0)
        {
            eh_s = detail::eh_slack(csi, out.s, alpha, p_t, p_req);
            // A start closer to the threshold than the margin gets a halved margin.
            margin = std::min(eh_margin, 0.5 * eh_s);
            for (int k = 0; k < K; ++k)
                prog.affine.push_back(detail::eh_row(csi, k, out.s, alpha(k), p_t, p_req, margin));
        }

        // Strictly interior start: shrink toward the origin, which keeps the
        // balls and loses at most 2 eps of the linearized EH margin.
        double shrink = 1e-7;
        if (std::isfinite(eh_s))
            shrink = std::min(shrink, std::max(0.0, eh_s - margin) / (4.0 * (1.0 + eh_s)));
        Eigen::VectorXd x0 = numerics::lift(out.s * (1.0 - shrink));
        if (!(prog.min_slack(x0) > 0.0))
            break;

        numerics::ConcaveResult res;
        try
        {
            res = numerics::solve_concave(prog, x0, opt.solver);
        }
        catch (const numerics::infeasible_start&)
        {
            break;
        }
        CVec s_new = numerics::unlift(res.x);
        // The linearization is a minorant, so true EH holds; guard against round-off.
        for (int bt = 0; bt < 40 && detail::eh_slack(csi, s_new, alpha, p_t, p_req) < 0.0; ++bt)
            s_new = 0.5 * (s_new + out.s);
        const double obj_new = detail::objective_at(csi, s_new, U, alpha, p_t, psi);
        ++out.iterations;
        if (!(obj_new >= obj))
            break;
        out.s = s_new;
        const double inc = (obj_new - obj) / std::max(std::abs(obj), 1e-300);
        obj = obj_new;
        out.trace.push_back(obj);
        if (inc < opt.eps)
            break;
    }
    return out;
}

/// Runs solve_beamforming from s_init, from the equal-power beam matched to
/// each tag's own interaction vector, and from `random_starts` random-phase
/// beams; keeps the best feasible result.
inline BeamformingResult solve_beamforming_multistart(const CsiView& csi, const CMat& U, const Eigen::VectorXd& alpha,
                                                      double p_t, double p_req, double psi, const CVec& s_init,
                                                      const BeamformingOptions& opt = {})
{
    const int M = csi.num_aps();
    const int K = csi.num_tags();
    const double amp = std::sqrt(static_cast<double>(K));
    std::vector<CVec> starts{s_init};
    const InteractionVectors a = interaction_vectors(csi, U);
    for (int k = 0; k < K; ++k)
    {
        CVec c(M);
        for (int m = 0; m < M; ++m)
            c(m) = std::polar(amp, std::arg(a[k][k](m)));
        starts.push_back(c);
    }
    Rng rng(opt.start_seed);
    for (int t = 0; t < opt.random_starts; ++t)
    {
        CVec c(M);
        for (int m = 0; m < M; ++m)
            c(m) = std::polar(amp, 2.0 * std::numbers::pi * rng.uniform());
        starts.push_back(c);
    }

    BeamformingResult best;
    double best_obj = -std::numeric_limits<double>::infinity();
    for (const CVec& c : starts)
    {
        BeamformingResult r = solve_beamforming(csi, U, alpha, p_t, p_req, psi, c, opt);
        if (!r.feasible)
            continue;
        const double o = detail::objective_at(csi, r.s, U, alpha, p_t, psi);
        if (o > best_obj)
        {
            best_obj = o;
            best = std::move(r);
        }
    }
    if (!std::isfinite(best_obj))
    {
        best.s = s_init;
        best.feasible = false;
    }
    return best;
}

} // namespace bibc

#endif
