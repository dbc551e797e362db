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

#ifndef BIBC_NUMERICS_CONCAVE_HPP
#define BIBC_NUMERICS_CONCAVE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bibc::numerics
{

class infeasible_start : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// weight * log(q(x)), q(x) = constant + 2 linear^T x - x^T curvature x.
struct LogQuadPiece
{
    double weight = 1.0;
    double constant = 0.0;
    Eigen::VectorXd linear;
    Eigen::MatrixXd curvature; // symmetric PSD
};

/// sum_{i in indices} x_i^2 <= radius_sq
struct BallConstraint
{
    std::vector<int> indices;
    double radius_sq = 1.0;
};

/// x^T P x + 2 q^T x <= r, P symmetric PSD.
struct QuadConstraint
{
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    double r = 0.0;
};

/// g^T x <= h
struct AffineConstraint
{
    Eigen::VectorXd g;
    double h = 0.0;
};

/// maximize linear^T x + sum of log-quadratic pieces subject to convex constraints.
struct ConcaveProgram
{
    int n = 0;
    Eigen::VectorXd linear; // empty means zero
    std::vector<LogQuadPiece> pieces;
    std::vector<BallConstraint> balls;
    std::vector<QuadConstraint> quads;
    std::vector<AffineConstraint> affine;

    int num_constraints() const
    {
        return static_cast<int>(balls.size() + quads.size() + affine.size());
    }

    double objective(const Eigen::VectorXd& x) const
    {
        double f = linear.size() ? linear.dot(x) : 0.0;
        for (const auto& p : pieces)
        {
            const double q = piece_value(p, x);
            if (!(q > 0.0))
                return -std::numeric_limits<double>::infinity();
            f += p.weight * std::log(q);
        }
        return f;
    }

    /// Smallest constraint slack (positive means strictly feasible).
    double min_slack(const Eigen::VectorXd& x) const
    {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& b : balls)
        {
            double acc = 0.0;
            for (int i : b.indices)
                acc += x(i) * x(i);
            s = std::min(s, b.radius_sq - acc);
        }
        for (const auto& c : quads)
            s = std::min(s, c.r - x.dot(c.P * x) - 2.0 * c.q.dot(x));
        for (const auto& a : affine)
            s = std::min(s, a.h - a.g.dot(x));
        return s;
    }

    static double piece_value(const LogQuadPiece& p, const Eigen::VectorXd& x)
    {
        return p.constant + 2.0 * p.linear.dot(x) - x.dot(p.curvature * x);
    }
};

enum class SolveStatus
{
    converged,
    iteration_cap
};

struct ConcaveOptions
{
    double tol = 1e-9;           // duality-gap target m / t
    double newton_tol = 1e-10;   // Newton decrement^2 / 2 per centering
    double t0 = 1.0;
    double mu = 10.0;
    int max_newton = 500;        // total Newton steps
};

struct ConcaveResult
{
    Eigen::VectorXd x;
    double objective = 0.0;
    SolveStatus status = SolveStatus::converged;
    int newton_steps = 0;
    double gap = 0.0;
    std::vector<double> path_objectives; // objective after each centering
};

namespace detail
{

struct BarrierEval
{
    double value;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

// t * objective + sum log(slack); returns false if x is not strictly inside.
inline bool barrier_value(const ConcaveProgram& p, const Eigen::VectorXd& x, double t, double& out)
{
    double v = p.linear.size() ? t * p.linear.dot(x) : 0.0;
    for (const auto& pc : p.pieces)
    {
        const double q = ConcaveProgram::piece_value(pc, x);
        if (!(q > 0.0))
            return false;
        v += t * pc.weight * std::log(q);
    }
    for (const auto& b : p.balls)
    {
        double acc = 0.0;
        for (int i : b.indices)
            acc += x(i) * x(i);
        const double s = b.radius_sq - acc;
        if (!(s > 0.0))
            return false;
        v += std::log(s);
    }
    for (const auto& c : p.quads)
    {
        const double s = c.r - x.dot(c.P * x) - 2.0 * c.q.dot(x);
        if (!(s > 0.0))
            return false;
        v += std::log(s);
    }
    for (const auto& a : p.affine)
    {
        const double s = a.h - a.g.dot(x);
        if (!(s > 0.0))
            return false;
        v += std::log(s);
    }
    out = v;
    return true;
}

inline BarrierEval barrier_derivatives(const ConcaveProgram& p, const Eigen::VectorXd& x, double t)
{
    const int n = p.n;
    BarrierEval e{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    barrier_value(p, x, t, e.value);
    if (p.linear.size())
        e.grad += t * p.linear;
    for (const auto& pc : p.pieces)
    {
        const Eigen::VectorXd Qx = pc.curvature * x;
        const double q = pc.constant + 2.0 * pc.linear.dot(x) - x.dot(Qx);
        const Eigen::VectorXd dq = 2.0 * (pc.linear - Qx);
        const double w = t * pc.weight;
        e.grad += (w / q) * dq;
        e.hess.noalias() -= (2.0 * w / q) * pc.curvature;
        e.hess.noalias() -= (w / (q * q)) * dq * dq.transpose();
    }
    for (const auto& b : p.balls)
    {
        double acc = 0.0;
        for (int i : b.indices)
            acc += x(i) * x(i);
        const double s = b.radius_sq - acc;
        for (int i : b.indices)
        {
            e.grad(i) += -2.0 * x(i) / s;
            e.hess(i, i) += -2.0 / s;
            for (int j : b.indices)
                e.hess(i, j) -= 4.0 * x(i) * x(j) / (s * s);
        }
    }
    for (const auto& c : p.quads)
    {
        const Eigen::VectorXd Px = c.P * x;
        const double s = c.r - x.dot(Px) - 2.0 * c.q.dot(x);
        const Eigen::VectorXd ds = -2.0 * (Px + c.q);
        e.grad += ds / s;
        e.hess.noalias() -= (2.0 / s) * c.P;
        e.hess.noalias() -= ds * ds.transpose() / (s * s);
    }
    for (const auto& a : p.affine)
    {
        const double s = a.h - a.g.dot(x);
        e.grad -= a.g / s;
        e.hess.noalias() -= a.g * a.g.transpose() / (s * s);
    }
    return e;
}

// Solves (-H) d = g with a small diagonal shift if -H is only semidefinite.
inline Eigen::VectorXd newton_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g)
{
    Eigen::MatrixXd A = -H;
    const double scale = std::max(1e-300, A.diagonal().cwiseAbs().maxCoeff());
    double shift = 0.0;
    for (int attempt = 0; attempt < 30; ++attempt)
    {
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success)
            return llt.solve(g);
        shift = shift == 0.0 ? 1e-12 * scale : shift * 10.0;
        A = -H;
        A.diagonal().array() += shift;
    }
    return g / scale;
}

} // namespace detail

/// Log-barrier interior-point method with damped Newton centering.
inline ConcaveResult solve_concave(const ConcaveProgram& prog, const Eigen::VectorXd& start,
                                   const ConcaveOptions& opt = {})
{
    if (start.size() != prog.n)
        throw std::invalid_argument("solve_concave: start has wrong dimension");
    double v0 = 0.0;
    if (!detail::barrier_value(prog, start, 1.0, v0))
        throw infeasible_start("solve_concave: start point is not strictly feasible");

    const int m = prog.num_constraints();
    ConcaveResult res;
    res.x = start;
    double t = m == 0 ? 1.0 : opt.t0;
    int steps = 0;
    bool capped = false;

    while (true)
    {
        // Centering.
        while (true)
        {
            if (steps >= opt.max_newton)
            {
                capped = true;
                break;
            }
            const auto e = detail::barrier_derivatives(prog, res.x, t);
            const Eigen::VectorXd d = detail::newton_direction(e.hess, e.grad);
            const double dec2 = e.grad.dot(d);
            if (!(dec2 > 2.0 * opt.newton_tol * std::max(1.0, t)))
                break;
            double step = 1.0;
            double v = 0.0;
            bool moved = false;
            for (int ls = 0; ls < 80; ++ls)
            {
                const Eigen::VectorXd xn = res.x + step * d;
                if (detail::barrier_value(prog, xn, t, v) && v >= e.value + 0.25 * step * dec2)
                {
                    res.x = xn;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            ++steps;
            if (!moved)
                break;
        }
        res.path_objectives.push_back(prog.objective(res.x));
        if (capped || m == 0 || m / t < opt.tol)
            break;
        t *= opt.mu;
    }
    res.newton_steps = steps;
    res.gap = m == 0 ? 0.0 : m / t;
    res.objective = prog.objective(res.x);
    res.status = capped ? SolveStatus::iteration_cap : SolveStatus::converged;
    return res;
}

} // namespace bibc::numerics

#endif
