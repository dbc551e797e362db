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

#ifndef BIBC_NUMERICS_LP_HPP
#define BIBC_NUMERICS_LP_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bibc::numerics
{

enum class LPStatus
{
    optimal,
    infeasible,
    unbounded
};

struct LPResult
{
    Eigen::VectorXd x;
    double value = 0.0;
    LPStatus status = LPStatus::optimal;
};

namespace detail
{

class Tableau
{
public:
    // Columns: x (n), auxiliary x0, slacks (m), rhs.
    Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
        : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols()))
    {
        T_ = Eigen::MatrixXd::Zero(m_, n_ + 1 + m_ + 1);
        T_.leftCols(n_) = A;
        T_.col(n_).setConstant(-1.0);
        for (int i = 0; i < m_; ++i)
            T_(i, n_ + 1 + i) = 1.0;
        T_.col(rhs()) = b;
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i)
            basis_[i] = n_ + 1 + i;
        allowed_.assign(n_ + 1 + m_, true);
    }

    int rhs() const { return n_ + 1 + m_; }
    int aux() const { return n_; }

    void pivot(int r, int c)
    {
        T_.row(r) /= T_(r, c);
        for (int i = 0; i < m_; ++i)
            if (i != r && T_(i, c) != 0.0)
                T_.row(i) -= T_(i, c) * T_.row(r);
        basis_[r] = c;
    }

    // Maximizes c^T (all columns). Bland's rule. Returns false if unbounded.
    bool simplex(const Eigen::VectorXd& c)
    {
        constexpr double eps = 1e-11;
        for (int iter = 0; iter < 10000; ++iter)
        {
            int enter = -1;
            for (int j = 0; j < rhs(); ++j)
            {
                if (!allowed_[j] || is_basic(j))
                    continue;
                double rc = c(j);
                for (int i = 0; i < m_; ++i)
                    rc -= c(basis_[i]) * T_(i, j);
                if (rc > eps)
                {
                    enter = j;
                    break;
                }
            }
            if (enter < 0)
                return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i)
            {
                if (T_(i, enter) > eps)
                {
                    const double ratio = T_(i, rhs()) / T_(i, enter);
                    if (ratio < best - 1e-14 ||
                        (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave]))
                    {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
        return true;
    }

    bool is_basic(int j) const
    {
        for (int v : basis_)
            if (v == j)
                return true;
        return false;
    }

    double value_of(int j) const
    {
        for (int i = 0; i < m_; ++i)
            if (basis_[i] == j)
                return T_(i, rhs());
        return 0.0;
    }

    Eigen::MatrixXd T_;
    std::vector<int> basis_;
    std::vector<bool> allowed_;
    int m_;
    int n_;
};

} // namespace detail

/// maximize c^T x subject to A x <= b, x >= 0 (two-phase dense simplex).
inline LPResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
    if (A.cols() != c.size() || A.rows() != b.size())
        throw std::invalid_argument("solve_lp: dimension mismatch");
    const int n = static_cast<int>(A.cols());
    const int m = static_cast<int>(A.rows());
    detail::Tableau tab(A, b);
    const int ncols = tab.rhs();

    LPResult res;
    if (m > 0 && b.minCoeff() < 0.0)
    {
        int r = 0;
        b.minCoeff(&r);
        tab.pivot(r, tab.aux());
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(ncols);
        c1(tab.aux()) = -1.0;
        tab.simplex(c1);
        if (tab.value_of(tab.aux()) > 1e-9)
        {
            res.status = LPStatus::infeasible;
            res.x = Eigen::VectorXd::Zero(n);
            return res;
        }
        for (int i = 0; i < m; ++i)
        {
            if (tab.basis_[i] != tab.aux())
                continue;
            for (int j = 0; j < ncols; ++j)
                if (j != tab.aux() && std::abs(tab.T_(i, j)) > 1e-9)
                {
                    tab.pivot(i, j);
                    break;
                }
        }
    }
    tab.allowed_[tab.aux()] = false;

    Eigen::VectorXd c2 = Eigen::VectorXd::Zero(ncols);
    c2.head(n) = c;
    if (!tab.simplex(c2))
    {
        res.status = LPStatus::unbounded;
        res.x = Eigen::VectorXd::Zero(n);
        return res;
    }
    res.x.resize(n);
    for (int j = 0; j < n; ++j)
        res.x(j) = tab.value_of(j);
    res.value = c.dot(res.x);
    return res;
}

/// Slack-maximization problem over a box.
///
/// Slack rows read A x <= b with slack (b - A x)_i / weights_i. Hard rows are
/// enforced without entering the objective. With box_in_slack the distances
/// to both box faces count as slacks too.
struct LPSlackProblem
{
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd weights;
    Eigen::MatrixXd A_hard;
    Eigen::VectorXd b_hard;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    bool box_in_slack = true;
};

struct LPSlackResult
{
    Eigen::VectorXd x;
    double min_slack = 0.0;
    LPStatus status = LPStatus::optimal;
};

/// maximize z subject to every normalized slack >= z.
inline LPSlackResult solve_lp_slack(const LPSlackProblem& p)
{
    const int n = static_cast<int>(p.lower.size());
    if (p.upper.size() != n || (p.A.rows() && p.A.cols() != n) || p.A.rows() != p.b.size() ||
        (p.A_hard.rows() && p.A_hard.cols() != n) || p.A_hard.rows() != p.b_hard.size())
        throw std::invalid_argument("solve_lp_slack: dimension mismatch");
    const int ns = static_cast<int>(p.A.rows());
    Eigen::VectorXd w = p.weights.size() ? p.weights : Eigen::VectorXd::Ones(ns);
    if (w.size() != ns || (ns && w.minCoeff() <= 0.0))
        throw std::invalid_argument("solve_lp_slack: weights must be positive");
    if ((p.upper - p.lower).minCoeff() < 0.0 || !p.lower.allFinite() || !p.upper.allFinite())
        throw std::invalid_argument("solve_lp_slack: bounds must be finite and ordered");

    // Variables: y = x - lower (n), z+ , z-.
    const int nh = static_cast<int>(p.A_hard.rows());
    const int nbox = p.box_in_slack ? 2 * n : 0;
    const int rows = ns + nh + n + nbox + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n + 2);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    int r = 0;
    for (int i = 0; i < ns; ++i, ++r)
    {
        A.row(r).head(n) = p.A.row(i);
        A(r, n) = w(i);
        A(r, n + 1) = -w(i);
        b(r) = p.b(i) - p.A.row(i).dot(p.lower);
    }
    for (int i = 0; i < nh; ++i, ++r)
    {
        A.row(r).head(n) = p.A_hard.row(i);
        b(r) = p.b_hard(i) - p.A_hard.row(i).dot(p.lower);
    }
    for (int j = 0; j < n; ++j, ++r)
    {
        A(r, j) = 1.0;
        b(r) = p.upper(j) - p.lower(j);
    }
    if (p.box_in_slack)
    {
        for (int j = 0; j < n; ++j, ++r)
        {
            A(r, j) = -1.0;
            A(r, n) = 1.0;
            A(r, n + 1) = -1.0;
        }
        for (int j = 0; j < n; ++j, ++r)
        {
            A(r, j) = 1.0;
            A(r, n) = 1.0;
            A(r, n + 1) = -1.0;
            b(r) = p.upper(j) - p.lower(j);
        }
    }
    A(r, n) = 1.0; // cap z+ when nothing bounds the slack
    b(r) = 1e9;

    Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 2);
    c(n) = 1.0;
    c(n + 1) = -1.0;
    const LPResult lp = solve_lp(c, A, b);

    LPSlackResult out;
    out.x = p.lower;
    if (lp.status != LPStatus::optimal)
    {
        out.status = LPStatus::infeasible;
        out.min_slack = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.x = p.lower + lp.x.head(n);
    out.x = out.x.cwiseMax(p.lower).cwiseMin(p.upper);
    out.min_slack = lp.x(n) - lp.x(n + 1);
    if (out.min_slack < -1e-12)
        out.status = LPStatus::infeasible;
    return out;
}

} // namespace bibc::numerics

#endif
