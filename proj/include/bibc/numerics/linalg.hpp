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

#ifndef BIBC_NUMERICS_LINALG_HPP
#define BIBC_NUMERICS_LINALG_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace bibc::numerics
{

class not_positive_definite : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Solves A x = b for Hermitian positive definite A by Cholesky.
inline Eigen::VectorXcd hermitian_rank1_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b)
{
    if (A.rows() != A.cols() || A.rows() != b.size())
        throw std::invalid_argument("hermitian_rank1_solve: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw not_positive_definite("hermitian_rank1_solve: matrix is not positive definite");
    return llt.solve(b);
}

// Complex <-> real lifting. Interleaved: x = [Re z0, Im z0, Re z1, Im z1, ...].

inline Eigen::VectorXd lift(const Eigen::VectorXcd& z)
{
    Eigen::VectorXd x(2 * z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
    {
        x(2 * i) = z(i).real();
        x(2 * i + 1) = z(i).imag();
    }
    return x;
}

inline Eigen::VectorXcd unlift(const Eigen::VectorXd& x)
{
    Eigen::VectorXcd z(x.size() / 2);
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z(i) = {x(2 * i), x(2 * i + 1)};
    return z;
}

/// Real row r with r . lift(z) = Re{a^H z}.
inline Eigen::VectorXd real_part_row(const Eigen::VectorXcd& a)
{
    return lift(a);
}

/// Real row r with r . lift(z) = Im{a^H z}.
inline Eigen::VectorXd imag_part_row(const Eigen::VectorXcd& a)
{
    Eigen::VectorXd r(2 * a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        r(2 * i) = -a(i).imag();
        r(2 * i + 1) = a(i).real();
    }
    return r;
}

/// Real symmetric Q with lift(z)^T Q lift(z) = |a^H z|^2.
inline Eigen::MatrixXd lifted_outer(const Eigen::VectorXcd& a)
{
    const Eigen::VectorXd r1 = real_part_row(a);
    const Eigen::VectorXd r2 = imag_part_row(a);
    return r1 * r1.transpose() + r2 * r2.transpose();
}

} // namespace bibc::numerics

#endif
