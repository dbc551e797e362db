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

#include <catch2/catch_amalgamated.hpp>

#include "bibc/harness/calibration.hpp"
#include "fixtures.hpp"

using namespace bibc;
using Catch::Approx;

TEST_CASE("build_pilot_book - K=1, tau=2")
{
    const PilotBook pb = build_pilot_book(1, 2);
    CHECK(std::abs(pb.X(0, 0) - cd(1, 0)) < 1e-15);
    CHECK(std::abs(pb.X(0, 1) - cd(1, 0)) < 1e-15);
    CHECK(std::abs(pb.X(1, 0) - cd(1, 0)) < 1e-15);
    CHECK(std::abs(pb.X(1, 1) - cd(-1, 0)) < 1e-15);
    CHECK((pb.X * pb.X.adjoint() - 2.0 * CMat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("build_pilot_book - orthogonality and unit modulus")
{
    for (int K = 0; K <= 6; ++K)
        for (int tau = K + 1; tau <= K + 8; ++tau)
        {
            const PilotBook pb = build_pilot_book(K, tau);
            const CMat G = pb.X * pb.X.adjoint();
            CHECK((G - tau * CMat::Identity(K + 1, K + 1)).norm() <= 1e-12 * tau);
            CHECK((pb.X.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
            CHECK((pb.s.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
            CHECK((pb.X.row(0).array() - cd(1, 0)).abs().maxCoeff() < 1e-15);
        }
    const PilotBook pb = build_pilot_book(3, 5);
    CHECK((pb.X * pb.X.adjoint() - 5.0 * CMat::Identity(4, 4)).norm() <= 1e-12);
    CHECK_THROWS_AS(build_pilot_book(3, 3), config_error);
}

TEST_CASE("synthesize_reader_rx - noiseless single path")
{
    const PilotBook pb = build_pilot_book(0, 3);
    CMat H(1, 1);
    H(0, 0) = cd(0.3, -0.7);
    Rng r(1);
    const CMat Y = synthesize_reader_rx(H, pb, 4.0, 0.0, r);
    for (int n = 0; n < 3; ++n)
        CHECK(std::abs(Y(0, n) - 2.0 * H(0, 0) * pb.s(n)) < 1e-15);
}

TEST_CASE("synthesize_reader_rx - hand fixture L=2, K=1, tau=2")
{
    const PilotBook pb = build_pilot_book(1, 2);
    CMat H(2, 2);
    H << cd(1, 0), cd(0, 1), cd(2, -1), cd(-1, 0);
    Rng r(1);
    const CMat Y = synthesize_reader_rx(H, pb, 1.0, 0.0, r);
    // Columns are H * [1,1]^T and H * [1,-1]^T.
    CHECK(std::abs(Y(0, 0) - cd(1, 1)) < 1e-15);
    CHECK(std::abs(Y(0, 1) - cd(1, -1)) < 1e-15);
    CHECK(std::abs(Y(1, 0) - cd(1, -1)) < 1e-15);
    CHECK(std::abs(Y(1, 1) - cd(3, -1)) < 1e-15);
}

TEST_CASE("synthesize_reader_rx - noise energy")
{
    const PilotBook pb = build_pilot_book(2, 5);
    const CMat H = CMat::Zero(3, 3);
    Rng r(2);
    double acc = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        acc += synthesize_reader_rx(H, pb, 1.0, 0.5, r).squaredNorm();
    CHECK(acc / trials == Approx(3 * 5 * 0.5).epsilon(0.03));
}

TEST_CASE("despread - noiseless identity and noise scaling")
{
    Rng r(3);
    const int K = 2;
    const PilotBook pb = build_pilot_book(K, 4);
    const CMat H = fixture::random_cmat(r, 3, K + 1);
    const CMat Yb = despread(synthesize_reader_rx(H, pb, 2.0, 0.0, r), pb);
    CHECK((Yb / std::sqrt(2.0) - H).norm() <= 1e-12 * H.norm());

    auto noise_var = [&](int tau) {
        const PilotBook p = build_pilot_book(K, tau);
        const CMat Z = CMat::Zero(3, K + 1);
        double acc = 0.0;
        const int trials = 10000;
        for (int t = 0; t < trials; ++t)
            acc += despread(synthesize_reader_rx(Z, p, 1.0, 1.0, r), p).squaredNorm();
        return acc / (trials * 3.0 * (K + 1));
    };
    const double v3 = noise_var(3);
    const double v6 = noise_var(6);
    CHECK(v3 == Approx(1.0 / 3.0).epsilon(0.03));
    CHECK(v6 == Approx(1.0 / 6.0).epsilon(0.03));
    CHECK(v3 / v6 == Approx(2.0).epsilon(0.05));
}

TEST_CASE("estimate_ls - noiseless recovery and direct pseudo-inverse agreement")
{
    Rng r(4);
    for (int K = 1; K <= 4; ++K)
    {
        const PilotBook pb = build_pilot_book(K, K + 2);
        const CMat H = fixture::random_cmat(r, 4, K + 1);
        const CMat Y = synthesize_reader_rx(H, pb, 3.0, 0.0, r);
        const CMat Hh = estimate_ls(Y, pb, 3.0);
        CHECK((Hh - H).norm() <= 1e-10 * H.norm());

        const CMat Yn = synthesize_reader_rx(H, pb, 3.0, 0.1, r);
        const CMat Xb = std::sqrt(3.0) * pb.X;
        const CMat pinv = Xb.adjoint() * (Xb * Xb.adjoint()).inverse();
        const CMat direct = Yn * pb.s.conjugate().asDiagonal() * pinv;
        const CMat via = despread(Yn, pb) / std::sqrt(3.0);
        CHECK((estimate_ls(Yn, pb, 3.0) - direct).norm() <= 1e-10 * direct.norm());
        CHECK((via - direct).norm() <= 1e-10 * direct.norm());
    }
}

TEST_CASE("estimate_ls - per-entry error variance")
{
    Rng r(5);
    const int K = 3, tau = 5, L = 2;
    const double p_p = 2.0, s2 = 0.3;
    const PilotBook pb = build_pilot_book(K, tau);
    const CMat H = fixture::random_cmat(r, L, K + 1);
    const int trials = 10000;
    double acc = 0.0;
    cd bias = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        const CMat E = estimate_ls(synthesize_reader_rx(H, pb, p_p, s2, r), pb, p_p) - H;
        acc += E.squaredNorm();
        bias += E(1, 2);
    }
    CHECK(acc / (trials * L * (K + 1)) == Approx(s2 / (tau * p_p)).epsilon(0.03));
    CHECK(std::abs(bias / static_cast<double>(trials)) < 5.0 * std::sqrt(s2 / (tau * p_p) / trials));
}

TEST_CASE("estimate_ls - direct-column NMSE")
{
    Rng r(6);
    const int K = 2, tau = 4, L = 4;
    const double p_p = 1.0, s2 = 0.05, zeta = 0.4;
    const PilotBook pb = build_pilot_book(K, tau);
    std::vector<CVec> truth, est;
    for (int t = 0; t < 10000; ++t)
    {
        const CMat H = fixture::random_cmat(r, L, K + 1, zeta);
        const CMat Hh = estimate_ls(synthesize_reader_rx(H, pb, p_p, s2, r), pb, p_p);
        truth.push_back(H.col(0));
        est.push_back(Hh.col(0));
    }
    CHECK(nmse(truth, est) == Approx(s2 / (tau * p_p * zeta)).epsilon(0.05));
}

TEST_CASE("mmse_gamma - scalar fixture")
{
    SlotStatistics st;
    st.zeta = Eigen::VectorXd::Ones(2);
    st.alpha = Eigen::VectorXd::Constant(2, 0.6);
    const Eigen::VectorXd g = mmse_gamma(st, 1.0, 1.0);
    CHECK(g(1) == Approx(0.6 / 1.6).epsilon(1e-14));
}

TEST_CASE("estimate_mmse - limits and errors")
{
    Rng r(7);
    const PilotBook pb = build_pilot_book(1, 2);
    SlotStatistics st;
    st.zeta = Eigen::VectorXd::Constant(2, 0.5);
    st.alpha = Eigen::VectorXd::Ones(2);
    const CMat H = fixture::random_cmat(r, 2, 2, 0.5);
    const CMat Yb = despread(synthesize_reader_rx(H, pb, 1.0, 0.0, r), pb);
    CHECK((estimate_mmse(Yb, st, 1.0, 1e-14) - H).norm() < 1e-10);
    const CMat Yb0 = despread(synthesize_reader_rx(H, pb, 1e-16, 1.0, r), pb);
    CHECK(estimate_mmse(Yb0, st, 1e-16, 0.5).norm() < 1e-6);
    SlotStatistics bad;
    bad.zeta = Eigen::VectorXd::Ones(1);
    bad.alpha = Eigen::VectorXd::Ones(1);
    CHECK_THROWS(estimate_mmse(Yb, bad, 1.0, 1.0));
}

TEST_CASE("estimate_mmse - never worse than LS per column")
{
    Rng r(8);
    const int K = 2, tau = 3, L = 2;
    const PilotBook pb = build_pilot_book(K, tau);
    SlotStatistics st;
    st.zeta = (Eigen::VectorXd(3) << 1.0, 0.2, 0.05).finished();
    st.alpha = (Eigen::VectorXd(3) << 1.0, 0.6, 0.6).finished();
    for (double p_p : {0.1, 1.0, 10.0})
    {
        const double s2 = 1.0;
        Eigen::VectorXd e_ls = Eigen::VectorXd::Zero(3), e_mm = Eigen::VectorXd::Zero(3);
        for (int t = 0; t < 10000; ++t)
        {
            CMat H(L, K + 1);
            for (int k = 0; k <= K; ++k)
                H.col(k) = fixture::random_cvec(r, L, st.zeta(k) * st.alpha(k));
            const CMat Y = synthesize_reader_rx(H, pb, p_p, s2, r);
            const CMat hl = estimate_ls(Y, pb, p_p);
            const CMat hm = estimate_mmse(despread(Y, pb), st, p_p, s2 / tau);
            for (int k = 0; k <= K; ++k)
            {
                e_ls(k) += (hl.col(k) - H.col(k)).squaredNorm();
                e_mm(k) += (hm.col(k) - H.col(k)).squaredNorm();
            }
        }
        for (int k = 0; k <= K; ++k)
            CHECK(e_mm(k) < e_ls(k));
    }
}

TEST_CASE("estimate_forward_ls - noiseless cases")
{
    Rng r(9);
    const PilotBook pb = build_pilot_book(2, 3);
    const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(2, 0.6);
    CVec f(2);
    f << cd(0.7, 0.0), cd(1.3, 0.0);
    ForwardEstimate fe = estimate_forward_ls(pb, f, alpha, 2.0, 0.0, r);
    CHECK((fe.f_hat - f).norm() < 1e-12);
    f << std::polar(0.8, 2.5), std::polar(1.1, -1.9);
    fe = estimate_forward_ls(pb, f, alpha, 2.0, 0.0, r);
    for (int k = 0; k < 2; ++k)
    {
        CHECK(std::abs(std::abs(fe.f_hat(k)) - std::abs(f(k))) < 1e-12);
        CHECK(std::min(std::abs(fe.f_hat(k) - f(k)), std::abs(fe.f_hat(k) + f(k))) < 1e-12);
        CHECK(std::abs(fe.fbar_hat(k) - f(k) * f(k)) < 1e-12);
    }
}

TEST_CASE("estimate_forward_ls - squared-channel NMSE")
{
    Rng r(10);
    const int K = 2, tau = 4;
    const PilotBook pb = build_pilot_book(K, tau);
    const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(K, 0.6);
    CVec f(K);
    f << std::polar(0.9, 0.3), std::polar(0.5, -2.0);
    const double p_p = 3.0, s2 = 0.02;
    double err = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        err += std::norm(estimate_forward_ls(pb, f, alpha, p_p, s2, r).fbar_hat(1) - f(1) * f(1));
    const double expect = s2 / (tau * p_p * alpha(1)) / std::norm(f(1) * f(1));
    CHECK(err / trials / std::norm(f(1) * f(1)) == Approx(expect).epsilon(0.05));
}

TEST_CASE("nmse - trivial cases")
{
    Rng r(11);
    std::vector<CVec> t{fixture::random_cvec(r, 4), fixture::random_cvec(r, 4)};
    std::vector<CVec> z{CVec::Zero(4), CVec::Zero(4)};
    CHECK(nmse(t, t) == 0.0);
    CHECK(nmse(t, z) == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS(nmse({}, {}));
    CHECK_THROWS(nmse(t, {z[0]}));
}

TEST_CASE("nmse - additive unit noise")
{
    Rng r(12);
    std::vector<CVec> t, e;
    for (int i = 0; i < 20000; ++i)
    {
        CVec v(1);
        v(0) = std::polar(1.0, 2.0 * std::numbers::pi * r.uniform());
        t.push_back(v);
        e.push_back(v + fixture::random_cvec(r, 1, 0.25));
    }
    CHECK(nmse(t, e) == Approx(0.25).epsilon(0.03));
}

TEST_CASE("estimate_channels - independent slot noise and de-scaling")
{
    SystemConfig cfg = calibrated_config();
    cfg.num_aps = 4;
    const NetworkGeometry geo = place_network(cfg, 13, 0);
    const ChannelRealization ch = draw_channels(geo, cfg, 13, 0);
    const ChannelEstimates est = estimate_channels(ch, geo, cfg, 13, 0);
    REQUIRE(est.H_hat.size() == 4u);
    // Slot noise differs across slots.
    const CMat e0 = est.H_hat[0] - training_matrix(ch, 0, est.alpha_train);
    const CMat e1 = est.H_hat[1] - training_matrix(ch, 1, est.alpha_train);
    CHECK((e0 - e1).norm() > 0.0);
    CHECK((est.cascaded(1, 2) - est.H_hat[2].col(2) / std::sqrt(0.6)).norm() == 0.0);

    SystemConfig noiseless = cfg;
    noiseless.pilot_power_dbm = 300.0;
    const ChannelEstimates clean = estimate_channels(ch, geo, noiseless, 13, 0);
    for (int m = 0; m < 4; ++m)
    {
        CHECK((clean.direct(m) - ch.H0.col(m)).norm() <= 1e-8 * ch.H0.col(m).norm());
        for (int k = 0; k < cfg.num_tags; ++k)
            CHECK((clean.cascaded(k, m) - ch.cascaded(k, m)).norm() <= 1e-8 * ch.cascaded(k, m).norm());
    }
    const ChannelEstimates mm = estimate_channels(ch, geo, cfg, 13, 0, Estimator::mmse);
    CHECK(mm.gamma.size() == 4u);
}
