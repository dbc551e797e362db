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
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Usage: acceptance [output_dir [id...]]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bibc/harness/calibration.hpp"
#include "bibc/harness/figures.hpp"
#include "bibc/harness/output.hpp"

using namespace bibc;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string num(double v, int prec = 4)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

CVec random_cvec(Rng& r, int n, double var = 1.0)
{
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = r.complex_normal(var);
    return v;
}

CMat random_cmat(Rng& r, int rows, int cols, double var = 1.0)
{
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = r.complex_normal(var);
    return m;
}

CsiView random_csi(Rng& r, int M, int K, int L, double noise)
{
    CsiView c;
    c.forward = random_cmat(r, K, M);
    for (int k = 0; k < K; ++k)
    {
        const CVec g = random_cvec(r, L);
        c.cascaded.push_back(g * c.forward.row(k));
    }
    c.noise_power = noise;
    return c;
}

double mean_of(const std::vector<Aggregate>& agg, Scheme s, double v, const std::string& metric)
{
    for (const auto& a : agg)
        if (a.scheme == to_string(s) && a.sweep_value == v && a.metric == metric)
            return a.mean;
    return std::numeric_limits<double>::quiet_NaN();
}

void save(const ExperimentResult& r, const std::filesystem::path& dir, const std::string& name)
{
    std::filesystem::create_directories(dir);
    std::ofstream s(dir / (name + "_summary.csv"));
    write_summary_csv(s, aggregate(r.records, r.var));
    std::ofstream rec(dir / (name + "_records.csv"));
    write_records_csv(rec, r.records, r.var);
}

// 1 ---------------------------------------------------------------------

Outcome estimation_correctness()
{
    const int K = 3, L = 4, tau = 5;
    const PilotBook pb = build_pilot_book(K, tau);
    Rng r(101);

    double worst_noiseless = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const CMat H = random_cmat(r, L, K + 1);
        const CMat Y = synthesize_reader_rx(H, pb, 0.7, 0.0, r);
        worst_noiseless = std::max(worst_noiseless, (estimate_ls(Y, pb, 0.7) - H).norm() / H.norm());
    }

    const double p_p = 2.0, sigma2 = 1.0;
    const CMat H = random_cmat(r, L, K + 1);
    Eigen::MatrixXd err = Eigen::MatrixXd::Zero(L, K + 1);
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        err += (estimate_ls(synthesize_reader_rx(H, pb, p_p, sigma2, r), pb, p_p) - H).cwiseAbs2();
    err /= trials;
    const double expect = sigma2 / (tau * p_p);
    const double worst_var = (err.array() / expect - 1.0).abs().maxCoeff();

    SlotStatistics st;
    st.zeta = (Eigen::VectorXd(K + 1) << 1.0, 0.3, 0.05, 0.01).finished();
    st.alpha = (Eigen::VectorXd(K + 1) << 1.0, 0.6, 0.6, 0.6).finished();
    bool mmse_ok = true;
    std::string worst_snr;
    for (double snr_db = -20.0; snr_db <= 30.0; snr_db += 5.0)
    {
        const double pp = std::pow(10.0, snr_db / 10.0);
        double e_ls = 0.0, e_mm = 0.0;
        for (int t = 0; t < 2000; ++t)
        {
            CMat Hs(L, K + 1);
            for (int k = 0; k <= K; ++k)
                Hs.col(k) = random_cvec(r, L, st.alpha(k) * st.zeta(k));
            const CMat Y = synthesize_reader_rx(Hs, pb, pp, sigma2, r);
            e_ls += (estimate_ls(Y, pb, pp) - Hs).squaredNorm();
            e_mm += (estimate_mmse(despread(Y, pb), st, pp, sigma2 / tau) - Hs).squaredNorm();
        }
        if (!(e_mm <= e_ls))
        {
            mmse_ok = false;
            worst_snr += num(snr_db) + "dB ";
        }
    }
    Outcome o;
    o.pass = worst_noiseless <= 1e-10 && worst_var <= 0.05 && mmse_ok;
    o.detail = "noiseless rel err " + num(worst_noiseless) + " (<=1e-10), worst per-entry variance deviation " +
               num(100.0 * worst_var, 3) + "% (<=5%), MMSE<=LS at all SNRs: " + (mmse_ok ? "yes" : "no " + worst_snr);
    return o;
}

// 2 ---------------------------------------------------------------------

Outcome nmse_shape(const std::filesystem::path& dir)
{
    NmseSweepSpec spec = figure4_spec(calibrated_config());
    spec.seed = 4;
    const std::vector<NmsePoint> pts = nmse_sweep(spec);
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / "fig4_nmse.csv");
    write_nmse_csv(os, pts);

    bool ok = true;
    double worst = 0.0;
    for (const std::string kind : {"direct", "cascaded", "forward"})
        for (int tau : spec.taus)
        {
            const double s = loglog_slope(pts, kind, tau);
            worst = std::max(worst, std::abs(s + 1.0));
            ok = ok && std::abs(s + 1.0) <= 0.05;
        }
    const double shift =
        power_for_nmse(pts, "direct", 5, 1e-5) - power_for_nmse(pts, "direct", 11, 1e-5);
    const double expect = 10.0 * std::log10(11.0 / 5.0);
    ok = ok && std::abs(shift - expect) <= 0.5;
    Outcome o;
    o.pass = ok;
    o.detail = "worst |slope+1| " + num(worst) + " (<=0.05), tau 5->11 shift " + num(shift) + " dB (target " +
               num(expect) + " +/- 0.5), p_p for 1e-5 at tau=11: " +
               num(power_for_nmse(pts, "direct", 11, 1e-5)) + " dBm";
    return o;
}

// 3 ---------------------------------------------------------------------

Outcome exact_rate_mc()
{
    const double as[5] = {0.1, 1.0, 5.0, 20.0, 100.0};
    const double bs[5] = {0.0, 0.5, 2.0, 5.0, 10.0};
    Rng r(303);
    double worst = 0.0;
    for (double a : as)
        for (double b : bs)
        {
            double acc = 0.0;
            const int n = 1000000;
            for (int i = 0; i < n; ++i)
            {
                const double x = -std::log(1.0 - r.uniform());
                acc += std::log2(1.0 + a * x / (b * x + 1.0));
            }
            const double mc = acc / n;
            worst = std::max(worst, std::abs(exact_rate(a, b, 1.0) - mc) / mc);
        }
    return {worst <= 0.01, "worst relative gap to 1e6-sample Monte Carlo " + num(100.0 * worst, 3) + "% (<=1%)"};
}

// 4 ---------------------------------------------------------------------

Outcome combiner_optimality()
{
    Rng r(404);
    const int M = 4, K = 3, L = 4;
    int beaten = 0;
    double worst_pi = 0.0;
    for (int inst = 0; inst < 100; ++inst)
    {
        const CsiView csi = random_csi(r, M, K, L, 0.1 + r.uniform());
        CVec s(M);
        for (int m = 0; m < M; ++m)
            s(m) = std::polar(std::sqrt(double(K)), 2.0 * std::numbers::pi * r.uniform());
        Eigen::VectorXd alpha(K);
        for (int k = 0; k < K; ++k)
            alpha(k) = 0.1 + 0.8 * r.uniform();
        const double p = 1.0 + r.uniform();
        const Solution opt{stack_from_beam(s, K), optimal_combiner(csi, s, alpha, p), alpha};
        const Eigen::VectorXd g_opt = sinr_all(csi, opt, p);
        for (int t = 0; t < 1000; ++t)
        {
            Solution rnd = opt;
            rnd.U = random_cmat(r, L, K);
            rnd.U.colwise().normalize();
            const Eigen::VectorXd g = sinr_all(csi, rnd, p);
            if ((g.array() > g_opt.array()).any())
                ++beaten;
        }
        // Power iteration on A^{-1} B for the generalized Rayleigh quotient.
        for (int k = 0; k < K; ++k)
        {
            const CVec b = csi.cascaded[k] * s;
            CMat A = csi.noise_power * CMat::Identity(L, L);
            for (int j = 0; j < K; ++j)
                if (j != k)
                {
                    const CVec bj = csi.cascaded[j] * s;
                    A += alpha(j) * p * bj * bj.adjoint();
                }
            const CMat B = alpha(k) * p * b * b.adjoint();
            const Eigen::LDLT<CMat> ldlt(A);
            CVec v = random_cvec(r, L);
            double lambda = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                v = ldlt.solve(B * v);
                v.normalize();
                lambda = (v.dot(B * v) / v.dot(A * v)).real();
            }
            worst_pi = std::max(worst_pi, std::abs(lambda - g_opt(k)) / g_opt(k));
            worst_pi = std::max(worst_pi, 1.0 - std::abs(normalize_phase(v).dot(opt.U.col(k))));
        }
    }
    return {beaten == 0 && worst_pi <= 1e-8,
            "random combiners beating closed form: " + std::to_string(beaten) +
                " of 300000 (need 0), power-iteration mismatch " + num(worst_pi) + " (<=1e-8)"};
}

// 5 ---------------------------------------------------------------------

Outcome beamforming_block()
{
    Rng r(505);
    const int M = 2, K = 2, L = 2;
    const double p = 1.0, psi = 0.82;
    double worst_ratio = 1e300, worst_tight = 0.0;
    int skipped = 0;
    for (int inst = 0; inst < 50; ++inst)
    {
        const CsiView csi = random_csi(r, M, K, L, 0.2 + r.uniform());
        CMat U = random_cmat(r, L, K);
        U.colwise().normalize();
        Eigen::VectorXd alpha(K);
        for (int k = 0; k < K; ++k)
            alpha(k) = 0.2 + 0.6 * r.uniform();
        // Threshold at a fraction of the weakest tag's best-case incident power.
        double cap = 1e300;
        for (int k = 0; k < K; ++k)
            cap = std::min(cap, (1.0 - alpha(k)) * p * max_forward_power(csi, k));
        const double p_req = 0.3 * r.uniform() * cap;

        const CVec s0 = mrt_beam(csi);
        const BeamformingResult bf = solve_beamforming_multistart(csi, U, alpha, p, p_req, psi, s0);
        if (!bf.feasible)
        {
            ++skipped;
            continue;
        }
        const double obj = detail::objective_at(csi, bf.s, U, alpha, p, psi);

        // Tightness of the quadratic transform after a lambda update at the output.
        const auto a = cophase(interaction_vectors(csi, U), bf.s);
        const Eigen::VectorXd s2 = detail::combiner_noise(csi, U);
        const SurrogateQuadratic sq = build_surrogate(update_lambda(bf.s, a, alpha, p, s2), a, alpha, p, s2);
        worst_tight = std::max(worst_tight, std::abs(sq.value(bf.s, psi) - obj) / obj);

        double best = 0.0;
        for (int t = 0; t < 100000; ++t)
        {
            CVec s(M);
            for (int m = 0; m < M; ++m)
            {
                const double amp = t % 2 ? std::sqrt(K * r.uniform()) : std::sqrt(double(K));
                s(m) = std::polar(amp, 2.0 * std::numbers::pi * r.uniform());
            }
            if (detail::eh_slack(csi, s, alpha, p, p_req) < 0.0)
                continue;
            best = std::max(best, detail::objective_at(csi, s, U, alpha, p, psi));
        }
        if (best > 0.0)
            worst_ratio = std::min(worst_ratio, obj / best);
    }
    return {worst_ratio >= 0.999 && worst_tight <= 1e-8 && skipped == 0,
            "worst objective / best-of-1e5 random " + num(worst_ratio, 6) + " (>=0.999), FP tightness " +
                num(worst_tight) + " (<=1e-8), infeasible instances " + std::to_string(skipped)};
}

// 6 ---------------------------------------------------------------------

ReflectionModel random_reflection_model(Rng& r, int K)
{
    const CsiView csi = random_csi(r, 3, K, 2, 0.3 + r.uniform());
    CVec s(3);
    for (int m = 0; m < 3; ++m)
        s(m) = std::polar(std::sqrt(double(K)), 2.0 * std::numbers::pi * r.uniform());
    const CMat U = optimal_combiner(csi, s, Eigen::VectorXd::Constant(K, 0.5), 1.0);
    double weakest = 1e300;
    for (int k = 0; k < K; ++k)
        weakest = std::min(weakest, received_power(csi.forward.row(k).transpose(), s, 1.0));
    return make_reflection_model(csi, s, U, 1.0, 0.5 * r.uniform() * weakest, 0.82);
}

Outcome reflection_block()
{
    Rng r(606);
    double worst_gap = 0.0, worst_ratio = 1e300;
    for (int inst = 0; inst < 50; ++inst)
    {
        const ReflectionModel rm = random_reflection_model(r, 1);
        const ReflectionResult rr = optimize_reflection(rm, Eigen::VectorXd::Constant(1, 0.5));
        const double ub = rm.upper_bounds()(0);
        double best = 0.0;
        for (int i = 0; i < 10000; ++i)
        {
            const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, alpha_min + (ub - alpha_min) * i / 9999.0);
            best = std::max(best, rm.objective(a));
        }
        worst_gap = std::max(worst_gap, best - rm.objective(rr.alpha));
    }
    for (int inst = 0; inst < 50; ++inst)
    {
        const ReflectionModel rm = random_reflection_model(r, 2);
        const ReflectionResult rr = optimize_reflection(rm, Eigen::VectorXd::Constant(2, 0.5));
        const Eigen::VectorXd ub = rm.upper_bounds();
        double best = 0.0;
        for (int i = 0; i < 300; ++i)
            for (int j = 0; j < 300; ++j)
            {
                Eigen::VectorXd a(2);
                a(0) = alpha_min + (ub(0) - alpha_min) * i / 299.0;
                a(1) = alpha_min + (ub(1) - alpha_min) * j / 299.0;
                best = std::max(best, rm.objective(a));
            }
        worst_ratio = std::min(worst_ratio, rm.objective(rr.alpha) / best);
    }
    return {worst_gap < 1e-3 && worst_ratio >= 0.995,
            "K=1 worst gap to 1e4 grid " + num(worst_gap) + " (<1e-3), K=2 worst ratio to 300x300 grid " +
                num(worst_ratio, 6) + " (>=0.995)"};
}

// 7 ---------------------------------------------------------------------

Outcome convergence(const std::filesystem::path& dir)
{
    const ExperimentSpec spec = figure_spec(3, calibrated_config());
    const ExperimentResult res = run_experiment(spec);
    save(res, dir, "fig3");
    {
        std::ofstream os(dir / "fig3_traces.csv");
        write_traces_csv(os, res);
    }
    bool ok = true;
    std::string detail;
    for (const auto& [value, traces] : res.traces)
    {
        int monotone = 0, within = 0, max_it = 0;
        for (const auto& [drop, tr] : traces)
        {
            bool mono = true;
            for (std::size_t i = 1; i < tr.iterations.size(); ++i)
                if (tr.iterations[i].objective < tr.iterations[i - 1].objective * (1.0 - 1e-6))
                    mono = false;
            monotone += mono;
            const int its = tr.outer_iterations();
            max_it = std::max(max_it, its);
            within += tr.converged && tr.feasible && its <= 15;
        }
        const int n = static_cast<int>(traces.size());
        ok = ok && monotone == n && within >= 0.95 * n;
        detail += "p_t=" + num(value) + ": monotone " + std::to_string(monotone) + "/" + std::to_string(n) +
                  ", converged<=15 " + std::to_string(within) + "/" + std::to_string(n) + " (max " +
                  std::to_string(max_it) + "); ";
    }
    return {ok, detail};
}

// 8 and 10 ------------------------------------------------------------------

struct SweepRuns
{
    std::vector<Aggregate> power_sweep;
    std::vector<Aggregate> ap_sweep;
    std::vector<double> power_axis;
    std::vector<double> ap_axis;
};

Outcome rate_gain(const SweepRuns& runs)
{
    const auto& agg = runs.power_sweep;
    const double rnd = mean_of(agg, Scheme::random, 10.0, "sum_rate");
    const double per = mean_of(agg, Scheme::perfect, 10.0, "sum_rate");
    const double est = mean_of(agg, Scheme::estimated, 10.0, "sum_rate");
    const double r_est = est / rnd, r_per = per / rnd;
    const bool ok = r_est >= 3.5 * 0.75 && r_est <= 3.5 * 1.25 && r_per >= r_est;
    return {ok, "p_t=10 dBm, 200 drops: random " + num(rnd) + ", perfect " + num(per) + ", estimated " + num(est) +
                    "; estimated/random " + num(r_est) + " (target 3.5 +/- 25%), perfect/random " + num(r_per)};
}

Outcome monotone_trends(const SweepRuns& runs)
{
    std::vector<std::string> bad;
    auto check = [&](const std::vector<Aggregate>& agg, const std::vector<double>& axis, const std::string& var) {
        for (const std::string metric : {"sum_rate", "per_tag_rx_power_dbm"})
        {
            for (Scheme s : {Scheme::random, Scheme::perfect, Scheme::estimated})
                for (std::size_t i = 1; i < axis.size(); ++i)
                {
                    const double a = mean_of(agg, s, axis[i - 1], metric);
                    const double b = mean_of(agg, s, axis[i], metric);
                    if (!(b >= a))
                        bad.push_back(to_string(s) + " " + metric + " " + var + " " + num(axis[i - 1]) + "->" +
                                      num(axis[i]) + " (" + num(a) + "->" + num(b) + ")");
                }
            for (double v : axis)
            {
                const double per = mean_of(agg, Scheme::perfect, v, metric);
                const double est = mean_of(agg, Scheme::estimated, v, metric);
                const double rnd = mean_of(agg, Scheme::random, v, metric);
                if (!(per >= est && est >= rnd))
                    bad.push_back("ordering " + metric + " at " + var + "=" + num(v) + " (" + num(per) + ", " +
                                  num(est) + ", " + num(rnd) + ")");
            }
        }
    };
    check(runs.power_sweep, runs.power_axis, "p_t");
    check(runs.ap_sweep, runs.ap_axis, "M");
    std::string detail = bad.empty() ? "all trends and orderings hold" : std::to_string(bad.size()) + " violations: ";
    for (std::size_t i = 0; i < bad.size(); ++i)
        detail += (i ? "; " : "") + bad[i];
    return {bad.empty(), detail};
}

// 9 ---------------------------------------------------------------------

Outcome fixed_alpha(const std::filesystem::path& dir)
{
    ExperimentSpec spec = figure_spec(9, calibrated_config());
    spec.values = {20.0};
    const ExperimentResult res = run_fixed_alpha_compare(spec);
    save(res, dir, "fig9_pt20");
    int positive = 0, n = 0;
    double sum = 0.0, lo = 1e300;
    for (const auto& rec : res.records)
        if (rec.metric == "alpha_gap" && rec.scheme == Scheme::perfect)
        {
            ++n;
            if (rec.feasible)
            {
                positive += rec.value > 0.0;
                sum += rec.value;
                lo = std::min(lo, rec.value);
            }
        }
    const double mean = sum / n;
    const double target = 7.874 - 6.901;
    const bool ok = positive == n && std::abs(mean - target) <= 0.3 * target;
    return {ok, "perfect CSI, p_t=20 dBm: gap positive on " + std::to_string(positive) + "/" + std::to_string(n) +
                    " drops (min " + num(lo) + "), mean gap " + num(mean) + " bps/Hz (target " + num(target) +
                    " +/- 30%)"};
}

// 11 --------------------------------------------------------------------

Outcome determinism()
{
    ExperimentSpec spec;
    spec.config = calibrated_config();
    spec.config.num_aps = 16;
    spec.values = {5.0, 15.0};
    spec.drops = 6;
    spec.seed = 1111;
    spec.metrics = {"sum_rate", "per_tag_rx_power_dbm", "nmse_direct", "nmse_cascaded", "nmse_forward"};
    auto sorted_csv = [&](int threads) {
        const ExperimentResult r = run_experiment(spec, threads);
        std::ostringstream os;
        write_records_csv(os, r.records, r.var);
        std::istringstream is(os.str());
        std::vector<std::string> lines;
        for (std::string l; std::getline(is, l);)
            lines.push_back(l);
        std::sort(lines.begin() + 1, lines.end());
        std::string out;
        for (const auto& l : lines)
            out += l + "\n";
        return out;
    };
    const std::string a = sorted_csv(1);
    const std::string b = sorted_csv(2);
    const std::string c = sorted_csv(5);
    return {a == b && a == c, "1 vs 2 vs 5 threads, " + std::to_string(std::count(a.begin(), a.end(), '\n')) +
                                  " CSV lines, byte-identical: " + (a == b && a == c ? "yes" : "no")};
}

} // namespace

int main(int argc, char** argv)
{
    const std::filesystem::path dir = argc > 1 ? argv[1] : "acceptance_out";
    std::filesystem::create_directories(dir);
    std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria;

    SweepRuns runs;
    bool have_runs = false;
    auto ensure_runs = [&]() {
        if (have_runs)
            return;
        const SystemConfig base = calibrated_config();
        const ExperimentSpec p = figure_spec(7, base, 200);
        const ExperimentResult rp = run_experiment(p);
        save(rp, dir, "fig5_fig7_power_sweep");
        runs.power_sweep = aggregate(rp.records, rp.var);
        runs.power_axis = p.values;
        const ExperimentSpec m = figure_spec(8, base, 200);
        const ExperimentResult rm = run_experiment(m);
        save(rm, dir, "fig6_fig8_ap_sweep");
        runs.ap_sweep = aggregate(rm.records, rm.var);
        runs.ap_axis = m.values;
        have_runs = true;
    };

    criteria[1] = {"estimation correctness", estimation_correctness};
    criteria[2] = {"NMSE curve shape", [&] { return nmse_shape(dir); }};
    criteria[3] = {"exact rate vs Monte Carlo", exact_rate_mc};
    criteria[4] = {"combiner optimality", combiner_optimality};
    criteria[5] = {"beamforming block", beamforming_block};
    criteria[6] = {"reflection block", reflection_block};
    criteria[7] = {"AO convergence", [&] { return convergence(dir); }};
    criteria[8] = {"sum-rate gain over random",
                   [&] {
                       ensure_runs();
                       return rate_gain(runs);
                   }};
    criteria[9] = {"optimized vs fixed reflection", [&] { return fixed_alpha(dir); }};
    criteria[10] = {"monotone trends and ordering",
                    [&] {
                        ensure_runs();
                        return monotone_trends(runs);
                    }};
    criteria[11] = {"thread-count determinism", determinism};

    std::set<int> only;
    for (int i = 2; i < argc; ++i)
        only.insert(std::stoi(argv[i]));

    int failed = 0, ran = 0;
    for (auto& [id, c] : criteria)
    {
        if (!only.empty() && !only.count(id))
            continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.second();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << c.first << ", " << num(sec, 3)
                  << " s): " << o.detail << std::endl;
    }
    std::cout << failed << " of " << ran << " criteria failed" << std::endl;
    return failed ? 1 : 0;
}
