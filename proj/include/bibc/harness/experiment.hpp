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

#ifndef BIBC_HARNESS_EXPERIMENT_HPP
#define BIBC_HARNESS_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "../bibc.hpp"

namespace bibc
{

enum class Scheme
{
    random,
    perfect,
    estimated
};

inline std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::random: return "random";
    case Scheme::perfect: return "perfect";
    case Scheme::estimated: return "estimated";
    }
    return "?";
}

inline Scheme parse_scheme(const std::string& s)
{
    if (s == "random")
        return Scheme::random;
    if (s == "perfect")
        return Scheme::perfect;
    if (s == "estimated")
        return Scheme::estimated;
    throw config_error("unknown scheme: " + s);
}

enum class SweepVar
{
    p_t,
    M,
    p_p,
    K
};

inline std::string to_string(SweepVar v)
{
    switch (v)
    {
    case SweepVar::p_t: return "p_t";
    case SweepVar::M: return "M";
    case SweepVar::p_p: return "p_p";
    case SweepVar::K: return "K";
    }
    return "?";
}

inline SweepVar parse_sweep_var(const std::string& s)
{
    if (s == "p_t")
        return SweepVar::p_t;
    if (s == "M")
        return SweepVar::M;
    if (s == "p_p")
        return SweepVar::p_p;
    if (s == "K")
        return SweepVar::K;
    throw config_error("unknown sweep variable: " + s);
}

inline const std::set<std::string>& known_metrics()
{
    static const std::set<std::string> m{"nmse_direct",       "nmse_cascaded",        "nmse_forward",
                                         "per_tag_rx_power_dbm", "sum_rate",          "convergence_trace",
                                         "fixed_alpha_compare"};
    return m;
}

/// One Monte Carlo study: a sweep over one variable for a set of schemes.
struct ExperimentSpec
{
    SweepVar var = SweepVar::p_t;
    std::vector<double> values{10.0};
    int drops = 200;
    std::vector<Scheme> schemes{Scheme::random, Scheme::perfect, Scheme::estimated};
    std::vector<std::string> metrics{"sum_rate", "per_tag_rx_power_dbm"};
    std::uint64_t seed = 1;
    Estimator estimator = Estimator::ls;
    SystemConfig config;

    bool wants(const std::string& metric) const
    {
        return std::find(metrics.begin(), metrics.end(), metric) != metrics.end();
    }

    bool has(Scheme s) const { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }

    void validate() const
    {
        if (drops < 1)
            throw config_error("drops must be at least 1");
        if (values.empty())
            throw config_error("sweep value list is empty");
        if (schemes.empty())
            throw config_error("scheme list is empty");
        for (const auto& m : metrics)
            if (!known_metrics().count(m))
                throw config_error("unknown metric: " + m);
        const bool nmse = wants("nmse_direct") || wants("nmse_cascaded") || wants("nmse_forward");
        if (nmse && !has(Scheme::estimated))
            throw config_error("NMSE metrics need the estimated scheme");
        if ((wants("convergence_trace") || wants("fixed_alpha_compare")) && !has(Scheme::perfect) &&
            !has(Scheme::estimated))
            throw config_error("convergence and fixed-alpha metrics need an optimizing scheme");
        for (double v : values)
            apply(v).validate();
    }

    /// Scenario at one sweep point.
    SystemConfig apply(double v) const
    {
        SystemConfig c = config;
        switch (var)
        {
        case SweepVar::p_t: c.tx_power_dbm = v; break;
        case SweepVar::p_p: c.pilot_power_dbm = v; break;
        case SweepVar::M: c.num_aps = static_cast<int>(std::lround(v)); break;
        case SweepVar::K:
            c.num_tags = static_cast<int>(std::lround(v));
            c.pilot_len = std::max(c.pilot_len, c.num_tags + 1);
            break;
        }
        return c;
    }
};

inline ExperimentSpec parse_spec(const nlohmann::json& j, const SystemConfig& base)
{
    ExperimentSpec s;
    s.config = base;
    if (j.contains("config"))
    {
        nlohmann::json merged = base;
        merged.merge_patch(j.at("config"));
        s.config = merged.get<SystemConfig>();
    }
    if (j.contains("sweep"))
    {
        s.var = parse_sweep_var(j.at("sweep").at("var").get<std::string>());
        s.values = j.at("sweep").at("values").get<std::vector<double>>();
    }
    s.drops = j.value("drops", s.drops);
    if (j.contains("schemes"))
    {
        s.schemes.clear();
        for (const auto& x : j.at("schemes"))
            s.schemes.push_back(parse_scheme(x.get<std::string>()));
    }
    if (j.contains("metrics"))
        s.metrics = j.at("metrics").get<std::vector<std::string>>();
    s.seed = j.value("seed", s.config.master_seed);
    if (j.contains("estimator"))
    {
        const auto e = j.at("estimator").get<std::string>();
        if (e == "ls")
            s.estimator = Estimator::ls;
        else if (e == "mmse")
            s.estimator = Estimator::mmse;
        else
            throw config_error("estimator must be \"ls\" or \"mmse\"");
    }
    s.validate();
    return s;
}

/// One value for one (scheme, sweep point, drop, metric).
struct ResultRecord
{
    Scheme scheme = Scheme::random;
    double sweep_value = 0.0;
    std::uint64_t drop = 0;
    std::string metric;
    double value = 0.0;
    bool feasible = true;
};

/// Everything produced by an experiment, in deterministic order.
struct ExperimentResult
{
    SweepVar var = SweepVar::p_t;
    std::vector<ResultRecord> records;
    std::vector<std::pair<double, std::vector<std::pair<std::uint64_t, AOTrace>>>> traces; // per sweep value
};

/// Worker count: explicit request, else BIBC_THREADS, else hardware.
inline int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("BIBC_THREADS"))
    {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on a pool; results must be written to slot i.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1)
    {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true)
            {
                const int i = next.fetch_add(1);
                if (i >= n)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err)
                        err = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

/// Mean over tags of p_t |f_k^T s|^2 in dBm, and the weakest tag.
inline std::pair<double, double> tag_power_dbm(const CsiView& truth, const CVec& s, double p_t)
{
    double sum = 0.0;
    double mn = std::numeric_limits<double>::infinity();
    for (int k = 0; k < truth.num_tags(); ++k)
    {
        const double p = watt_to_dbm(received_power(truth.forward.row(k).transpose(), s, p_t));
        sum += p;
        mn = std::min(mn, p);
    }
    return {sum / truth.num_tags(), mn};
}

/// Fraction of tags whose true incident power meets the activation threshold.
inline double active_fraction(const CsiView& truth, const Solution& sol, const SystemConfig& cfg)
{
    const EHModel eh = EHModel::from_config(cfg);
    const CVec s = sol.effective_beam();
    int on = 0;
    for (int k = 0; k < sol.num_tags(); ++k)
        on += eh.active(incident_power(truth.forward.row(k).transpose(), s, sol.alpha(k), cfg.tx_power_w())) ? 1 : 0;
    return static_cast<double>(on) / sol.num_tags();
}

namespace detail
{

struct DropOutput
{
    std::vector<ResultRecord> records;
    AOTrace trace; // perfect scheme if present, else estimated
    bool has_trace = false;
};

inline void add_solution_metrics(const ExperimentSpec& spec, const SystemConfig& cfg, Scheme scheme,
                                 double value, std::uint64_t drop, const CsiView& truth, const Solution& sol,
                                 bool feasible, std::vector<ResultRecord>& out)
{
    const double p_t = cfg.tx_power_w();
    const double psi = cfg.psi();
    auto push = [&](const std::string& metric, double v) {
        out.push_back({scheme, value, drop, metric, v, feasible});
    };
    if (spec.wants("sum_rate"))
    {
        push("sum_rate", feasible ? sum_rate_bound(truth, sol, p_t, psi) : 0.0);
        push("sum_rate_exact", feasible ? sum_rate_exact(truth, sol, p_t, psi) : 0.0);
    }
    if (spec.wants("per_tag_rx_power_dbm"))
    {
        const auto [mean, mn] = tag_power_dbm(truth, sol.effective_beam(), p_t);
        push("per_tag_rx_power_dbm", mean);
        push("per_tag_rx_power_min_dbm", mn);
    }
    if (spec.wants("sum_rate") || spec.wants("per_tag_rx_power_dbm"))
        push("active_fraction", active_fraction(truth, sol, cfg));
}

inline DropOutput run_drop(const ExperimentSpec& spec, double value, std::uint64_t drop)
{
    const SystemConfig cfg = spec.apply(value);
    DropOutput out;
    const NetworkGeometry geo = place_network(cfg, spec.seed, drop);
    const ChannelRealization ch = draw_channels(geo, cfg, spec.seed, drop);
    const CsiView truth = csi_from_truth(ch);

    for (Scheme sc : spec.schemes)
    {
        if (sc == Scheme::random)
        {
            const Solution sol = random_baseline(cfg.num_aps, cfg.num_tags, cfg.reader_antennas, spec.seed, drop);
            add_solution_metrics(spec, cfg, sc, value, drop, truth, sol, true, out.records);
            continue;
        }
        CsiView view = truth;
        if (sc == Scheme::estimated)
        {
            const ChannelEstimates est = estimate_channels(ch, geo, cfg, spec.seed, drop, spec.estimator);
            view = csi_from_estimates(est, ch.noise_power);
            const bool want_nmse = spec.wants("nmse_direct") || spec.wants("nmse_cascaded") || spec.wants("nmse_forward");
            if (want_nmse)
            {
                std::vector<CVec> td, ed, tc, ec, tf, ef;
                for (int m = 0; m < cfg.num_aps; ++m)
                {
                    td.push_back(ch.H0.col(m));
                    ed.push_back(est.direct(m));
                    for (int k = 0; k < cfg.num_tags; ++k)
                    {
                        tc.push_back(ch.cascaded(k, m));
                        ec.push_back(est.cascaded(k, m));
                    }
                    tf.push_back(ch.F.col(m).cwiseProduct(ch.F.col(m)));
                    ef.push_back(est.fbar_hat.col(m));
                }
                if (spec.wants("nmse_direct"))
                    out.records.push_back({sc, value, drop, "nmse_direct", nmse(td, ed), true});
                if (spec.wants("nmse_cascaded"))
                    out.records.push_back({sc, value, drop, "nmse_cascaded", nmse(tc, ec), true});
                if (spec.wants("nmse_forward"))
                    out.records.push_back({sc, value, drop, "nmse_forward", nmse(tf, ef), true});
            }
        }
        const AOResult ao = alternating_optimization(view, cfg);
        add_solution_metrics(spec, cfg, sc, value, drop, truth, ao.solution, ao.feasible, out.records);
        if (spec.wants("convergence_trace"))
        {
            out.records.push_back({sc, value, drop, "ao_iterations",
                                   static_cast<double>(ao.trace.outer_iterations()), ao.feasible});
            out.records.push_back({sc, value, drop, "ao_converged", ao.trace.converged ? 1.0 : 0.0, ao.feasible});
            if (!out.has_trace)
            {
                out.trace = ao.trace;
                out.has_trace = true;
            }
        }
        if (spec.wants("fixed_alpha_compare"))
        {
            AOOptions fixed;
            fixed.optimize_alpha = false;
            fixed.fixed_alpha = Eigen::VectorXd::Constant(cfg.num_tags, 0.6);
            const AOResult fa = alternating_optimization(view, cfg, fixed);
            const bool both = ao.feasible && fa.feasible;
            const double r_opt = ao.feasible ? sum_rate_bound(truth, ao.solution, cfg.tx_power_w(), cfg.psi()) : 0.0;
            const double r_fix = fa.feasible ? sum_rate_bound(truth, fa.solution, cfg.tx_power_w(), cfg.psi()) : 0.0;
            out.records.push_back({sc, value, drop, "sum_rate_optimal_alpha", r_opt, both});
            out.records.push_back({sc, value, drop, "sum_rate_fixed_alpha", r_fix, both});
            out.records.push_back({sc, value, drop, "alpha_gap", r_opt - r_fix, both});
        }
    }
    return out;
}

} // namespace detail

/// Full sweep. Drops run on a worker pool; records are merged in
/// (sweep value, drop) order so the output does not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, int threads = 0)
{
    spec.validate();
    const int nv = static_cast<int>(spec.values.size());
    const int total = nv * spec.drops;
    std::vector<detail::DropOutput> slots(total);
    parallel_for(total, resolve_threads(threads), [&](int i) {
        const int v = i / spec.drops;
        const auto d = static_cast<std::uint64_t>(i % spec.drops);
        slots[i] = detail::run_drop(spec, spec.values[v], d);
    });
    ExperimentResult res;
    res.var = spec.var;
    for (int v = 0; v < nv; ++v)
    {
        std::vector<std::pair<std::uint64_t, AOTrace>> tr;
        for (int d = 0; d < spec.drops; ++d)
        {
            auto& s = slots[v * spec.drops + d];
            res.records.insert(res.records.end(), s.records.begin(), s.records.end());
            if (s.has_trace)
                tr.emplace_back(static_cast<std::uint64_t>(d), s.trace);
        }
        if (!tr.empty())
            res.traces.emplace_back(spec.values[v], std::move(tr));
    }
    return res;
}

/// Paired optimal-alpha vs fixed-alpha runs.
inline ExperimentResult run_fixed_alpha_compare(ExperimentSpec spec, int threads = 0)
{
    spec.schemes.erase(std::remove(spec.schemes.begin(), spec.schemes.end(), Scheme::random), spec.schemes.end());
    if (spec.schemes.empty())
        throw config_error("fixed-alpha comparison needs the perfect or estimated scheme");
    spec.metrics = {"fixed_alpha_compare"};
    return run_experiment(spec, threads);
}

} // namespace bibc

#endif
