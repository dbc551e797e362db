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

#ifndef BIBC_HARNESS_OUTPUT_HPP
#define BIBC_HARNESS_OUTPUT_HPP

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "experiment.hpp"

namespace bibc
{

struct io_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip-safe text for a double.
inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    double back = std::stod(os.str());
    for (int p = 6; p < 17; ++p)
    {
        std::ostringstream t;
        t << std::setprecision(p) << v;
        if (std::stod(t.str()) == back)
            return t.str();
    }
    return os.str();
}

/// Mean over feasible drops of one (scheme, sweep value, metric).
struct Aggregate
{
    std::string scheme;
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string metric;
    double mean = 0.0;
    double stderr_ = 0.0;
    int n_drops = 0;
    int n_infeasible = 0;
};

/// Groups in first-appearance order of (sweep value, scheme, metric).
inline std::vector<Aggregate> aggregate(const std::vector<ResultRecord>& records, SweepVar var)
{
    using Key = std::tuple<double, int, std::string>;
    std::map<Key, std::size_t> index;
    std::vector<Aggregate> out;
    std::vector<std::vector<double>> vals;
    for (const auto& r : records)
    {
        const Key key{r.sweep_value, static_cast<int>(r.scheme), r.metric};
        auto it = index.find(key);
        if (it == index.end())
        {
            it = index.emplace(key, out.size()).first;
            Aggregate a;
            a.scheme = to_string(r.scheme);
            a.sweep_var = to_string(var);
            a.sweep_value = r.sweep_value;
            a.metric = r.metric;
            out.push_back(a);
            vals.emplace_back();
        }
        if (r.feasible)
            vals[it->second].push_back(r.value);
        else
            ++out[it->second].n_infeasible;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        const auto& v = vals[i];
        const int n = static_cast<int>(v.size());
        out[i].n_drops = n;
        if (n == 0)
        {
            out[i].mean = std::nan("");
            continue;
        }
        double s = 0.0;
        for (double x : v)
            s += x;
        const double mean = s / n;
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        out[i].mean = mean;
        out[i].stderr_ = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    }
    return out;
}

inline constexpr const char* summary_header = "scheme,sweep_var,sweep_value,metric,mean,stderr,n_drops,n_infeasible";

inline void write_summary_csv(std::ostream& os, const std::vector<Aggregate>& agg)
{
    os << summary_header << '\n';
    for (const auto& a : agg)
        os << a.scheme << ',' << a.sweep_var << ',' << fmt(a.sweep_value) << ',' << a.metric << ',' << fmt(a.mean)
           << ',' << fmt(a.stderr_) << ',' << a.n_drops << ',' << a.n_infeasible << '\n';
}

/// Raw per-drop records.
inline void write_records_csv(std::ostream& os, const std::vector<ResultRecord>& records, SweepVar var)
{
    os << "scheme,sweep_var,sweep_value,drop,metric,value,feasible\n";
    for (const auto& r : records)
        os << to_string(r.scheme) << ',' << to_string(var) << ',' << fmt(r.sweep_value) << ',' << r.drop << ','
           << r.metric << ',' << fmt(r.value) << ',' << (r.feasible ? 1 : 0) << '\n';
}

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open " + path + " for writing");
    return f;
}

inline void finish(std::ofstream& f, const std::string& path)
{
    f.flush();
    if (!f)
        throw io_error("write failed: " + path);
}

/// Aggregated CSV; empty input gives a header-only file.
inline void emit_csv(const std::vector<ResultRecord>& records, SweepVar var, const std::string& path)
{
    auto f = open_out(path);
    write_summary_csv(f, aggregate(records, var));
    finish(f, path);
}

/// Parses a summary CSV back into aggregates.
inline std::vector<Aggregate> read_summary_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != summary_header)
        throw io_error("unexpected summary header");
    std::vector<Aggregate> out;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 8)
            throw io_error("malformed summary row: " + line);
        Aggregate a;
        a.scheme = f[0];
        a.sweep_var = f[1];
        a.sweep_value = std::stod(f[2]);
        a.metric = f[3];
        a.mean = std::stod(f[4]);
        a.stderr_ = std::stod(f[5]);
        a.n_drops = std::stoi(f[6]);
        a.n_infeasible = std::stoi(f[7]);
        out.push_back(a);
    }
    return out;
}

/// Mean objective per outer iteration, holding each drop's final value once it stops.
inline void write_convergence_series(std::ostream& os, const ExperimentResult& res)
{
    os << to_string(res.var) << ",iter,objective,n_drops\n";
    for (const auto& [value, traces] : res.traces)
    {
        std::size_t len = 0;
        std::vector<std::vector<double>> objs;
        for (const auto& [drop, tr] : traces)
            if (tr.feasible && !tr.iterations.empty())
            {
                objs.push_back(tr.objectives());
                len = std::max(len, objs.back().size());
            }
        for (std::size_t i = 0; i < len; ++i)
        {
            double s = 0.0;
            for (const auto& o : objs)
                s += i < o.size() ? o[i] : o.back();
            os << fmt(value) << ',' << i << ',' << fmt(s / static_cast<double>(objs.size())) << ',' << objs.size()
               << '\n';
        }
    }
}

/// Per-drop traces for every sweep value.
inline void write_traces_csv(std::ostream& os, const ExperimentResult& res)
{
    os << to_string(res.var) << ',';
    write_trace_header(os);
    for (const auto& [value, traces] : res.traces)
        for (const auto& [drop, tr] : traces)
        {
            std::ostringstream body;
            write_trace_csv(body, tr, drop);
            std::istringstream lines(body.str());
            std::string l;
            while (std::getline(lines, l))
                os << fmt(value) << ',' << l << '\n';
        }
}

/// Figure series: one row per (scheme, sweep value) with the figure's metric.
inline void write_metric_series(std::ostream& os, const std::vector<Aggregate>& agg, const std::string& metric,
                                const std::string& axis)
{
    os << "scheme," << axis << ',' << metric << ",stderr,n_drops,n_infeasible\n";
    for (const auto& a : agg)
        if (a.metric == metric)
            os << a.scheme << ',' << fmt(a.sweep_value) << ',' << fmt(a.mean) << ',' << fmt(a.stderr_) << ','
               << a.n_drops << ',' << a.n_infeasible << '\n';
}

/// Writes figN_series.csv into dir for figures 3 and 5 to 9.
inline std::string emit_figure_series(const ExperimentResult& res, int figure, const std::string& dir)
{
    const std::string path = dir + "/fig" + std::to_string(figure) + "_series.csv";
    auto f = open_out(path);
    const auto agg = aggregate(res.records, res.var);
    switch (figure)
    {
    case 3: write_convergence_series(f, res); break;
    case 5: write_metric_series(f, agg, "per_tag_rx_power_dbm", "p_t_dbm"); break;
    case 6: write_metric_series(f, agg, "per_tag_rx_power_dbm", "num_aps"); break;
    case 7: write_metric_series(f, agg, "sum_rate", "p_t_dbm"); break;
    case 8: write_metric_series(f, agg, "sum_rate", "num_aps"); break;
    case 9:
    {
        f << "p_t_dbm,scheme,sum_rate_optimal_alpha,sum_rate_fixed_alpha,alpha_gap,alpha_gap_stderr,n_drops\n";
        std::map<std::pair<double, std::string>, std::map<std::string, const Aggregate*>> rows;
        std::vector<std::pair<double, std::string>> order;
        for (const auto& a : agg)
        {
            const auto key = std::make_pair(a.sweep_value, a.scheme);
            if (!rows.count(key))
                order.push_back(key);
            rows[key][a.metric] = &a;
        }
        for (const auto& key : order)
        {
            auto& m = rows[key];
            if (!m.count("alpha_gap"))
                continue;
            f << fmt(key.first) << ',' << key.second << ',' << fmt(m["sum_rate_optimal_alpha"]->mean) << ','
              << fmt(m["sum_rate_fixed_alpha"]->mean) << ',' << fmt(m["alpha_gap"]->mean) << ','
              << fmt(m["alpha_gap"]->stderr_) << ',' << m["alpha_gap"]->n_drops << '\n';
        }
        break;
    }
    default: throw config_error("no figure series for figure " + std::to_string(figure));
    }
    finish(f, path);
    return path;
}

} // namespace bibc

#endif
