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

#ifndef BIBC_HARNESS_NMSE_SWEEP_HPP
#define BIBC_HARNESS_NMSE_SWEEP_HPP

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "output.hpp"

namespace bibc
{

struct NmsePoint
{
    std::string channel_kind; // direct, cascaded, forward
    double p_p_dbm = 0.0;
    int tau = 0;
    double nmse = 0.0;
};

struct NmseSweepSpec
{
    std::vector<int> taus{5, 7, 11};
    std::vector<double> pp_dbm;
    int trials = 10000;
    std::uint64_t seed = 1;
    Estimator estimator = Estimator::ls;
    SystemConfig config;
};

/// Ensemble NMSE (summed error over summed energy) per channel kind, tau and
/// pilot power. Each trial redraws tags, channels and pilot noise; the
/// forward entry measures the squared channel f^2 the APs actually estimate.
inline std::vector<NmsePoint> nmse_sweep(const NmseSweepSpec& spec, int threads = 0)
{
    if (spec.trials < 1 || spec.taus.empty() || spec.pp_dbm.empty())
        throw config_error("nmse sweep needs trials >= 1 and non-empty tau and power lists");
    const int nt = static_cast<int>(spec.taus.size());
    const int np = static_cast<int>(spec.pp_dbm.size());
    const int points = nt * np;
    // [trial][point][kind] = {error energy, channel energy}
    std::vector<std::vector<std::array<double, 6>>> acc(spec.trials, std::vector<std::array<double, 6>>(points));

    parallel_for(spec.trials, resolve_threads(threads), [&](int t) {
        const auto drop = static_cast<std::uint64_t>(t);
        const NetworkGeometry geo = place_network(spec.config, spec.seed, drop);
        const ChannelRealization ch = draw_channels(geo, spec.config, spec.seed, drop);
        const int M = ch.num_aps();
        const int K = ch.num_tags();
        for (int it = 0; it < nt; ++it)
            for (int ip = 0; ip < np; ++ip)
            {
                SystemConfig c = spec.config;
                c.pilot_len = spec.taus[it];
                c.pilot_power_dbm = spec.pp_dbm[ip];
                const ChannelEstimates est = estimate_channels(ch, geo, c, spec.seed, drop, spec.estimator);
                auto& a = acc[t][it * np + ip];
                a.fill(0.0);
                for (int m = 0; m < M; ++m)
                {
                    a[0] += (est.direct(m) - ch.H0.col(m)).squaredNorm();
                    a[1] += ch.H0.col(m).squaredNorm();
                    for (int k = 0; k < K; ++k)
                    {
                        const CVec h = ch.cascaded(k, m);
                        a[2] += (est.cascaded(k, m) - h).squaredNorm();
                        a[3] += h.squaredNorm();
                        const cd fb = ch.F(k, m) * ch.F(k, m);
                        a[4] += std::norm(est.fbar_hat(k, m) - fb);
                        a[5] += std::norm(fb);
                    }
                }
            }
    });

    std::vector<NmsePoint> out;
    static const char* kinds[] = {"direct", "cascaded", "forward"};
    for (int kind = 0; kind < 3; ++kind)
        for (int it = 0; it < nt; ++it)
            for (int ip = 0; ip < np; ++ip)
            {
                double num = 0.0;
                double den = 0.0;
                for (int t = 0; t < spec.trials; ++t)
                {
                    num += acc[t][it * np + ip][2 * kind];
                    den += acc[t][it * np + ip][2 * kind + 1];
                }
                out.push_back({kinds[kind], spec.pp_dbm[ip], spec.taus[it], num / den});
            }
    return out;
}

inline void write_nmse_csv(std::ostream& os, const std::vector<NmsePoint>& pts)
{
    os << "channel_kind,p_p_dbm,tau,nmse\n";
    for (const auto& p : pts)
        os << p.channel_kind << ',' << fmt(p.p_p_dbm) << ',' << p.tau << ',' << fmt(p.nmse) << '\n';
}

/// Least-squares slope of log10(nmse) against p_p_dbm / 10.
inline double loglog_slope(const std::vector<NmsePoint>& pts, const std::string& kind, int tau)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : pts)
        if (p.channel_kind == kind && p.tau == tau)
        {
            const double x = p.p_p_dbm / 10.0;
            const double y = std::log10(p.nmse);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    if (n < 2)
        throw config_error("slope needs at least two points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Pilot power (dBm) at which a curve reaches the target NMSE, by log-linear interpolation.
inline double power_for_nmse(const std::vector<NmsePoint>& pts, const std::string& kind, int tau, double target)
{
    std::vector<const NmsePoint*> c;
    for (const auto& p : pts)
        if (p.channel_kind == kind && p.tau == tau)
            c.push_back(&p);
    std::sort(c.begin(), c.end(), [](auto a, auto b) { return a->p_p_dbm < b->p_p_dbm; });
    const double lt = std::log10(target);
    for (std::size_t i = 1; i < c.size(); ++i)
    {
        const double y0 = std::log10(c[i - 1]->nmse);
        const double y1 = std::log10(c[i]->nmse);
        if ((y0 - lt) * (y1 - lt) <= 0.0 && y0 != y1)
            return c[i - 1]->p_p_dbm + (lt - y0) / (y1 - y0) * (c[i]->p_p_dbm - c[i - 1]->p_p_dbm);
    }
    // Extrapolate along the fitted line.
    const double slope = loglog_slope(pts, kind, tau);
    const double y0 = std::log10(c.front()->nmse);
    return c.front()->p_p_dbm + 10.0 * (lt - y0) / slope;
}

/// Parses "a:step:b" or "a,b,c".
inline std::vector<double> parse_range(const std::string& s)
{
    std::vector<double> out;
    if (s.find(':') != std::string::npos)
    {
        std::vector<double> p;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ':'))
            p.push_back(std::stod(cell));
        if (p.size() != 3 || !(p[1] > 0.0) || p[2] < p[0])
            throw config_error("range must be start:step:stop with positive step");
        const int n = static_cast<int>(std::floor((p[2] - p[0]) / p[1] + 1e-9));
        for (int i = 0; i <= n; ++i)
            out.push_back(p[0] + i * p[1]);
        return out;
    }
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(std::stod(cell));
    if (out.empty())
        throw config_error("empty list");
    return out;
}

} // namespace bibc

#endif
