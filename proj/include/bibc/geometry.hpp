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

#ifndef BIBC_GEOMETRY_HPP
#define BIBC_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "rng.hpp"

namespace bibc
{

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Node positions (m) and the linear large-scale gains derived from them.
struct NetworkGeometry
{
    std::vector<Point> aps;
    std::vector<Point> tags;
    Point reader;
    Eigen::VectorXd zeta_h0; // M, AP -> reader
    Eigen::MatrixXd zeta_f;  // K x M, AP -> tag
    Eigen::VectorXd zeta_g;  // K, tag -> reader

    int num_aps() const { return static_cast<int>(aps.size()); }
    int num_tags() const { return static_cast<int>(tags.size()); }
};

/// Hata-COST231 constant (dB) for transmitter/receiver heights in meters.
inline double hata_constant_db(double carrier_mhz, double h_t, double h_r)
{
    const double lf = std::log10(carrier_mhz);
    return 46.3 + 33.9 * lf - 13.82 * std::log10(h_t) - (1.1 * lf - 0.7) * h_r + (1.56 * lf - 0.8);
}

/// Three-slope large-scale gain in dB for a horizontal distance `d_m` (m).
///
/// Branches: exponent 3.5 beyond d1, 2 between d0 and d1, flat below d0.
/// The branch test is done in meters; the log terms use the configured unit.
inline double path_loss_db(double d_m, double h_t, double h_r, const SystemConfig& cfg)
{
    const double L = hata_constant_db(cfg.carrier_mhz, h_t, h_r);
    const double scale = cfg.distance_unit == DistanceUnit::kilometers ? 1e-3 : 1.0;
    const double d = d_m * scale;
    const double d0 = cfg.d0_m * scale;
    const double d1 = cfg.d1_m * scale;
    if (d_m > cfg.d1_m)
        return -L - 35.0 * std::log10(d);
    if (d_m > cfg.d0_m)
        return -L - 15.0 * std::log10(d1) - 20.0 * std::log10(d);
    return -L - 15.0 * std::log10(d1) - 20.0 * std::log10(d0);
}

inline double path_gain(double d_m, double h_t, double h_r, const SystemConfig& cfg)
{
    return db_to_linear(path_loss_db(d_m, h_t, h_r, cfg));
}

/// Uniform grid: cell centers of an n x n partition of the square.
inline std::vector<Point> ap_grid(int num_aps, double side)
{
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_aps))));
    if (n * n != num_aps)
        throw config_error("grid AP placement needs a perfect-square AP count (M=" +
                           std::to_string(num_aps) + ")");
    std::vector<Point> out;
    out.reserve(num_aps);
    const double cell = side / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.push_back({(i + 0.5) * cell, (j + 0.5) * cell});
    return out;
}

/// Fills the large-scale gain tables from node positions and link offsets.
inline void compute_gains(NetworkGeometry& g, const SystemConfig& cfg)
{
    const int M = g.num_aps();
    const int K = g.num_tags();
    g.zeta_h0.resize(M);
    g.zeta_f.resize(K, M);
    g.zeta_g.resize(K);
    const double o_h0 = db_to_linear(cfg.gain_offset.ap_reader_db);
    const double o_f = db_to_linear(cfg.gain_offset.ap_tag_db);
    const double o_g = db_to_linear(cfg.gain_offset.tag_reader_db);
    for (int m = 0; m < M; ++m)
        g.zeta_h0(m) = o_h0 * path_gain(distance(g.aps[m], g.reader), cfg.h_ap_m, cfg.h_reader_m, cfg);
    for (int k = 0; k < K; ++k)
    {
        for (int m = 0; m < M; ++m)
            g.zeta_f(k, m) = o_f * path_gain(distance(g.aps[m], g.tags[k]), cfg.h_ap_m, cfg.h_tag_m, cfg);
        g.zeta_g(k) = o_g * path_gain(distance(g.tags[k], g.reader), cfg.h_tag_m, cfg.h_reader_m, cfg);
    }
}

/// Places APs (grid, or uniform when configured), K uniform tags and the
/// reader at the center. Tags are keyed by (seed, drop).
inline NetworkGeometry place_network(const SystemConfig& cfg, std::uint64_t seed,
                                     std::uint64_t drop = 0)
{
    NetworkGeometry g;
    const double side = cfg.area_side_m;
    if (cfg.random_ap_placement)
    {
        Rng rng(seed, drop, Stream::aps);
        for (int m = 0; m < cfg.num_aps; ++m)
        {
            const double x = rng.uniform(0.0, side);
            const double y = rng.uniform(0.0, side);
            g.aps.push_back({x, y});
        }
    }
    else
    {
        g.aps = ap_grid(cfg.num_aps, side);
    }
    Rng rng(seed, drop, Stream::tags);
    for (int k = 0; k < cfg.num_tags; ++k)
    {
        const double x = rng.uniform(0.0, side);
        const double y = rng.uniform(0.0, side);
        g.tags.push_back({x, y});
    }
    g.reader = {side / 2.0, side / 2.0};
    compute_gains(g, cfg);
    return g;
}

/// CSV dump: node_type,index,x_m,y_m
inline void write_geometry_csv(std::ostream& os, const NetworkGeometry& g)
{
    os << "node_type,index,x_m,y_m\n";
    for (std::size_t m = 0; m < g.aps.size(); ++m)
        os << "ap," << m << ',' << g.aps[m].x << ',' << g.aps[m].y << '\n';
    for (std::size_t k = 0; k < g.tags.size(); ++k)
        os << "tag," << k << ',' << g.tags[k].x << ',' << g.tags[k].y << '\n';
    os << "reader,0," << g.reader.x << ',' << g.reader.y << '\n';
}

} // namespace bibc

#endif
