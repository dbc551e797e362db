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

#ifndef BIBC_HARNESS_FIGURES_HPP
#define BIBC_HARNESS_FIGURES_HPP

#include <string>

#include "experiment.hpp"
#include "nmse_sweep.hpp"

namespace bibc
{

inline const std::vector<double>& power_axis()
{
    static const std::vector<double> v{0.0, 5.0, 10.0, 15.0, 20.0};
    return v;
}

inline const std::vector<double>& ap_axis()
{
    static const std::vector<double> v{4.0, 16.0, 36.0, 64.0, 100.0};
    return v;
}

/// Monte Carlo study behind figures 3 and 5 to 9.
inline ExperimentSpec figure_spec(int figure, const SystemConfig& base, int drops = 0)
{
    ExperimentSpec s;
    s.config = base;
    s.drops = 200;
    switch (figure)
    {
    case 3:
        s.var = SweepVar::p_t;
        s.values = {0.0, 10.0, 20.0, 30.0};
        s.schemes = {Scheme::perfect};
        s.metrics = {"convergence_trace"};
        s.drops = 100;
        break;
    case 5:
    case 7:
        s.var = SweepVar::p_t;
        s.values = power_axis();
        s.metrics = {"per_tag_rx_power_dbm", "sum_rate"};
        break;
    case 6:
    case 8:
        s.var = SweepVar::M;
        s.values = ap_axis();
        s.config.tx_power_dbm = 20.0;
        s.metrics = {"per_tag_rx_power_dbm", "sum_rate"};
        break;
    case 9:
        s.var = SweepVar::p_t;
        s.values = power_axis();
        s.schemes = {Scheme::perfect};
        s.metrics = {"fixed_alpha_compare"};
        break;
    default: throw config_error("figure must be one of 3, 5, 6, 7, 8, 9 (4 is the NMSE sweep)");
    }
    if (drops > 0)
        s.drops = drops;
    return s;
}

/// Pilot-power sweep behind figure 4.
inline NmseSweepSpec figure4_spec(const SystemConfig& base, int trials = 0)
{
    NmseSweepSpec s;
    s.config = base;
    s.pp_dbm = parse_range("0:2:20");
    if (trials > 0)
        s.trials = trials;
    return s;
}

} // namespace bibc

#endif
