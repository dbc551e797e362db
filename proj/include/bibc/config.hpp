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

#ifndef BIBC_CONFIG_HPP
#define BIBC_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace bibc
{

/// Raised for any invalid scenario or experiment description.
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

enum class DistanceUnit
{
    meters,
    kilometers
};

enum class EHKind
{
    linear,
    nonlinear
};

/// Energy-harvesting circuit parameters. The nonlinear model is a normalized
/// logistic with saturation `saturation_w`, steepness `steepness` (1/W) and
/// center `center_w` (W).
struct EHParams
{
    EHKind kind = EHKind::linear;
    double efficiency = 0.6;
    double saturation_w = 0.024;
    double steepness = 150.0;
    double center_w = 0.014;
};

/// Extra gain (dB) added to every link of a family on top of the path-loss model.
struct LinkOffsets
{
    double ap_tag_db = 0.0;
    double tag_reader_db = 0.0;
    double ap_reader_db = 0.0;
};

/// Every scenario parameter plus solver tolerances.
///
/// Powers are kept in dBm as configured; helpers convert on demand. The
/// defaults reproduce the reference warehouse scenario (2 GHz, 10 MHz,
/// 36 APs on a 100 m square, 4 reader antennas, 3 tags).
struct SystemConfig
{
    double carrier_mhz = 2000.0;
    double bandwidth_hz = 10e6;
    double noise_figure_db = 10.0;

    int num_aps = 36;
    int reader_antennas = 4;
    int num_tags = 3;

    double tx_power_dbm = 10.0;
    double pilot_power_dbm = 20.0;
    double activation_threshold_dbm = -20.0;
    EHParams eh;

    double d0_m = 10.0;
    double d1_m = 50.0;
    double h_ap_m = 15.0;
    double h_tag_m = 1.0;
    double h_reader_m = 1.6;
    double area_side_m = 100.0;
    DistanceUnit distance_unit = DistanceUnit::meters;
    LinkOffsets gain_offset;
    bool random_ap_placement = false;

    int coherence_len = 1000;
    int pilot_len = 5;                  // per-slot pilot length tau
    std::optional<double> prelog;        // overrides (tau_c - M tau) / tau_c
    double alpha_train = 0.6;

    double eps_inner = 1e-4;
    double eps_outer = 1e-3;
    int max_outer_iters = 30;
    int max_beamforming_iters = 60;
    int max_alpha_iters = 60;

    std::uint64_t master_seed = 1;

    double tx_power_w() const { return dbm_to_watt(tx_power_dbm); }
    double pilot_power_w() const { return dbm_to_watt(pilot_power_dbm); }

    /// Thermal noise power (W): -174 dBm/Hz + 10 log10(B) + NF.
    double noise_power_w() const
    {
        return dbm_to_watt(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
    }

    /// Pre-log factor; the pilot phase occupies M slots of tau samples.
    double psi() const
    {
        if (prelog)
            return *prelog;
        return static_cast<double>(coherence_len - num_aps * pilot_len) / coherence_len;
    }

    void validate() const
    {
        if (num_aps < 1 || num_tags < 1 || reader_antennas < 1)
            throw config_error("M, K and L must all be at least 1");
        if (!random_ap_placement)
        {
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_aps))));
            if (side * side != num_aps)
                throw config_error("grid AP placement needs a square M; set random_ap_placement otherwise");
        }
        if (pilot_len < num_tags + 1)
            throw config_error("pilot length tau must be at least K+1 for orthogonal pilots");
        if (!(d0_m > 0.0 && d0_m < d1_m))
            throw config_error("breakpoints must satisfy 0 < d0 < d1");
        if (carrier_mhz <= 0.0 || bandwidth_hz <= 0.0 || area_side_m <= 0.0)
            throw config_error("carrier, bandwidth and area side must be positive");
        if (!(alpha_train > 0.0 && alpha_train < 1.0))
            throw config_error("training reflection coefficient must lie in (0,1)");
        if (eh.kind == EHKind::linear && !(eh.efficiency > 0.0 && eh.efficiency <= 1.0))
            throw config_error("linear EH efficiency must lie in (0,1]");
        if (eh.kind == EHKind::nonlinear)
        {
            if (eh.saturation_w <= 0.0 || eh.steepness <= 0.0)
                throw config_error("nonlinear EH needs positive saturation and steepness");
            if (dbm_to_watt(activation_threshold_dbm) >= eh.saturation_w)
                throw config_error("activation threshold exceeds EH saturation");
        }
        const double p = psi();
        if (!(p > 0.0 && p <= 1.0))
            throw config_error("pre-log factor must lie in (0,1]; shorten the pilot phase");
        if (eps_inner <= 0.0 || eps_outer <= 0.0)
            throw config_error("tolerances must be positive");
    }
};

// JSON mapping -------------------------------------------------------------

inline void to_json(nlohmann::json& j, const EHParams& e)
{
    j = nlohmann::json{{"kind", e.kind == EHKind::linear ? "linear" : "nonlinear"},
                       {"efficiency", e.efficiency},
                       {"saturation_w", e.saturation_w},
                       {"steepness", e.steepness},
                       {"center_w", e.center_w}};
}

inline void from_json(const nlohmann::json& j, EHParams& e)
{
    if (j.contains("kind"))
    {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "linear")
            e.kind = EHKind::linear;
        else if (kind == "nonlinear")
            e.kind = EHKind::nonlinear;
        else
            throw config_error("unknown eh_model kind: " + kind);
    }
    e.efficiency = j.value("efficiency", e.efficiency);
    e.saturation_w = j.value("saturation_w", e.saturation_w);
    e.steepness = j.value("steepness", e.steepness);
    e.center_w = j.value("center_w", e.center_w);
}

inline void to_json(nlohmann::json& j, const SystemConfig& c)
{
    j = nlohmann::json{{"f_c", c.carrier_mhz},
                       {"B", c.bandwidth_hz},
                       {"N_f", c.noise_figure_db},
                       {"M", c.num_aps},
                       {"L", c.reader_antennas},
                       {"K", c.num_tags},
                       {"p_t", c.tx_power_dbm},
                       {"p_p", c.pilot_power_dbm},
                       {"p_b", c.activation_threshold_dbm},
                       {"eh_model", c.eh},
                       {"d_0", c.d0_m},
                       {"d_1", c.d1_m},
                       {"h_AP", c.h_ap_m},
                       {"h_T", c.h_tag_m},
                       {"h_R", c.h_reader_m},
                       {"area_side", c.area_side_m},
                       {"distance_unit", c.distance_unit == DistanceUnit::meters ? "m" : "km"},
                       {"gain_offset_db",
                        {{"ap_tag", c.gain_offset.ap_tag_db},
                         {"tag_reader", c.gain_offset.tag_reader_db},
                         {"ap_reader", c.gain_offset.ap_reader_db}}},
                       {"random_ap_placement", c.random_ap_placement},
                       {"tau_c", c.coherence_len},
                       {"tau", c.pilot_len},
                       {"alpha_train", c.alpha_train},
                       {"eps_inner", c.eps_inner},
                       {"eps_outer", c.eps_outer},
                       {"max_outer_iters", c.max_outer_iters},
                       {"max_beamforming_iters", c.max_beamforming_iters},
                       {"max_alpha_iters", c.max_alpha_iters},
                       {"master_seed", c.master_seed}};
    if (c.prelog)
        j["psi"] = *c.prelog;
}

inline void from_json(const nlohmann::json& j, SystemConfig& c)
{
    c.carrier_mhz = j.value("f_c", c.carrier_mhz);
    c.bandwidth_hz = j.value("B", c.bandwidth_hz);
    c.noise_figure_db = j.value("N_f", c.noise_figure_db);
    c.num_aps = j.value("M", c.num_aps);
    c.reader_antennas = j.value("L", c.reader_antennas);
    c.num_tags = j.value("K", c.num_tags);
    c.tx_power_dbm = j.value("p_t", c.tx_power_dbm);
    c.pilot_power_dbm = j.value("p_p", c.pilot_power_dbm);
    c.activation_threshold_dbm = j.value("p_b", c.activation_threshold_dbm);
    if (j.contains("eh_model"))
        c.eh = j.at("eh_model").get<EHParams>();
    c.d0_m = j.value("d_0", c.d0_m);
    c.d1_m = j.value("d_1", c.d1_m);
    c.h_ap_m = j.value("h_AP", c.h_ap_m);
    c.h_tag_m = j.value("h_T", c.h_tag_m);
    c.h_reader_m = j.value("h_R", c.h_reader_m);
    c.area_side_m = j.value("area_side", c.area_side_m);
    if (j.contains("distance_unit"))
    {
        const auto u = j.at("distance_unit").get<std::string>();
        if (u == "m")
            c.distance_unit = DistanceUnit::meters;
        else if (u == "km")
            c.distance_unit = DistanceUnit::kilometers;
        else
            throw config_error("distance_unit must be \"m\" or \"km\"");
    }
    if (j.contains("gain_offset_db"))
    {
        const auto& o = j.at("gain_offset_db");
        c.gain_offset.ap_tag_db = o.value("ap_tag", c.gain_offset.ap_tag_db);
        c.gain_offset.tag_reader_db = o.value("tag_reader", c.gain_offset.tag_reader_db);
        c.gain_offset.ap_reader_db = o.value("ap_reader", c.gain_offset.ap_reader_db);
    }
    c.random_ap_placement = j.value("random_ap_placement", c.random_ap_placement);
    c.coherence_len = j.value("tau_c", c.coherence_len);
    c.pilot_len = j.value("tau", c.pilot_len);
    if (j.contains("psi"))
        c.prelog = j.at("psi").get<double>();
    c.alpha_train = j.value("alpha_train", c.alpha_train);
    c.eps_inner = j.value("eps_inner", c.eps_inner);
    c.eps_outer = j.value("eps_outer", c.eps_outer);
    c.max_outer_iters = j.value("max_outer_iters", c.max_outer_iters);
    c.max_beamforming_iters = j.value("max_beamforming_iters", c.max_beamforming_iters);
    c.max_alpha_iters = j.value("max_alpha_iters", c.max_alpha_iters);
    c.master_seed = j.value("master_seed", c.master_seed);
}

inline SystemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw config_error(std::string("malformed config JSON: ") + e.what());
    }
    auto cfg = j.get<SystemConfig>();
    cfg.validate();
    return cfg;
}

} // namespace bibc

#endif
