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

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bibc/harness/calibration.hpp"
#include "bibc/harness/experiment.hpp"
#include "bibc/harness/figures.hpp"
#include "bibc/harness/nmse_sweep.hpp"
#include "bibc/harness/output.hpp"

namespace fs = std::filesystem;

namespace
{

bibc::SystemConfig base_config(const std::string& path)
{
    return path.empty() ? bibc::calibrated_config() : bibc::load_config(path);
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw bibc::io_error("cannot create " + dir + ": " + ec.message());
}

void write_experiment(const bibc::ExperimentResult& res, const std::string& dir)
{
    ensure_dir(dir);
    bibc::emit_csv(res.records, res.var, dir + "/summary.csv");
    {
        auto f = bibc::open_out(dir + "/records.csv");
        bibc::write_records_csv(f, res.records, res.var);
        bibc::finish(f, dir + "/records.csv");
    }
    if (!res.traces.empty())
    {
        auto f = bibc::open_out(dir + "/traces.csv");
        bibc::write_traces_csv(f, res);
        bibc::finish(f, dir + "/traces.csv");
    }
}

bibc::Estimator parse_estimator(const std::string& s)
{
    if (s == "ls")
        return bibc::Estimator::ls;
    if (s == "mmse")
        return bibc::Estimator::mmse;
    throw bibc::config_error("estimator must be ls or mmse");
}

std::vector<int> parse_int_list(const std::string& s)
{
    std::vector<int> out;
    for (double v : bibc::parse_range(s))
        out.push_back(static_cast<int>(std::lround(v)));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bibc: cell-free bistatic backscatter simulator"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    app.add_option("--config", config_path, "Scenario JSON (default: calibrated preset)");
    app.add_option("--threads", threads, "Worker threads (default: BIBC_THREADS or hardware)");

    // run
    auto* run = app.add_subcommand("run", "Run an experiment spec");
    std::string spec_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    run->add_option("--spec", spec_path, "Experiment spec JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Master seed (overrides the experiment file)");
    run->add_option("--threads", threads, "Worker threads");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "Regenerate one figure's data series");
    int figure = 0, drops = 0, trials = 0;
    rep->add_option("--figure", figure, "Figure number")->required()->check(CLI::Range(3, 9));
    rep->add_option("--out", out_dir, "Output directory");
    rep->add_option("--drops", drops, "Monte Carlo drops (default per figure)");
    rep->add_option("--trials", trials, "Noise trials for figure 4 (default 10000)");
    rep->add_option("--seed", seed, "Master seed");
    rep->add_option("--threads", threads, "Worker threads");

    // nmse
    auto* nm = app.add_subcommand("nmse", "Channel-estimation NMSE sweep");
    std::string taus = "5,7,11", pp = "0:2:20", estimator = "ls", out_file;
    nm->add_option("--tau", taus, "Pilot lengths, comma list");
    nm->add_option("--pp-dbm", pp, "Pilot powers, start:step:stop or comma list");
    nm->add_option("--trials", trials, "Noise trials (default 10000)");
    nm->add_option("--estimator", estimator, "ls or mmse")->check(CLI::IsMember({"ls", "mmse"}));
    nm->add_option("--out", out_file, "Output CSV (default stdout)");
    nm->add_option("--seed", seed, "Master seed");
    nm->add_option("--threads", threads, "Worker threads");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Fit per-link gain offsets to the reference operating points");
    int cal_drops = 400;
    cal->add_option("--drops", cal_drops, "Drops per evaluation");
    cal->add_option("--seed", seed, "Calibration seed (default 20240)");
    cal->add_option("--out", out_file, "Write the calibrated scenario JSON here");

    // geometry
    auto* geo = app.add_subcommand("geometry", "Dump node positions for one drop");
    std::uint64_t drop = 0;
    geo->add_option("--seed", seed, "Master seed");
    geo->add_option("--drop", drop, "Drop index");

    // config
    auto* cfg_cmd = app.add_subcommand("config", "Print the active scenario as JSON");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const bibc::SystemConfig base = base_config(config_path);
        if (*run)
        {
            std::ifstream in(spec_path);
            nlohmann::json j;
            try
            {
                in >> j;
            }
            catch (const nlohmann::json::exception& e)
            {
                throw bibc::config_error(std::string("malformed spec JSON: ") + e.what());
            }
            bibc::ExperimentSpec spec = bibc::parse_spec(j, base);
            if (seed)
                spec.seed = *seed;
            write_experiment(bibc::run_experiment(spec, threads), out_dir);
            std::cout << "wrote " << out_dir << "/summary.csv\n";
        }
        else if (*rep)
        {
            ensure_dir(out_dir);
            if (figure == 4)
            {
                bibc::NmseSweepSpec s = bibc::figure4_spec(base, trials);
                if (seed)
                    s.seed = *seed;
                const auto pts = bibc::nmse_sweep(s, threads);
                const std::string path = out_dir + "/fig4_series.csv";
                auto f = bibc::open_out(path);
                bibc::write_nmse_csv(f, pts);
                bibc::finish(f, path);
                std::cout << "wrote " << path << '\n';
            }
            else
            {
                bibc::ExperimentSpec s = bibc::figure_spec(figure, base, drops);
                s.seed = seed.value_or(base.master_seed);
                const bibc::ExperimentResult res = bibc::run_experiment(s, threads);
                write_experiment(res, out_dir);
                std::cout << "wrote " << bibc::emit_figure_series(res, figure, out_dir) << '\n';
            }
        }
        else if (*nm)
        {
            bibc::NmseSweepSpec s;
            s.config = base;
            s.taus = parse_int_list(taus);
            s.pp_dbm = bibc::parse_range(pp);
            s.estimator = parse_estimator(estimator);
            if (trials > 0)
                s.trials = trials;
            if (seed)
                s.seed = *seed;
            const auto pts = bibc::nmse_sweep(s, threads);
            if (out_file.empty())
                bibc::write_nmse_csv(std::cout, pts);
            else
            {
                auto f = bibc::open_out(out_file);
                bibc::write_nmse_csv(f, pts);
                bibc::finish(f, out_file);
            }
        }
        else if (*cal)
        {
            const auto r = bibc::calibrate(bibc::calibration_base(), {}, cal_drops, seed.value_or(20240), threads);
            std::cout << "ap_tag_db      " << bibc::fmt(r.offsets.ap_tag_db) << '\n'
                      << "tag_reader_db  " << bibc::fmt(r.offsets.tag_reader_db) << '\n'
                      << "ap_reader_db   " << bibc::fmt(r.offsets.ap_reader_db) << '\n'
                      << "check: random rx power " << bibc::fmt(r.rx_power_dbm) << " dBm, random sum rate "
                      << bibc::fmt(r.sum_rate) << ", direct NMSE " << bibc::fmt(r.direct_nmse) << '\n';
            if (!out_file.empty())
            {
                bibc::SystemConfig c = bibc::calibration_base();
                c.gain_offset = r.offsets;
                auto f = bibc::open_out(out_file);
                f << nlohmann::json(c).dump(2) << '\n';
                bibc::finish(f, out_file);
            }
        }
        else if (*geo)
        {
            bibc::write_geometry_csv(std::cout, bibc::place_network(base, seed.value_or(base.master_seed), drop));
        }
        else if (*cfg_cmd)
        {
            std::cout << nlohmann::json(base).dump(2) << '\n';
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
