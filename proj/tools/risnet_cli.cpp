// SPDX-License-Identifier: Apache-2.0
//
// risnet - multiport network modelling and optimization of RIS-aided links
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

// risnet command line front end.
//
//   risnet run --config scene.cfg --algo s-opt --out results/
//   risnet sweep --config scene.cfg --q 4,8,16
//   risnet convert z.csv --to s --z0 50 --output s.csv
//   risnet export-touchstone --config scene.cfg --output scene.s26p
//
// Exit codes: 0 success, 2 input/configuration error, 3 numerical failure,
// 1 anything else.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "risnet/experiment.hpp"
#include "risnet/matrix_io.hpp"
#include "risnet/touchstone.hpp"

namespace
{
    constexpr int exit_input_error = 2;
    constexpr int exit_numerical_error = 3;
    constexpr const char *out_dir_env = "RISNET_OUT_DIR";

    struct CommonOptions
    {
        std::string config;
        std::string algo = "s-opt";
        std::optional<int> max_iters;
        std::optional<double> step;
        std::optional<double> decay;
        std::uint64_t seed = 0;
        std::string init = "auto";
        std::string out;
        int levels = 16;
        bool keep_direct_link = false;
        bool no_safeguard = false;
    };

    std::filesystem::path output_dir(const std::string &flag)
    {
        if (!flag.empty())
            return flag;
        if (const char *env = std::getenv(out_dir_env); env && *env)
            return env;
        return "risnet-out";
    }

    void add_run_options(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config, "Scene config file (key = value)")->check(CLI::ExistingFile);
        cmd->add_option("--max-iters", o.max_iters, "Iteration budget (default 2000)");
        cmd->add_option("--step", o.step, "Initial step: radians for s-opt, ohms for z-opt");
        cmd->add_option("--decay", o.decay, "Per-iteration step decay factor");
        cmd->add_option("--seed", o.seed, "Seed for --init random");
        cmd->add_option("--init", o.init, "Initial loads: auto, zero, short, random");
        cmd->add_option("--out", o.out, std::string("Output directory (else $") + out_dir_env + ", else risnet-out)");
        cmd->add_option("--levels", o.levels, "Phase levels per element for --algo brute");
        cmd->add_flag("--keep-direct-link", o.keep_direct_link, "Keep the direct transmitter-receiver coupling");
        cmd->add_flag("--no-safeguard", o.no_safeguard, "Accept steps that lower the gain");
    }

    risnet::ExperimentSpec make_spec(const CommonOptions &o)
    {
        risnet::ExperimentSpec spec;
        if (!o.config.empty())
        {
            spec.scene = risnet::load_scene_config(o.config);
            spec.label = std::filesystem::path(o.config).stem().string();
        }
        spec.algorithm = risnet::parse_algorithm(o.algo);
        spec.init = risnet::parse_init_mode(o.init);
        spec.seed = o.seed;
        spec.brute_levels = o.levels;
        spec.keep_direct_link = o.keep_direct_link;
        spec.out_dir = output_dir(o.out);
        if (o.max_iters)
            spec.stop.max_iterations = *o.max_iters;

        if (o.step || o.decay || o.no_safeguard)
        {
            risnet::StepSchedule s = spec.algorithm == risnet::Algorithm::ZOpt
                                         ? risnet::StepSchedule::reactance_default()
                                         : risnet::StepSchedule{};
            if (o.step)
            {
                s.delta0 = *o.step;
                s.min_delta = std::min(s.min_delta, s.delta0);
            }
            if (o.decay)
                s.decay = *o.decay;
            if (o.no_safeguard)
                s.greedy_safeguard = false;
            spec.schedule = s;
        }
        return spec;
    }

    std::vector<double> parse_q_list(const std::string &text)
    {
        std::vector<double> qs;
        std::size_t start = 0;
        while (start <= text.size())
        {
            const auto comma = text.find(',', start);
            const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            try
            {
                std::size_t used = 0;
                qs.push_back(std::stod(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            }
            catch (const std::exception &)
            {
                throw risnet::ConfigError("invalid --q entry '" + item + "'");
            }
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        return qs;
    }

    void print_summary(const risnet::RunSummary &s)
    {
        std::cout << fmt::format("{}: {} on {} RIS elements, G {:.6e} -> {:.6e} ({:.3f} dB) in {} iterations\n",
                                 s.label, risnet::to_string(s.algorithm), s.n_ris, s.initial_gain, s.final_gain,
                                 risnet::gain_db(s.final_gain), s.iterations);
        std::cout << "  trace:   " << s.trace_path.string() << '\n' << "  summary: " << s.summary_path.string() << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risnet: S/Z-parameter modelling and load optimization of RIS-aided links"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto *run = app.add_subcommand("run", "Optimize RIS loads for one scene");
    add_run_options(run, run_opts);
    run->add_option("--algo", run_opts.algo, "s-opt, z-opt or brute");

    CommonOptions sweep_opts;
    std::string q_list = "4,8,16";
    std::string sweep_algos = "s-opt,z-opt";
    auto *sweep = app.add_subcommand("sweep", "Run the element-spacing sweep for several algorithms");
    add_run_options(sweep, sweep_opts);
    sweep->add_option("--q", q_list, "Comma separated spacing divisors (d_y = lambda / q)");
    sweep->add_option("--algo", sweep_algos, "Comma separated algorithms");

    std::string convert_input, convert_output, convert_to;
    double convert_z0 = risnet::default_z0;
    auto *convert = app.add_subcommand("convert", "Convert a matrix file between Z and S parameters");
    convert->add_option("input", convert_input, "Input matrix CSV")->required()->check(CLI::ExistingFile);
    convert->add_option("--to", convert_to, "Target parameters: s or z")->required()->check(CLI::IsMember({"s", "z"}));
    convert->add_option("--z0", convert_z0, "Reference impedance in ohms");
    convert->add_option("--output,-o", convert_output, "Output CSV (default: stdout)");

    std::string ts_config, ts_output, ts_out_dir;
    double ts_z0 = risnet::default_z0;
    auto *touch = app.add_subcommand("export-touchstone", "Write the scene S-matrix as a Touchstone v1 file");
    touch->add_option("--config", ts_config, "Scene config file")->check(CLI::ExistingFile);
    touch->add_option("--output,-o", ts_output, "Output file (default <out>/scene.sNp)");
    touch->add_option("--out", ts_out_dir, "Output directory");
    touch->add_option("--z0", ts_z0, "Reference impedance in ohms");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_input_error;
    }

    try
    {
        if (*run)
        {
            const risnet::ExperimentSpec spec = make_spec(run_opts);
            const risnet::ExperimentResult result = risnet::run_experiment(spec);
            print_summary(result.summary);
        }
        else if (*sweep)
        {
            risnet::ExperimentSpec spec = make_spec(sweep_opts);
            std::vector<risnet::Algorithm> algos;
            for (const std::string &name : CLI::detail::split(sweep_algos, ','))
                algos.push_back(risnet::parse_algorithm(name));
            const auto runs = risnet::run_sweep(spec, parse_q_list(q_list), algos);
            risnet::write_sweep_table(std::cout, runs);
            std::cout << "summary table: " << (spec.out_dir / "sweep_summary.csv").string() << '\n';
        }
        else if (*convert)
        {
            const risnet::CMatrix m = risnet::read_matrix_csv(convert_input);
            const bool to_s = convert_to == "s";
            const risnet::FullNetworkMatrix in(to_s ? risnet::ParamKind::Impedance : risnet::ParamKind::Scattering, m,
                                               convert_z0);
            const risnet::FullNetworkMatrix out = to_s ? risnet::z_to_s(in) : risnet::s_to_z(in);
            if (convert_output.empty())
                risnet::write_matrix_csv(std::cout, out.entries());
            else
                risnet::write_matrix_csv(convert_output, out.entries());
        }
        else if (*touch)
        {
            const risnet::SceneConfig cfg = ts_config.empty() ? risnet::SceneConfig{} : risnet::load_scene_config(ts_config);
            const risnet::DipoleScene scene = risnet::build_scene(cfg);
            const risnet::MutualImpedanceModel model{risnet::ImpedanceMethod::InducedEmfSinusoidal,
                                                     cfg.integration_points};
            const risnet::FullNetworkMatrix s = risnet::z_to_s(risnet::assemble_z_matrix(scene, model, ts_z0));

            std::filesystem::path path = ts_output;
            if (path.empty())
            {
                const auto dir = output_dir(ts_out_dir);
                std::filesystem::create_directories(dir);
                path = dir / fmt::format("scene.s{}p", s.size());
            }
            const auto p = scene.partition();
            risnet::write_touchstone(path, s, scene.frequency_hz,
                                     fmt::format("RIS scene: {} tx, {} ris, {} rx ports; ports ordered tx, ris, rx",
                                                 p.n_t, p.n_s, p.n_r));
            std::cout << path.string() << '\n';
        }
    }
    catch (const risnet::InputError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (const risnet::NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical_error;
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "unexpected failure: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
