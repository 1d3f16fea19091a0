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

#include "risnet/experiment.hpp"

#include <chrono>
#include <cstring>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace risnet
{
    const char *to_string(Algorithm a) noexcept
    {
        switch (a)
        {
        case Algorithm::SOpt:
            return "s-opt";
        case Algorithm::ZOpt:
            return "z-opt";
        case Algorithm::Brute:
            return "brute";
        }
        return "?";
    }

    Algorithm parse_algorithm(const std::string &name)
    {
        if (name == "s-opt")
            return Algorithm::SOpt;
        if (name == "z-opt")
            return Algorithm::ZOpt;
        if (name == "brute")
            return Algorithm::Brute;
        throw ConfigError("unknown algorithm '" + name + "' (expected s-opt, z-opt or brute)");
    }

    const char *to_string(InitMode m) noexcept
    {
        switch (m)
        {
        case InitMode::Auto:
            return "auto";
        case InitMode::ZeroPhase:
            return "zero";
        case InitMode::ShortCircuit:
            return "short";
        case InitMode::Random:
            return "random";
        }
        return "?";
    }

    InitMode parse_init_mode(const std::string &name)
    {
        if (name == "auto")
            return InitMode::Auto;
        if (name == "zero")
            return InitMode::ZeroPhase;
        if (name == "short")
            return InitMode::ShortCircuit;
        if (name == "random")
            return InitMode::Random;
        throw ConfigError("unknown init mode '" + name + "' (expected auto, zero, short or random)");
    }

    std::string matrix_fingerprint(const CMatrix &m)
    {
        std::uint64_t hash = 0xcbf29ce484222325ULL;
        for (Index c = 0; c < m.cols(); ++c)
            for (Index r = 0; r < m.rows(); ++r)
                for (double part : {m(r, c).real(), m(r, c).imag()})
                {
                    unsigned char bytes[sizeof(double)];
                    std::memcpy(bytes, &part, sizeof(double));
                    for (unsigned char b : bytes)
                    {
                        hash ^= b;
                        hash *= 0x100000001b3ULL;
                    }
                }
        return fmt::format("{:016x}", hash);
    }

    PreparedScene prepare_scene(const SceneConfig &cfg, bool keep_direct_link, double z0)
    {
        DipoleScene scene = build_scene(cfg);
        const MutualImpedanceModel model{ImpedanceMethod::InducedEmfSinusoidal, cfg.integration_points};
        FullNetworkMatrix z = assemble_z_matrix(scene, model, z0);
        ImpedanceBlocks zb = partition_impedance(z, scene.partition());
        if (!keep_direct_link)
            zb = without_direct_link(std::move(zb));
        ScatteringBlocks sb = partition_scattering(z_to_s(reassemble(zb)), zb.partition);
        std::string fp = matrix_fingerprint(z.entries());
        return PreparedScene{std::move(scene), std::move(z), std::move(zb), std::move(sb), std::move(fp)};
    }

    void write_trace_csv(std::ostream &out, const OptimizerTrace &trace)
    {
        out << "iteration,gain,gain_db,delta,accepted\n";
        for (const TraceRecord &r : trace.records)
            out << fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", r.iteration, r.gain, gain_db(r.gain), r.delta,
                               r.accepted ? 1 : 0);
    }

    std::string summary_json(const RunSummary &s)
    {
        nlohmann::ordered_json j;
        j["label"] = s.label;
        j["algorithm"] = to_string(s.algorithm);
        j["q_divisor"] = s.q_divisor;
        j["n_ris"] = s.n_ris;
        j["initial_gain"] = s.initial_gain;
        j["final_gain"] = s.final_gain;
        j["final_gain_db"] = gain_db(s.final_gain);
        j["iterations"] = s.iterations;
        j["iterations_to_90pct"] = s.iterations_to_90;
        j["stop_reason"] = s.stop_reason == StopReason::Converged ? "converged" : "iteration_budget_exhausted";
        j["wall_seconds"] = s.wall_seconds;
        j["scene_fingerprint"] = s.fingerprint;
        j["normalization"] = {{"re", s.normalization.real()}, {"im", s.normalization.imag()}};
        j["trace"] = s.trace_path.filename().string();
        return j.dump(2);
    }

    namespace
    {
        RisLoadState initial_state(const ExperimentSpec &spec, Index n)
        {
            InitMode mode = spec.init;
            if (mode == InitMode::Auto)
                mode = spec.algorithm == Algorithm::ZOpt ? InitMode::ShortCircuit : InitMode::ZeroPhase;
            switch (mode)
            {
            case InitMode::ZeroPhase:
                return RisLoadState::zeros(n);
            case InitMode::ShortCircuit:
                return RisLoadState::short_circuit(n);
            case InitMode::Random:
                return RisLoadState::random(n, spec.seed);
            case InitMode::Auto:
                break;
            }
            return RisLoadState::zeros(n);
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw ConfigError("cannot open " + path.string() + " for writing");
            out << text;
            if (!out)
                throw ConfigError("failed writing " + path.string());
        }
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec)
    {
        const PreparedScene prepared = prepare_scene(spec.scene, spec.keep_direct_link);
        const Index n = prepared.zb.partition.n_s;
        const RisLoadState init = initial_state(spec, n);

        ExperimentResult result;
        switch (spec.algorithm)
        {
        case Algorithm::SOpt:
            result.trace = sopt_run(prepared.sb, init, spec.schedule.value_or(StepSchedule{}), spec.stop);
            break;
        case Algorithm::ZOpt:
            result.trace = zopt_run(prepared.zb, init, spec.schedule.value_or(StepSchedule::reactance_default()),
                                    spec.stop);
            break;
        case Algorithm::Brute:
        {
            const auto started = std::chrono::steady_clock::now();
            const double g0 = channel_gain(prepared.sb, init);
            BruteForceResult best = brute_force_phases(prepared.sb, spec.brute_levels);
            result.trace.records = {{0, g0, 0.0, true}, {1, best.best_gain, 0.0, true}};
            result.trace.final_state = std::move(best.best);
            result.trace.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            break;
        }
        }

        RunSummary &s = result.summary;
        s.label = spec.label;
        s.algorithm = spec.algorithm;
        s.q_divisor = spec.scene.q_divisor;
        s.n_ris = n;
        s.initial_gain = result.trace.initial_gain();
        s.final_gain = result.trace.final_gain();
        s.iterations = result.trace.iterations();
        s.iterations_to_90 = result.trace.iterations_to_fraction(0.9);
        s.stop_reason = result.trace.stop_reason;
        s.wall_seconds = result.trace.wall_seconds;
        s.fingerprint = prepared.fingerprint;
        s.normalization = estimate_normalization(prepared.zb);

        std::filesystem::create_directories(spec.out_dir);
        s.trace_path = spec.out_dir / (spec.label + ".trace.csv");
        s.summary_path = spec.out_dir / (spec.label + ".summary.json");

        std::ostringstream trace_text;
        write_trace_csv(trace_text, result.trace);
        write_text(s.trace_path, trace_text.str());
        write_text(s.summary_path, summary_json(s) + "\n");
        return result;
    }

    std::vector<RunSummary> run_sweep(const ExperimentSpec &base, const std::vector<double> &q_values,
                                      const std::vector<Algorithm> &algorithms)
    {
        std::vector<std::future<RunSummary>> jobs;
        for (double q : q_values)
            for (Algorithm a : algorithms)
            {
                ExperimentSpec spec = base;
                spec.scene.q_divisor = q;
                spec.algorithm = a;
                spec.label = fmt::format("{}_q{}", to_string(a), q);
                // The schedule is algorithm specific; only keep an override for the
                // algorithm it was written for.
                if (base.schedule && a != base.algorithm)
                    spec.schedule.reset();
                jobs.push_back(std::async(std::launch::async, [spec] { return run_experiment(spec).summary; }));
            }

        std::vector<RunSummary> out;
        out.reserve(jobs.size());
        for (auto &job : jobs)
            out.push_back(job.get());

        std::filesystem::create_directories(base.out_dir);
        std::ofstream table(base.out_dir / "sweep_summary.csv");
        if (!table)
            throw ConfigError("cannot write sweep summary in " + base.out_dir.string());
        write_sweep_table(table, out);
        return out;
    }

    void write_sweep_table(std::ostream &out, const std::vector<RunSummary> &runs)
    {
        out << "q_divisor,algorithm,n_ris,initial_gain,final_gain,final_gain_db,iterations,iterations_to_90pct\n";
        for (const RunSummary &r : runs)
            out << fmt::format("{},{},{},{:.17g},{:.17g},{:.6f},{},{}\n", r.q_divisor, to_string(r.algorithm),
                               r.n_ris, r.initial_gain, r.final_gain, gain_db(r.final_gain), r.iterations,
                               r.iterations_to_90);
    }
}
