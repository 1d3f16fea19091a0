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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risnet/em_scene.hpp"
#include "risnet/optimizer.hpp"

namespace risnet
{
    enum class Algorithm
    {
        SOpt,
        ZOpt,
        Brute
    };

    const char *to_string(Algorithm a) noexcept;
    Algorithm parse_algorithm(const std::string &name);

    enum class InitMode
    {
        Auto,         // zero phase for phase methods, zero reactance for the reactance method
        ZeroPhase,    // phi = 0 (open circuit)
        ShortCircuit, // phi = pi, X = 0
        Random        // seeded uniform phases
    };

    const char *to_string(InitMode m) noexcept;
    InitMode parse_init_mode(const std::string &name);

    // A scene ready for optimization: geometry, impedance matrix and both
    // block forms. The direct link is removed (Z_RT := 0) unless kept.
    struct PreparedScene
    {
        DipoleScene scene;
        FullNetworkMatrix z;
        ImpedanceBlocks zb;
        ScatteringBlocks sb;
        std::string fingerprint; // FNV-1a of the assembled impedance matrix
    };

    PreparedScene prepare_scene(const SceneConfig &cfg, bool keep_direct_link = false, double z0 = default_z0);

    // 64-bit FNV-1a over the raw bytes of the matrix entries, as 16 hex digits.
    std::string matrix_fingerprint(const CMatrix &m);

    struct ExperimentSpec
    {
        SceneConfig scene;
        std::string label = "run"; // output file stem
        Algorithm algorithm = Algorithm::SOpt;
        std::optional<StepSchedule> schedule; // defaults per algorithm
        StoppingRule stop;
        InitMode init = InitMode::Auto;
        std::uint64_t seed = 0;
        int brute_levels = 16;
        bool keep_direct_link = false;
        std::filesystem::path out_dir = ".";
    };

    struct RunSummary
    {
        std::string label;
        Algorithm algorithm = Algorithm::SOpt;
        double q_divisor = 0.0;
        Index n_ris = 0;
        double initial_gain = 0.0;
        double final_gain = 0.0;
        int iterations = 0;
        int iterations_to_90 = 0;
        StopReason stop_reason = StopReason::Converged;
        double wall_seconds = 0.0;
        std::string fingerprint;
        cdouble normalization;
        std::filesystem::path trace_path;
        std::filesystem::path summary_path;
    };

    struct ExperimentResult
    {
        RunSummary summary;
        OptimizerTrace trace;
    };

    // Runs one optimization and writes <label>.trace.csv and
    // <label>.summary.json into spec.out_dir. Deterministic given the spec.
    ExperimentResult run_experiment(const ExperimentSpec &spec);

    // Trace CSV: iteration,gain,gain_db,delta,accepted
    void write_trace_csv(std::ostream &out, const OptimizerTrace &trace);

    std::string summary_json(const RunSummary &s);

    // Runs every (q, algorithm) pair on copies of `base`, in parallel, and
    // writes sweep_summary.csv next to the per-run files. Results are ordered
    // as q-major, algorithm-minor regardless of completion order.
    std::vector<RunSummary> run_sweep(const ExperimentSpec &base, const std::vector<double> &q_values,
                                      const std::vector<Algorithm> &algorithms);

    void write_sweep_table(std::ostream &out, const std::vector<RunSummary> &runs);
}
