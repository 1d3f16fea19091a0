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
#include <optional>
#include <vector>

#include "risnet/channel.hpp"
#include "risnet/netparams.hpp"

namespace risnet
{
    using RVector = Eigen::VectorXd;

    // Maps an angle to (-pi, pi].
    double wrap_phase(double phi);

    // Unit-modulus RIS loads. The phases are the state; reflection
    // coefficients e^{j phi} and reactances X = z0 cot(phi / 2) are derived,
    // so |Sigma_k| = 1 holds by construction.
    class RisLoadState
    {
    public:
        RisLoadState() = default;
        explicit RisLoadState(RVector phases);

        // phi = 0 for every element (open circuit).
        static RisLoadState zeros(Index n);
        // phi = pi for every element (short circuit, X = 0).
        static RisLoadState short_circuit(Index n);
        // Uniform phases in (-pi, pi] from a seeded generator.
        static RisLoadState random(Index n, std::uint64_t seed);
        // Inverse of reactances(); purely reactive loads only.
        static RisLoadState from_reactances(const RVector &x, double z0 = default_z0);

        Index size() const noexcept { return phases_.size(); }
        const RVector &phases() const noexcept { return phases_; }
        CVector reflection() const;
        // X_k = z0 cot(phi_k / 2); +/-inf for phi_k = 0.
        RVector reactances(double z0 = default_z0) const;

    private:
        RVector phases_;
    };

    // Sign of the j factor in the auxiliary matrix P = (+/-) j Q^-1 Gamma^-2 e^{j phi}.
    // Only one of them makes C_k the phase derivative of the channel; see
    // resolved_derivative_sign().
    enum class DerivativeSign
    {
        MinusJ,
        PlusJ
    };

    struct FirstOrderQuantities
    {
        cdouble a;  // current channel value
        CMatrix q;  // Gamma^-1 - S_SS
        CMatrix p;  // empty unless requested
        CVector b1; // S_RS P, as a column
        CVector b2; // Q^-1 S_ST
        CVector c;  // b1 .* b2
    };

    // Linearization of the SISO channel around the current phases.
    FirstOrderQuantities first_order(const ScatteringBlocks &blocks, const RisLoadState &state, DerivativeSign sign,
                                     bool include_p = true, double condition_cap = default_condition_cap);

    struct SignProbe
    {
        double error_minus_j = 0.0; // max relative mismatch against finite differences
        double error_plus_j = 0.0;
        DerivativeSign chosen = DerivativeSign::PlusJ;
    };

    // Compares both signs against central finite differences on a fixed
    // pseudo-random probe network. Throws NumericalError if neither matches.
    SignProbe probe_derivative_sign();

    // probe_derivative_sign().chosen, evaluated once per process.
    DerivativeSign resolved_derivative_sign();

    // Central-difference estimate of dH/dphi_k, two channel evaluations per k.
    // Requires h in [1e-8, 1e-3].
    CVector finite_diff_gradient(const ScatteringBlocks &blocks, const RisLoadState &state, double h);

    double channel_gain(const ScatteringBlocks &blocks, const RisLoadState &state);

    // (|S_RT| + sum_k |S_RS,k S_ST,k|)^2, the optimum for S_SS = 0.
    double uncoupled_optimum_gain(const ScatteringBlocks &blocks);

    struct StepSchedule
    {
        double delta0 = 0.05;
        double decay = 0.98;     // per iteration
        double min_delta = 1e-3; // floor
        double shrink = 0.5;     // extra factor after a rejected step
        bool greedy_safeguard = true;

        // Step schedule for the reactance baseline, in ohms.
        static StepSchedule reactance_default() { return {1.0, 0.98, 1e-3, 0.5, true}; }

        // Throws ConfigError; max_delta0 bounds the first step.
        void validate(double max_delta0) const;
    };

    struct StoppingRule
    {
        int max_iterations = 2000;
        int window = 20;
        double rel_tol = 1e-6; // on G improvement over the window

        void validate() const;
    };

    struct TraceRecord
    {
        int iteration = 0;
        double gain = 0.0; // gain of the current (accepted) state
        double delta = 0.0;
        bool accepted = true;
    };

    enum class StopReason
    {
        Converged,
        IterationBudgetExhausted
    };

    struct OptimizerTrace
    {
        std::vector<TraceRecord> records; // records[0] is the initial state
        RisLoadState final_state;
        StopReason stop_reason = StopReason::Converged;
        double wall_seconds = 0.0;

        double initial_gain() const { return records.front().gain; }
        double final_gain() const { return records.back().gain; }
        int iterations() const { return records.back().iteration; }
        // First iteration whose gain reaches `fraction` of the final gain.
        int iterations_to_fraction(double fraction) const;
    };

    struct PhaseStep
    {
        RisLoadState state;
        RVector delta;
    };

    // One simultaneous update: delta_k = +step when |A + C_k step| >= |A - C_k step|,
    // -step otherwise.
    PhaseStep sopt_step(const ScatteringBlocks &blocks, const RisLoadState &state, double step,
                        DerivativeSign sign = resolved_derivative_sign());

    OptimizerTrace sopt_run(const ScatteringBlocks &blocks, const RisLoadState &init, const StepSchedule &schedule = {},
                            const StoppingRule &stop = {});

    // Runs S-OPT from the all-zero phases and from `random_starts` seeded
    // random phase vectors (seeds seed, seed + 1, ...) and returns the trace
    // with the highest final gain; ties keep the earliest start.
    OptimizerTrace sopt_multistart(const ScatteringBlocks &blocks, int random_starts, std::uint64_t seed = 0,
                                   const StepSchedule &schedule = {}, const StoppingRule &stop = {});

    // Reactance baseline. Ascends |H(X)| with
    // H(X) = Z_RT - Z_RS (Z_SS + diag(j X))^-1 Z_ST using the same +/- step
    // rule on X; the recorded gain is the scattering-form channel gain of the
    // full network with loads j X_k.
    struct ReactanceFirstOrder
    {
        cdouble h;
        CVector c; // dH/dX_k
    };

    ReactanceFirstOrder reactance_first_order(const ImpedanceBlocks &zb, const RVector &x,
                                              double condition_cap = default_condition_cap);
    CVector reactance_finite_diff(const ImpedanceBlocks &zb, const RVector &x, double h);

    // Throws InputError when init contains phi = 0 (no finite reactance).
    OptimizerTrace zopt_run(const ImpedanceBlocks &zb, const RisLoadState &init,
                            const StepSchedule &schedule = StepSchedule::reactance_default(),
                            const StoppingRule &stop = {});

    struct BruteForceResult
    {
        RisLoadState best;
        double best_gain = 0.0;
    };

    // Exhaustive search over phi_k in {2 pi i / levels}. Ties go to the lowest
    // lexicographic index. Throws BudgetExceeded when levels^n_s > budget.
    BruteForceResult brute_force_phases(const ScatteringBlocks &blocks, int levels, double budget = 1e7);
}
