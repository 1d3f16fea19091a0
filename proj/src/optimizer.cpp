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

#include "risnet/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "linalg.hpp"

namespace risnet
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        CVector unit_phasors(const RVector &phases)
        {
            CVector out(phases.size());
            for (Index k = 0; k < phases.size(); ++k)
                out[k] = std::polar(1.0, phases[k]);
            return out;
        }

        void require_siso(const PortPartition &p)
        {
            if (p.n_t != 1 || p.n_r != 1)
                throw DimensionMismatch("optimizer expects a SISO link (one transmitter and one receiver port)");
        }

        void require_state(const PortPartition &p, Index n)
        {
            if (n != p.n_s)
                throw DimensionMismatch("load state has " + std::to_string(n) + " elements, expected " +
                                        std::to_string(p.n_s));
        }

        // Shared loop of both ascent methods. `propose` maps (variables, step)
        // to new variables, `evaluate` returns the physical gain.
        template <class Propose, class Evaluate>
        OptimizerTrace ascend(RVector vars, const StepSchedule &schedule, const StoppingRule &stop, Propose propose,
                              Evaluate evaluate, RVector &final_vars)
        {
            const auto started = std::chrono::steady_clock::now();

            OptimizerTrace trace;
            double g = evaluate(vars);
            trace.records.push_back({0, g, 0.0, true});
            trace.stop_reason = StopReason::IterationBudgetExhausted;

            double step = schedule.delta0;
            for (int m = 1; m <= stop.max_iterations; ++m)
            {
                RVector candidate = propose(vars, step);
                const double gc = evaluate(candidate);
                const bool accepted = !schedule.greedy_safeguard || gc >= g;
                if (accepted)
                {
                    vars = std::move(candidate);
                    g = gc;
                }
                trace.records.push_back({m, g, step, accepted});

                if (!accepted)
                    step *= schedule.shrink;
                step = std::max(step * schedule.decay, schedule.min_delta);

                if (m >= stop.window)
                {
                    const double g_old = trace.records[static_cast<std::size_t>(m - stop.window)].gain;
                    if (std::abs(g - g_old) <= stop.rel_tol * std::abs(g))
                    {
                        trace.stop_reason = StopReason::Converged;
                        break;
                    }
                }
            }

            final_vars = std::move(vars);
            trace.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            return trace;
        }

        // Fixed probe network for the derivative sign check.
        ScatteringBlocks probe_network()
        {
            std::mt19937_64 rng(20240611);
            std::normal_distribution<double> normal(0.0, 1.0);
            const PortPartition p = PortPartition::siso(4);
            CMatrix s(p.total(), p.total());
            for (Index r = 0; r < s.rows(); ++r)
                for (Index c = 0; c <= r; ++c)
                    s(r, c) = s(c, r) = cdouble(normal(rng), normal(rng));
            const double norm = Eigen::JacobiSVD<CMatrix>(s).singularValues()(0);
            s *= 0.8 / norm;
            return partition_scattering(FullNetworkMatrix(ParamKind::Scattering, s), p);
        }
    }

    double wrap_phase(double phi)
    {
        double w = std::remainder(phi, 2.0 * pi);
        if (w <= -pi)
            w += 2.0 * pi;
        return w;
    }

    RisLoadState::RisLoadState(RVector phases) : phases_(std::move(phases))
    {
        for (Index k = 0; k < phases_.size(); ++k)
        {
            if (!std::isfinite(phases_[k]))
                throw InputError("RIS phase must be finite");
            phases_[k] = wrap_phase(phases_[k]);
        }
    }

    RisLoadState RisLoadState::zeros(Index n)
    {
        return RisLoadState(RVector::Zero(n));
    }

    RisLoadState RisLoadState::short_circuit(Index n)
    {
        return RisLoadState(RVector::Constant(n, pi));
    }

    RisLoadState RisLoadState::random(Index n, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uniform(-pi, pi);
        RVector phases(n);
        for (Index k = 0; k < n; ++k)
            phases[k] = uniform(rng);
        return RisLoadState(std::move(phases));
    }

    RisLoadState RisLoadState::from_reactances(const RVector &x, double z0)
    {
        RVector phases(x.size());
        for (Index k = 0; k < x.size(); ++k)
        {
            if (std::isnan(x[k]))
                throw InputError("reactance must not be NaN");
            phases[k] = 2.0 * std::atan2(1.0, x[k] / z0);
        }
        return RisLoadState(std::move(phases));
    }

    CVector RisLoadState::reflection() const
    {
        return unit_phasors(phases_);
    }

    RVector RisLoadState::reactances(double z0) const
    {
        RVector x(phases_.size());
        for (Index k = 0; k < phases_.size(); ++k)
        {
            const double half = 0.5 * phases_[k];
            x[k] = half == 0.0 ? HUGE_VAL : z0 / std::tan(half);
        }
        return x;
    }

    FirstOrderQuantities first_order(const ScatteringBlocks &blocks, const RisLoadState &state, DerivativeSign sign,
                                     bool include_p, double condition_cap)
    {
        require_siso(blocks.partition);
        require_state(blocks.partition, state.size());

        const CVector sigma = state.reflection();
        const CVector sigma_inv = sigma.cwiseInverse();

        FirstOrderQuantities out;
        out.q = -blocks.ss;
        out.q.diagonal() += sigma_inv;
        auto lu = detail::checked_lu<ResonantConfiguration>(out.q, condition_cap, "first_order: Gamma^-1 - S_SS");

        const cdouble j_sign = sign == DerivativeSign::PlusJ ? cdouble(0.0, 1.0) : cdouble(0.0, -1.0);
        // Gamma^-2 e^{j phi} = diag(e^{-j phi})
        const CVector scale = j_sign * sigma_inv.cwiseProduct(sigma_inv).cwiseProduct(sigma);

        out.b2 = lu.solve(blocks.st).col(0);
        out.a = blocks.rt(0, 0) + (blocks.rs * out.b2)(0, 0);

        // S_RS Q^-1 as a column: Q^T w = S_RS^T
        const CVector w = lu.transpose().solve(CVector(blocks.rs.transpose()));
        out.b1 = w.cwiseProduct(scale);
        out.c = out.b1.cwiseProduct(out.b2);

        if (include_p)
            out.p = lu.solve(CMatrix(scale.asDiagonal()));
        return out;
    }

    CVector finite_diff_gradient(const ScatteringBlocks &blocks, const RisLoadState &state, double h)
    {
        if (!(h >= 1e-8 && h <= 1e-3))
            throw InputError("finite difference step must lie in [1e-8, 1e-3]");
        require_siso(blocks.partition);
        require_state(blocks.partition, state.size());

        const RVector &phi = state.phases();
        CVector grad(phi.size());
        for (Index k = 0; k < phi.size(); ++k)
        {
            RVector up = phi, down = phi;
            up[k] += h;
            down[k] -= h;
            const cdouble hp = e2e_s(blocks, unit_phasors(up)).scalar();
            const cdouble hm = e2e_s(blocks, unit_phasors(down)).scalar();
            grad[k] = (hp - hm) / (2.0 * h);
        }
        return grad;
    }

    SignProbe probe_derivative_sign()
    {
        const ScatteringBlocks blocks = probe_network();
        const RisLoadState state = RisLoadState::random(blocks.partition.n_s, 7);
        const CVector fd = finite_diff_gradient(blocks, state, 1e-5);

        auto mismatch = [&](DerivativeSign sign) {
            const CVector c = first_order(blocks, state, sign, false).c;
            double worst = 0.0;
            for (Index k = 0; k < c.size(); ++k)
                worst = std::max(worst, std::abs(c[k] - fd[k]) / std::abs(fd[k]));
            return worst;
        };

        SignProbe probe;
        probe.error_minus_j = mismatch(DerivativeSign::MinusJ);
        probe.error_plus_j = mismatch(DerivativeSign::PlusJ);
        constexpr double tol = 1e-6;
        if (probe.error_plus_j <= tol && probe.error_plus_j <= probe.error_minus_j)
            probe.chosen = DerivativeSign::PlusJ;
        else if (probe.error_minus_j <= tol)
            probe.chosen = DerivativeSign::MinusJ;
        else
            throw NumericalError("neither derivative sign matches finite differences on the probe network");
        return probe;
    }

    DerivativeSign resolved_derivative_sign()
    {
        static const DerivativeSign sign = probe_derivative_sign().chosen;
        return sign;
    }

    double channel_gain(const ScatteringBlocks &blocks, const RisLoadState &state)
    {
        require_state(blocks.partition, state.size());
        return gain(e2e_s(blocks, state.reflection()));
    }

    double uncoupled_optimum_gain(const ScatteringBlocks &blocks)
    {
        require_siso(blocks.partition);
        double amplitude = std::abs(blocks.rt(0, 0));
        for (Index k = 0; k < blocks.partition.n_s; ++k)
            amplitude += std::abs(blocks.rs(0, k) * blocks.st(k, 0));
        return amplitude * amplitude;
    }

    void StepSchedule::validate(double max_delta0) const
    {
        if (!(delta0 > 0.0) || delta0 > max_delta0)
            throw ConfigError("initial step must lie in (0, " + std::to_string(max_delta0) + "]");
        if (!(decay > 0.0) || decay > 1.0)
            throw ConfigError("step decay must lie in (0, 1]");
        if (!(min_delta > 0.0) || min_delta > delta0)
            throw ConfigError("step floor must lie in (0, delta0]");
        if (!(shrink > 0.0) || shrink > 1.0)
            throw ConfigError("rejection shrink factor must lie in (0, 1]");
    }

    void StoppingRule::validate() const
    {
        if (max_iterations < 0)
            throw ConfigError("max_iterations must be non-negative");
        if (window < 1)
            throw ConfigError("stopping window must be at least 1");
        if (!(rel_tol >= 0.0))
            throw ConfigError("stopping tolerance must be non-negative");
    }

    int OptimizerTrace::iterations_to_fraction(double fraction) const
    {
        const double target = fraction * final_gain();
        for (const TraceRecord &r : records)
            if (r.gain >= target)
                return r.iteration;
        return iterations();
    }

    PhaseStep sopt_step(const ScatteringBlocks &blocks, const RisLoadState &state, double step, DerivativeSign sign)
    {
        if (!(step > 0.0))
            throw InputError("step must be positive");
        const FirstOrderQuantities fo = first_order(blocks, state, sign, false);

        PhaseStep out;
        out.delta.resize(state.size());
        for (Index k = 0; k < state.size(); ++k)
            out.delta[k] = std::abs(fo.a + fo.c[k] * step) >= std::abs(fo.a - fo.c[k] * step) ? step : -step;
        out.state = RisLoadState(state.phases() + out.delta);
        return out;
    }

    OptimizerTrace sopt_run(const ScatteringBlocks &blocks, const RisLoadState &init, const StepSchedule &schedule,
                            const StoppingRule &stop)
    {
        require_siso(blocks.partition);
        require_state(blocks.partition, init.size());
        schedule.validate(0.2);
        stop.validate();

        const DerivativeSign sign = resolved_derivative_sign();
        auto propose = [&](const RVector &phi, double step) -> RVector {
            return sopt_step(blocks, RisLoadState(phi), step, sign).state.phases();
        };
        auto evaluate = [&](const RVector &phi) { return channel_gain(blocks, RisLoadState(phi)); };

        RVector final_phases;
        OptimizerTrace trace = ascend(init.phases(), schedule, stop, propose, evaluate, final_phases);
        trace.final_state = RisLoadState(std::move(final_phases));
        return trace;
    }

    OptimizerTrace sopt_multistart(const ScatteringBlocks &blocks, int random_starts, std::uint64_t seed,
                                   const StepSchedule &schedule, const StoppingRule &stop)
    {
        if (random_starts < 0)
            throw InputError("random_starts must be non-negative");
        const Index n = blocks.partition.n_s;
        OptimizerTrace best = sopt_run(blocks, RisLoadState::zeros(n), schedule, stop);
        for (int i = 0; i < random_starts; ++i)
        {
            OptimizerTrace t = sopt_run(blocks, RisLoadState::random(n, seed + static_cast<std::uint64_t>(i)),
                                        schedule, stop);
            if (t.final_gain() > best.final_gain())
                best = std::move(t);
        }
        return best;
    }

    ReactanceFirstOrder reactance_first_order(const ImpedanceBlocks &zb, const RVector &x, double condition_cap)
    {
        require_siso(zb.partition);
        require_state(zb.partition, x.size());

        CMatrix m = zb.ss;
        m.diagonal() += cdouble(0.0, 1.0) * x.cast<cdouble>();
        auto lu = detail::checked_lu<ResonantConfiguration>(m, condition_cap, "reactance ascent: Z_SS + j X");

        const CVector right = lu.solve(zb.st).col(0);
        const CVector left = lu.transpose().solve(CVector(zb.rs.transpose()));

        ReactanceFirstOrder out;
        out.h = zb.rt(0, 0) - (zb.rs * right)(0, 0);
        out.c = cdouble(0.0, 1.0) * left.cwiseProduct(right);
        return out;
    }

    CVector reactance_finite_diff(const ImpedanceBlocks &zb, const RVector &x, double h)
    {
        if (!(h > 0.0))
            throw InputError("finite difference step must be positive");
        CVector grad(x.size());
        for (Index k = 0; k < x.size(); ++k)
        {
            RVector up = x, down = x;
            up[k] += h;
            down[k] -= h;
            grad[k] = (reactance_first_order(zb, up).h - reactance_first_order(zb, down).h) / (2.0 * h);
        }
        return grad;
    }

    OptimizerTrace zopt_run(const ImpedanceBlocks &zb, const RisLoadState &init, const StepSchedule &schedule,
                            const StoppingRule &stop)
    {
        require_siso(zb.partition);
        require_state(zb.partition, init.size());
        schedule.validate(HUGE_VAL);
        stop.validate();

        const RVector x0 = init.reactances(zb.z0);
        if (!x0.allFinite())
            throw InputError("reactance ascent needs finite initial reactances (phase 0 is an open circuit)");

        const ScatteringBlocks sb = partition_scattering(z_to_s(reassemble(zb)), zb.partition);
        const double z0 = zb.z0;

        auto propose = [&](const RVector &x, double step) -> RVector {
            const ReactanceFirstOrder fo = reactance_first_order(zb, x);
            RVector next = x;
            for (Index k = 0; k < x.size(); ++k)
                next[k] += std::abs(fo.h + fo.c[k] * step) >= std::abs(fo.h - fo.c[k] * step) ? step : -step;
            return next;
        };
        auto evaluate = [&](const RVector &x) {
            CVector gamma(x.size());
            for (Index k = 0; k < x.size(); ++k)
                gamma[k] = reflection_coefficient(cdouble(0.0, x[k]), z0);
            return gain(e2e_s(sb, gamma));
        };

        RVector final_x;
        OptimizerTrace trace = ascend(x0, schedule, stop, propose, evaluate, final_x);
        trace.final_state = RisLoadState::from_reactances(final_x, z0);
        return trace;
    }

    BruteForceResult brute_force_phases(const ScatteringBlocks &blocks, int levels, double budget)
    {
        require_siso(blocks.partition);
        if (levels < 1)
            throw InputError("levels must be at least 1");
        const Index n = blocks.partition.n_s;
        if (std::pow(static_cast<double>(levels), static_cast<double>(n)) > budget)
            throw BudgetExceeded("levels^n_s = " + std::to_string(levels) + "^" + std::to_string(n) +
                                 " exceeds the enumeration budget");

        CVector table(levels);
        for (int i = 0; i < levels; ++i)
            table[i] = std::polar(1.0, 2.0 * pi * i / levels);

        std::vector<int> index(static_cast<std::size_t>(n), 0);
        std::vector<int> best_index = index;
        CVector gamma(n);
        double best = -1.0;
        while (true)
        {
            for (Index k = 0; k < n; ++k)
                gamma[k] = table[index[static_cast<std::size_t>(k)]];
            const double g = gain(e2e_s(blocks, gamma));
            if (g > best)
            {
                best = g;
                best_index = index;
            }

            // odometer, last element fastest
            Index k = n - 1;
            while (k >= 0 && ++index[static_cast<std::size_t>(k)] == levels)
                index[static_cast<std::size_t>(k--)] = 0;
            if (k < 0)
                break;
        }

        RVector phases(n);
        for (Index k = 0; k < n; ++k)
            phases[k] = 2.0 * pi * best_index[static_cast<std::size_t>(k)] / levels;
        return {RisLoadState(std::move(phases)), best};
    }
}
