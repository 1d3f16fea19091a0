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


#include <doctest.h>

#include <random>

#include "risnet/experiment.hpp"
#include "risnet/optimizer.hpp"
#include "support/oracles.hpp"

using namespace risnet;

namespace
{
    constexpr cdouble j{0.0, 1.0};
    constexpr double pi = oracle::pi;

    ScatteringBlocks random_blocks(std::mt19937_64 &rng, Index n_s, double norm = 0.9)
    {
        const PortPartition p = PortPartition::siso(n_s);
        return partition_scattering(FullNetworkMatrix(ParamKind::Scattering, oracle::passive(rng, p.total(), norm)), p);
    }

    // One RIS element, no surface self-reflection, unit links.
    ScatteringBlocks scalar_scene(cdouble s_rt)
    {
        CMatrix s = CMatrix::Zero(3, 3);
        s(2, 0) = s(0, 2) = s_rt;
        s(1, 0) = s(0, 1) = 1.0;
        s(2, 1) = s(1, 2) = 1.0;
        return partition_scattering(FullNetworkMatrix(ParamKind::Scattering, s), PortPartition::siso(1));
    }

    double max_rel(const CVector &a, const CVector &b)
    {
        return ((a - b).cwiseAbs().array() / b.cwiseAbs().array()).maxCoeff();
    }
}

TEST_CASE("phase wrapping")
{
    CHECK(wrap_phase(pi) == pi);
    CHECK(wrap_phase(-pi) == pi);
    CHECK(wrap_phase(3.0 * pi) == doctest::Approx(pi));
    CHECK(wrap_phase(0.25) == 0.25);
    CHECK(wrap_phase(-0.25 - 4.0 * pi) == doctest::Approx(-0.25));
    for (double phi : {-10.0, -3.2, 0.0, 1.0, 3.1, 7.0, 100.0})
    {
        const double w = wrap_phase(phi);
        CHECK(w > -pi);
        CHECK(w <= pi);
    }
}

TEST_CASE("load state representations are consistent")
{
    const RisLoadState s = RisLoadState::random(64, 3);
    const CVector sigma = s.reflection();
    const RVector x = s.reactances(50.0);
    for (Index k = 0; k < s.size(); ++k)
    {
        CHECK(std::abs(std::abs(sigma[k]) - 1.0) <= 1e-15);
        const cdouble xt = j * x[k] / 50.0;
        CHECK(std::abs((xt - 1.0) / (xt + 1.0) - sigma[k]) <= 1e-12);
    }
    CHECK((RisLoadState::from_reactances(x, 50.0).phases() - s.phases()).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK(std::isinf(RisLoadState::zeros(1).reactances()[0]));
    CHECK(std::abs(RisLoadState::short_circuit(1).reactances()[0]) <= 1e-12);
    CHECK(RisLoadState::random(10, 7).phases() == RisLoadState::random(10, 7).phases());
    CHECK(RisLoadState::random(10, 7).phases() != RisLoadState::random(10, 8).phases());
    CHECK_THROWS_AS(RisLoadState(RVector::Constant(2, std::nan(""))), InputError);
}

TEST_CASE("first-order quantities of the scalar scene")
{
    const ScatteringBlocks b = scalar_scene(0.3);
    const RisLoadState zero = RisLoadState::zeros(1);
    const FirstOrderQuantities plus = first_order(b, zero, DerivativeSign::PlusJ);
    CHECK(std::abs(plus.q(0, 0) - 1.0) <= 1e-15);
    CHECK(std::abs(plus.a - 1.3) <= 1e-15);
    CHECK(std::abs(plus.c[0] - j) <= 1e-15);
    CHECK(std::abs(first_order(b, zero, DerivativeSign::MinusJ).c[0] + j) <= 1e-15);
    CHECK(first_order(b, zero, DerivativeSign::PlusJ, false).p.size() == 0);

    // d/dphi of S_RS e^{j phi} S_ST is j e^{j phi}.
    const RisLoadState s(RVector::Constant(1, 0.7));
    CHECK(std::abs(finite_diff_gradient(b, s, 1e-4)[0] - j * std::polar(1.0, 0.7)) <= 1e-8);
}

TEST_CASE("derivative sign probe picks +j")
{
    const SignProbe probe = probe_derivative_sign();
    CHECK(probe.chosen == DerivativeSign::PlusJ);
    CHECK(probe.error_plus_j <= 1e-6);
    CHECK(probe.error_minus_j >= 1.0);
    CHECK(resolved_derivative_sign() == DerivativeSign::PlusJ);
}

TEST_CASE("first-order coefficients match finite differences")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial)
    {
        const ScatteringBlocks b = random_blocks(rng, 8);
        const RisLoadState s = RisLoadState::random(8, 100 + trial);
        const FirstOrderQuantities fo = first_order(b, s, resolved_derivative_sign());
        CHECK(std::abs(fo.a - e2e_s(b, s.reflection()).scalar()) <= 1e-12 * std::abs(fo.a));
        CHECK(max_rel(fo.c, finite_diff_gradient(b, s, 1e-6)) <= 1e-6);
        CHECK((fo.b1.cwiseProduct(fo.b2) - fo.c).norm() <= 1e-15 * fo.c.norm());
        CHECK(fo.p.rows() == 8);

        // Periodicity in every phase.
        RVector shifted = s.phases();
        shifted[trial % 8] += 2.0 * pi;
        const FirstOrderQuantities again = first_order(b, RisLoadState(shifted), resolved_derivative_sign());
        CHECK(std::abs(again.a - fo.a) <= 1e-13 * std::abs(fo.a));
        CHECK((again.c - fo.c).norm() <= 1e-12 * fo.c.norm());
    }

    const ScatteringBlocks b = random_blocks(rng, 4);
    CHECK_THROWS_AS(finite_diff_gradient(b, RisLoadState::zeros(4), 1e-2), InputError);
    CHECK_THROWS_AS(finite_diff_gradient(b, RisLoadState::zeros(4), 1e-9), InputError);
}

TEST_CASE("step rule")
{
    const double d = 0.01;
    // A = 1, C = 1: phi = -pi/2 puts j e^{j phi} at 1; S_RT cancels the -j.
    CHECK(sopt_step(scalar_scene(cdouble(1.0, 1.0)), RisLoadState(RVector::Constant(1, -pi / 2)), d).delta[0] == d);
    // A = 1, C = -1.
    CHECK(sopt_step(scalar_scene(cdouble(1.0, -1.0)), RisLoadState(RVector::Constant(1, pi / 2)), d).delta[0] == -d);
    // A = 1, C = j: a tie resolves to +step.
    CHECK(sopt_step(scalar_scene(0.0), RisLoadState::zeros(1), d).delta[0] == d);

    std::mt19937_64 rng(2);
    const ScatteringBlocks b = random_blocks(rng, 12);
    const RisLoadState s(RVector::Constant(12, pi - 0.001));
    const PhaseStep step = sopt_step(b, s, 0.05);
    for (Index k = 0; k < 12; ++k)
    {
        CHECK(std::abs(step.delta[k]) == 0.05);
        CHECK(step.state.phases()[k] > -pi);
        CHECK(step.state.phases()[k] <= pi);
    }
    CHECK_THROWS_AS(sopt_step(b, s, 0.0), InputError);
}

TEST_CASE("ascent on uncoupled surfaces reaches the co-phased optimum")
{
    std::mt19937_64 rng(41);
    for (Index n : {1, 5, 20})
    {
        ScatteringBlocks b = random_blocks(rng, n);
        b.ss.setZero();
        const double g_star = oracle::co_phased_gain(b.rt(0, 0), b.rs.row(0).transpose(), b.st.col(0));
        CHECK(uncoupled_optimum_gain(b) == doctest::Approx(g_star).epsilon(1e-12));

        const OptimizerTrace t = sopt_run(b, RisLoadState::zeros(n));
        CHECK(t.final_gain() >= 0.999 * g_star);
        CHECK(t.final_gain() <= g_star * (1.0 + 1e-12));
        for (std::size_t i = 1; i < t.records.size(); ++i)
            CHECK(t.records[i].gain >= t.records[i - 1].gain);

        // Starting at the optimum, the safeguard never lets the gain drop.
        RVector opt(n);
        const double target = std::arg(b.rt(0, 0));
        for (Index k = 0; k < n; ++k)
            opt[k] = target - std::arg(b.rs(0, k) * b.st(k, 0));
        const OptimizerTrace at = sopt_run(b, RisLoadState(opt));
        CHECK(at.initial_gain() == doctest::Approx(g_star).epsilon(1e-12));
        for (const TraceRecord &r : at.records)
            CHECK(r.gain >= at.initial_gain());
    }
}

TEST_CASE("small coupled surfaces come within 1% of a 16-level grid")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial)
    {
        const ScatteringBlocks b = random_blocks(rng, 3);
        const BruteForceResult grid = brute_force_phases(b, 16);
        CHECK(sopt_multistart(b, 4).final_gain() >= 0.99 * grid.best_gain);
    }
}

TEST_CASE("multistart keeps the best start")
{
    std::mt19937_64 rng(5);
    const ScatteringBlocks b = random_blocks(rng, 4);
    const OptimizerTrace best = sopt_multistart(b, 3, 10);
    CHECK(best.final_gain() >= sopt_run(b, RisLoadState::zeros(4)).final_gain());
    for (std::uint64_t seed : {10, 11, 12})
        CHECK(best.final_gain() >= sopt_run(b, RisLoadState::random(4, seed)).final_gain());
    CHECK(sopt_multistart(b, 0).final_gain() == sopt_run(b, RisLoadState::zeros(4)).final_gain());
}

TEST_CASE("trace bookkeeping and stopping")
{
    std::mt19937_64 rng(6);
    const ScatteringBlocks b = random_blocks(rng, 6);
    StoppingRule stop;
    stop.max_iterations = 0;
    const OptimizerTrace none = sopt_run(b, RisLoadState::random(6, 1), {}, stop);
    CHECK(none.records.size() == 1);
    CHECK(none.final_state.phases() == RisLoadState::random(6, 1).phases());
    CHECK(none.stop_reason == StopReason::IterationBudgetExhausted);

    stop.max_iterations = 50;
    const OptimizerTrace t = sopt_run(b, RisLoadState::zeros(6), {}, stop);
    CHECK(t.iterations() <= 50);
    CHECK(t.final_gain() == doctest::Approx(channel_gain(b, t.final_state)).epsilon(1e-12));
    CHECK(t.records.front().iteration == 0);
    CHECK(t.records[1].delta == 0.05);
    const int m90 = t.iterations_to_fraction(0.9);
    CHECK(t.records[static_cast<std::size_t>(m90)].gain >= 0.9 * t.final_gain());
    if (m90 > 0)
        CHECK(t.records[static_cast<std::size_t>(m90 - 1)].gain < 0.9 * t.final_gain());

    StepSchedule big;
    big.delta0 = 0.3;
    CHECK_THROWS_AS(sopt_run(b, RisLoadState::zeros(6), big), ConfigError);
    StepSchedule bad_decay;
    bad_decay.decay = 1.5;
    CHECK_THROWS_AS(sopt_run(b, RisLoadState::zeros(6), bad_decay), ConfigError);
    CHECK_THROWS_AS(sopt_run(b, RisLoadState::zeros(5)), DimensionMismatch);
}

TEST_CASE("without the safeguard every step is taken")
{
    std::mt19937_64 rng(8);
    const ScatteringBlocks b = random_blocks(rng, 10, 0.5);
    StepSchedule s;
    s.greedy_safeguard = false;
    StoppingRule stop;
    stop.max_iterations = 200;
    const OptimizerTrace t = sopt_run(b, RisLoadState::zeros(10), s, stop);
    for (const TraceRecord &r : t.records)
        CHECK(r.accepted);
}

TEST_CASE("reactance baseline derivatives")
{
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 5; ++trial)
    {
        const Index n = 6;
        CMatrix z = oracle::gaussian(rng, n + 2, n + 2) * 10.0;
        z = (z + z.transpose()).eval();
        z.diagonal().array() += cdouble(70.0, 0.0);
        const ImpedanceBlocks zb = partition_impedance(FullNetworkMatrix(ParamKind::Impedance, z), PortPartition::siso(n));
        RVector x(n);
        std::uniform_real_distribution<double> u(-80.0, 80.0);
        for (Index k = 0; k < n; ++k)
            x[k] = u(rng);
        const ReactanceFirstOrder fo = reactance_first_order(zb, x);
        CHECK(max_rel(fo.c, reactance_finite_diff(zb, x, 1e-4)) <= 1e-6);
    }
}

TEST_CASE("reactance baseline and phase ascent agree on a decoupled surface")
{
    std::mt19937_64 rng(23);
    const Index n = 6;
    CMatrix z = CMatrix::Zero(n + 2, n + 2);
    z(0, 0) = z(n + 1, n + 1) = cdouble(57.6, -22.7);
    for (Index k = 1; k <= n; ++k)
    {
        z(k, k) = cdouble(57.6, -22.7);
        z(k, 0) = z(0, k) = 0.5 * oracle::gaussian(rng, 1, 1)(0, 0);
        z(n + 1, k) = z(k, n + 1) = 0.5 * oracle::gaussian(rng, 1, 1)(0, 0);
    }
    const ImpedanceBlocks zb = partition_impedance(FullNetworkMatrix(ParamKind::Impedance, z), PortPartition::siso(n));
    const ScatteringBlocks sb = partition_scattering(z_to_s(reassemble(zb)), zb.partition);

    const OptimizerTrace ts = sopt_run(sb, RisLoadState::zeros(n));
    const OptimizerTrace tz = zopt_run(zb, RisLoadState::short_circuit(n));
    CHECK(tz.final_gain() == doctest::Approx(ts.final_gain()).epsilon(0.01));
    CHECK(tz.final_gain() == doctest::Approx(channel_gain(sb, tz.final_state)).epsilon(1e-9));
    for (std::size_t i = 1; i < tz.records.size(); ++i)
        CHECK(tz.records[i].gain >= tz.records[i - 1].gain);

    CHECK_THROWS_AS(zopt_run(zb, RisLoadState::zeros(n)), InputError);
}

TEST_CASE("brute force enumeration")
{
    // Single element, no self-reflection: the best phase aligns with S_RT.
    const ScatteringBlocks one = scalar_scene(std::polar(0.5, 1.0));
    const int levels = 32;
    const BruteForceResult r = brute_force_phases(one, levels);
    CHECK(std::abs(wrap_phase(r.best.phases()[0] - 1.0)) <= pi / levels);

    const BruteForceResult flat = brute_force_phases(one, 1);
    CHECK(flat.best.phases()[0] == 0.0);
    CHECK(flat.best_gain == channel_gain(one, RisLoadState::zeros(1)));

    std::mt19937_64 rng(3);
    const ScatteringBlocks b = random_blocks(rng, 2);
    double best = -1.0;
    int bi = 0, bj = 0;
    for (int i = 0; i < 64; ++i)
        for (int k = 0; k < 64; ++k)
        {
            CVector g(2);
            g << std::polar(1.0, 2.0 * pi * i / 64), std::polar(1.0, 2.0 * pi * k / 64);
            const double v = std::norm(oracle::channel(reassemble(b).entries(), 2, g));
            if (v > best)
                best = v, bi = i, bj = k;
        }
    const BruteForceResult grid = brute_force_phases(b, 64);
    CHECK(grid.best_gain == doctest::Approx(best).epsilon(1e-12));
    CHECK(grid.best.phases()[0] == doctest::Approx(wrap_phase(2.0 * pi * bi / 64)));
    CHECK(grid.best.phases()[1] == doctest::Approx(wrap_phase(2.0 * pi * bj / 64)));

    CHECK_THROWS_AS(brute_force_phases(random_blocks(rng, 6), 16), BudgetExceeded);
    CHECK_THROWS_AS(brute_force_phases(b, 0), InputError);
}

TEST_SUITE("first-order-validity")
{
    // Without the safeguard every proposed step is taken; on the dipole
    // scenes the gain should still rise on at least 95% of the iterations.
    TEST_CASE("unsafeguarded ascent mostly increases the gain on the dipole scenes")
    {
        for (double q : {4.0, 8.0, 16.0})
        {
            SceneConfig cfg;
            cfg.q_divisor = q;
            const PreparedScene ps = prepare_scene(cfg);
            StepSchedule s;
            s.greedy_safeguard = false;
            const OptimizerTrace t = sopt_run(ps.sb, RisLoadState::zeros(ps.sb.partition.n_s), s);
            int up = 0;
            for (std::size_t i = 1; i < t.records.size(); ++i)
                up += t.records[i].gain > t.records[i - 1].gain;
            const double share = static_cast<double>(up) / static_cast<double>(t.records.size() - 1);
            INFO("d_y = lambda/" << q << ": " << up << " of " << t.records.size() - 1 << " iterations increase G");
            CHECK(share >= 0.95);
        }
    }
}
