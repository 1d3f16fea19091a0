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

#include <cmath>
#include <optional>

#include "risnet/netparams.hpp"

namespace risnet
{
    // Port terminations in reflection-coefficient form. The gamma vectors hold
    // the diagonals of Gamma_T, Gamma_S and Gamma_R; a_g is the source power
    // wave vector at the transmitter ports.
    struct Termination
    {
        CVector gamma_t;
        CVector gamma_s;
        CVector gamma_r;
        CVector a_g;

        // Matched transmitter and receiver (Gamma_T = Gamma_R = 0).
        static Termination matched(const PortPartition &p, CVector gamma_s, CVector a_g);

        void validate(const PortPartition &p) const;
    };

    struct NetworkSolution
    {
        PortPartition partition;
        CVector a; // incident power waves, length N
        CVector b; // reflected power waves, length N

        auto a_t() const { return a.segment(partition.offset_t(), partition.n_t); }
        auto a_s() const { return a.segment(partition.offset_s(), partition.n_s); }
        auto a_r() const { return a.segment(partition.offset_r(), partition.n_r); }
        auto b_t() const { return b.segment(partition.offset_t(), partition.n_t); }
        auto b_s() const { return b.segment(partition.offset_s(), partition.n_s); }
        auto b_r() const { return b.segment(partition.offset_r(), partition.n_r); }
    };

    enum class Representation
    {
        SParam,
        ZParamMatched
    };

    struct EndToEndChannel
    {
        CMatrix h; // n_r x n_t
        Representation representation = Representation::SParam;
        std::optional<cdouble> normalization;

        // The single entry of a SISO channel.
        cdouble scalar() const;
    };

    // H = S_RT + S_RS Gamma_S (U - S_SS Gamma_S)^-1 S_ST with matched tx/rx.
    // Throws ResonantConfiguration when U - S_SS Gamma_S is numerically singular.
    EndToEndChannel e2e_s(const ScatteringBlocks &blocks, const CVector &gamma_s,
                          double condition_cap = default_condition_cap);

    // Impedance-form channel with RIS ports terminated at z0:
    // Z_RT - Z_RS (Z_SS + z0 U)^-1 Z_ST. The result is not normalized; its
    // ratio to the scattering form is the normalization constant.
    EndToEndChannel e2e_z_matched(const ImpedanceBlocks &blocks, double condition_cap = default_condition_cap);

    // Ratio e2e_s(z_to_s(Z), 0) / e2e_z_matched(Z) measured on a SISO
    // reference network.
    cdouble estimate_normalization(const ImpedanceBlocks &reference, double condition_cap = default_condition_cap);

    // Structural scattering of an uncoupled, matched RIS without direct link:
    // -Z_RS Z_ST / (2 z0), i.e. the impedance form with Z_RT = 0 and
    // Z_SS = z0 U. Multiply by the normalization constant for the S-domain
    // value. SISO only.
    cdouble structural_scattering(const ImpedanceBlocks &blocks);

    // Z_RT := 0 (direct link blocked).
    ImpedanceBlocks without_direct_link(ImpedanceBlocks blocks);

    // Z_SS := z0 U (no mutual coupling, RIS self impedances matched).
    ImpedanceBlocks with_decoupled_ris(ImpedanceBlocks blocks);

    // Drops the backward couplings Z_TS, Z_TR and Z_SR. Under this unilateral
    // model the impedance form is exactly proportional to the scattering form.
    ImpedanceBlocks unilateral(ImpedanceBlocks blocks);

    // Solves b = S a together with the termination relations as one dense
    // 2N x 2N system in (a, b). Throws SingularNetwork.
    NetworkSolution solve_network(const FullNetworkMatrix &s, const PortPartition &p, const Termination &t,
                                  double condition_cap = default_condition_cap);

    // |H|^2 (squared Frobenius norm for MIMO channels).
    double gain(const EndToEndChannel &h);

    inline double gain_db(double g) { return 10.0 * std::log10(g); }
}
