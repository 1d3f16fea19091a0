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

#include "risnet/channel.hpp"

#include <cmath>
#include <string>

#include "linalg.hpp"

namespace risnet
{
    Termination Termination::matched(const PortPartition &p, CVector gamma_s, CVector a_g)
    {
        Termination t;
        t.gamma_t = CVector::Zero(p.n_t);
        t.gamma_s = std::move(gamma_s);
        t.gamma_r = CVector::Zero(p.n_r);
        t.a_g = std::move(a_g);
        t.validate(p);
        return t;
    }

    void Termination::validate(const PortPartition &p) const
    {
        p.validate();
        if (gamma_t.size() != p.n_t || gamma_s.size() != p.n_s || gamma_r.size() != p.n_r || a_g.size() != p.n_t)
            throw DimensionMismatch("termination sizes do not match port partition");
        if (!gamma_t.allFinite() || !gamma_s.allFinite() || !gamma_r.allFinite() || !a_g.allFinite())
            throw InputError("termination has non-finite entries");
    }

    cdouble EndToEndChannel::scalar() const
    {
        if (h.rows() != 1 || h.cols() != 1)
            throw DimensionMismatch("channel is not SISO");
        return h(0, 0);
    }

    EndToEndChannel e2e_s(const ScatteringBlocks &blocks, const CVector &gamma_s, double condition_cap)
    {
        const Index ns = blocks.partition.n_s;
        if (gamma_s.size() != ns)
            throw DimensionMismatch("gamma_s has " + std::to_string(gamma_s.size()) + " entries, expected " +
                                    std::to_string(ns));

        // (U - S_SS Gamma) X = S_ST
        CMatrix loop = -blocks.ss * gamma_s.asDiagonal();
        loop.diagonal().array() += 1.0;
        auto lu = detail::checked_lu<ResonantConfiguration>(loop, condition_cap, "e2e_s: U - S_SS Gamma_S");
        const CMatrix x = lu.solve(blocks.st);

        EndToEndChannel out;
        out.h = blocks.rt + blocks.rs * (gamma_s.asDiagonal() * x);
        out.representation = Representation::SParam;
        return out;
    }

    EndToEndChannel e2e_z_matched(const ImpedanceBlocks &blocks, double condition_cap)
    {
        CMatrix m = blocks.ss;
        m.diagonal().array() += blocks.z0;
        auto lu = detail::checked_lu<SingularConversion>(m, condition_cap, "e2e_z_matched: Z_SS + z0 U");

        EndToEndChannel out;
        out.h = blocks.rt - blocks.rs * lu.solve(blocks.st);
        out.representation = Representation::ZParamMatched;
        return out;
    }

    cdouble estimate_normalization(const ImpedanceBlocks &reference, double condition_cap)
    {
        if (!reference.is_siso())
            throw DimensionMismatch("normalization is estimated on a SISO network");
        const cdouble hz = e2e_z_matched(reference, condition_cap).scalar();
        if (hz == cdouble(0.0))
            throw NumericalError("reference network has a vanishing impedance-form channel");

        const auto s = partition_scattering(z_to_s(reassemble(reference), condition_cap), reference.partition);
        const cdouble hs = e2e_s(s, CVector::Zero(reference.partition.n_s), condition_cap).scalar();
        return hs / hz;
    }

    cdouble structural_scattering(const ImpedanceBlocks &blocks)
    {
        if (!blocks.is_siso())
            throw DimensionMismatch("structural scattering is defined for SISO links");
        return -(blocks.rs * blocks.st)(0, 0) / (2.0 * blocks.z0);
    }

    ImpedanceBlocks without_direct_link(ImpedanceBlocks blocks)
    {
        blocks.rt.setZero();
        return blocks;
    }

    ImpedanceBlocks with_decoupled_ris(ImpedanceBlocks blocks)
    {
        blocks.ss = CMatrix::Identity(blocks.ss.rows(), blocks.ss.cols()) * blocks.z0;
        return blocks;
    }

    ImpedanceBlocks unilateral(ImpedanceBlocks blocks)
    {
        blocks.ts.setZero();
        blocks.tr.setZero();
        blocks.sr.setZero();
        return blocks;
    }

    NetworkSolution solve_network(const FullNetworkMatrix &s, const PortPartition &p, const Termination &t,
                                  double condition_cap)
    {
        if (s.kind() != ParamKind::Scattering)
            throw InputError("solve_network expects a scattering matrix");
        p.validate();
        if (s.size() != p.total())
            throw DimensionMismatch("scattering matrix does not match port partition");
        t.validate(p);

        const Index n = p.total();
        CVector gamma(n);
        gamma << t.gamma_t, t.gamma_s, t.gamma_r;

        // Unknowns x = [a; b]:
        //   -S a + b        = 0
        //    a   - Gamma b  = [a_g; 0; 0]
        CMatrix system = CMatrix::Zero(2 * n, 2 * n);
        system.topLeftCorner(n, n) = -s.entries();
        system.topRightCorner(n, n).setIdentity();
        system.bottomLeftCorner(n, n).setIdentity();
        system.bottomRightCorner(n, n).diagonal() = -gamma;

        CVector rhs = CVector::Zero(2 * n);
        rhs.segment(n + p.offset_t(), p.n_t) = t.a_g;

        auto lu = detail::checked_lu<SingularNetwork>(system, condition_cap, "solve_network");
        const CVector x = lu.solve(rhs);

        NetworkSolution sol;
        sol.partition = p;
        sol.a = x.head(n);
        sol.b = x.tail(n);
        return sol;
    }

    double gain(const EndToEndChannel &h)
    {
        return h.h.squaredNorm();
    }
}
