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

#include "risnet/netparams.hpp"

#include <cmath>
#include <string>

#include "linalg.hpp"

namespace risnet
{
    void PortPartition::validate() const
    {
        if (n_t < 1 || n_s < 1 || n_r < 1)
            throw DimensionMismatch("port partition requires at least one port per group, got (" +
                                    std::to_string(n_t) + ", " + std::to_string(n_s) + ", " +
                                    std::to_string(n_r) + ")");
    }

    const char *to_string(ParamKind kind) noexcept
    {
        return kind == ParamKind::Scattering ? "scattering" : "impedance";
    }

    FullNetworkMatrix::FullNetworkMatrix(ParamKind kind, CMatrix entries, double z0)
        : kind_(kind), entries_(std::move(entries)), z0_(z0)
    {
        if (entries_.rows() != entries_.cols())
            throw DimensionMismatch("network matrix must be square, got " + std::to_string(entries_.rows()) +
                                    "x" + std::to_string(entries_.cols()));
        if (entries_.rows() == 0)
            throw DimensionMismatch("network matrix must not be empty");
        if (!entries_.allFinite())
            throw InputError("network matrix has non-finite entries");
        if (!(z0_ > 0.0) || !std::isfinite(z0_))
            throw InputError("reference impedance must be positive and finite");
    }

    FullNetworkMatrix z_to_s(const FullNetworkMatrix &z, double condition_cap)
    {
        if (z.kind() != ParamKind::Impedance)
            throw InputError("z_to_s expects an impedance matrix");

        const Index n = z.size();
        const CMatrix eye = CMatrix::Identity(n, n);
        const CMatrix plus = z.entries() + z.z0() * eye;
        const CMatrix minus = z.entries() - z.z0() * eye;

        // S (Z + z0 U) = (Z - z0 U)  <=>  (Z + z0 U)^T S^T = (Z - z0 U)^T
        const CMatrix plus_t = plus.transpose();
        auto lu = detail::checked_lu<SingularConversion>(plus_t, condition_cap, "z_to_s: Z + z0 U");
        CMatrix s = lu.solve(CMatrix(minus.transpose())).transpose();
        return FullNetworkMatrix(ParamKind::Scattering, std::move(s), z.z0());
    }

    FullNetworkMatrix s_to_z(const FullNetworkMatrix &s, double condition_cap)
    {
        if (s.kind() != ParamKind::Scattering)
            throw InputError("s_to_z expects a scattering matrix");

        const Index n = s.size();
        const CMatrix eye = CMatrix::Identity(n, n);
        const CMatrix minus_t = (eye - s.entries()).transpose();
        auto lu = detail::checked_lu<SingularConversion>(minus_t, condition_cap, "s_to_z: U - S");
        CMatrix z = s.z0() * lu.solve(CMatrix((eye + s.entries()).transpose())).transpose();
        return FullNetworkMatrix(ParamKind::Impedance, std::move(z), s.z0());
    }

    cdouble reflection_coefficient(cdouble z_load, double z0)
    {
        const cdouble denom = z_load + z0;
        if (denom == cdouble(0.0, 0.0))
            throw DegenerateLoad("load impedance equals -z0; reflection coefficient undefined");
        return (z_load - z0) / denom;
    }

    namespace
    {
        template <ParamKind Kind>
        NetworkBlocks<Kind> split(const FullNetworkMatrix &m, const PortPartition &p)
        {
            p.validate();
            if (m.kind() != Kind)
                throw InputError(std::string("expected a ") + to_string(Kind) + " matrix, got " + to_string(m.kind()));
            if (m.size() != p.total())
                throw DimensionMismatch("matrix dimension " + std::to_string(m.size()) +
                                        " does not match partition total " + std::to_string(p.total()));

            const CMatrix &e = m.entries();
            const Index ot = p.offset_t(), os = p.offset_s(), orr = p.offset_r();
            NetworkBlocks<Kind> b;
            b.partition = p;
            b.z0 = m.z0();
            b.tt = e.block(ot, ot, p.n_t, p.n_t);
            b.ts = e.block(ot, os, p.n_t, p.n_s);
            b.tr = e.block(ot, orr, p.n_t, p.n_r);
            b.st = e.block(os, ot, p.n_s, p.n_t);
            b.ss = e.block(os, os, p.n_s, p.n_s);
            b.sr = e.block(os, orr, p.n_s, p.n_r);
            b.rt = e.block(orr, ot, p.n_r, p.n_t);
            b.rs = e.block(orr, os, p.n_r, p.n_s);
            b.rr = e.block(orr, orr, p.n_r, p.n_r);
            return b;
        }

        void check_block(const CMatrix &m, Index rows, Index cols, const char *name)
        {
            if (m.rows() != rows || m.cols() != cols)
                throw DimensionMismatch(std::string("block ") + name + " has shape " + std::to_string(m.rows()) +
                                        "x" + std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                        "x" + std::to_string(cols));
        }
    }

    ScatteringBlocks partition_scattering(const FullNetworkMatrix &s, const PortPartition &p)
    {
        return split<ParamKind::Scattering>(s, p);
    }

    ImpedanceBlocks partition_impedance(const FullNetworkMatrix &z, const PortPartition &p)
    {
        return split<ParamKind::Impedance>(z, p);
    }

    template <ParamKind Kind>
    FullNetworkMatrix reassemble(const NetworkBlocks<Kind> &b)
    {
        const PortPartition &p = b.partition;
        p.validate();
        check_block(b.tt, p.n_t, p.n_t, "tt");
        check_block(b.ts, p.n_t, p.n_s, "ts");
        check_block(b.tr, p.n_t, p.n_r, "tr");
        check_block(b.st, p.n_s, p.n_t, "st");
        check_block(b.ss, p.n_s, p.n_s, "ss");
        check_block(b.sr, p.n_s, p.n_r, "sr");
        check_block(b.rt, p.n_r, p.n_t, "rt");
        check_block(b.rs, p.n_r, p.n_s, "rs");
        check_block(b.rr, p.n_r, p.n_r, "rr");

        CMatrix e(p.total(), p.total());
        const Index ot = p.offset_t(), os = p.offset_s(), orr = p.offset_r();
        e.block(ot, ot, p.n_t, p.n_t) = b.tt;
        e.block(ot, os, p.n_t, p.n_s) = b.ts;
        e.block(ot, orr, p.n_t, p.n_r) = b.tr;
        e.block(os, ot, p.n_s, p.n_t) = b.st;
        e.block(os, os, p.n_s, p.n_s) = b.ss;
        e.block(os, orr, p.n_s, p.n_r) = b.sr;
        e.block(orr, ot, p.n_r, p.n_t) = b.rt;
        e.block(orr, os, p.n_r, p.n_s) = b.rs;
        e.block(orr, orr, p.n_r, p.n_r) = b.rr;
        return FullNetworkMatrix(Kind, std::move(e), b.z0);
    }

    template FullNetworkMatrix reassemble(const ScatteringBlocks &);
    template FullNetworkMatrix reassemble(const ImpedanceBlocks &);

    double relative_asymmetry(const CMatrix &m)
    {
        const double norm = m.norm();
        if (norm == 0.0)
            return 0.0;
        return (m - m.transpose()).norm() / norm;
    }
}
