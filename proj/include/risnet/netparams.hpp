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

#include <complex>

#include <Eigen/Dense>

#include "risnet/errors.hpp"

namespace risnet
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using Index = Eigen::Index;

    inline constexpr double default_z0 = 50.0;

    // Matrices whose LU reciprocal condition estimate falls below 1/cap are
    // treated as singular.
    inline constexpr double default_condition_cap = 1e12;

    // Port counts of an RIS-aided link. Ports are always ordered transmitter,
    // RIS, receiver.
    struct PortPartition
    {
        Index n_t = 1;
        Index n_s = 1;
        Index n_r = 1;

        Index total() const noexcept { return n_t + n_s + n_r; }
        Index offset_t() const noexcept { return 0; }
        Index offset_s() const noexcept { return n_t; }
        Index offset_r() const noexcept { return n_t + n_s; }

        static PortPartition siso(Index n_s) { return {1, n_s, 1}; }

        // Throws DimensionMismatch if any count is below one.
        void validate() const;

        friend bool operator==(const PortPartition &, const PortPartition &) = default;
    };

    enum class ParamKind
    {
        Scattering,
        Impedance
    };

    const char *to_string(ParamKind kind) noexcept;

    // Full N x N network matrix with a single real reference impedance shared
    // by all ports. Impedance entries are in ohms, scattering entries are
    // dimensionless.
    class FullNetworkMatrix
    {
    public:
        FullNetworkMatrix(ParamKind kind, CMatrix entries, double z0 = default_z0);

        ParamKind kind() const noexcept { return kind_; }
        const CMatrix &entries() const noexcept { return entries_; }
        double z0() const noexcept { return z0_; }
        Index size() const noexcept { return entries_.rows(); }

    private:
        ParamKind kind_;
        CMatrix entries_;
        double z0_;
    };

    // The nine sub-matrices of a partitioned network matrix. The first letter
    // of a block name is the row group, the second the column group, so `rt`
    // maps transmitter inputs to receiver outputs.
    template <ParamKind Kind>
    struct NetworkBlocks
    {
        static constexpr ParamKind kind = Kind;

        PortPartition partition;
        double z0 = default_z0;
        CMatrix tt, ts, tr;
        CMatrix st, ss, sr;
        CMatrix rt, rs, rr;

        bool is_siso() const noexcept { return partition.n_t == 1 && partition.n_r == 1; }
    };

    using ScatteringBlocks = NetworkBlocks<ParamKind::Scattering>;
    using ImpedanceBlocks = NetworkBlocks<ParamKind::Impedance>;

    // S = (Z - z0 U)(Z + z0 U)^-1, computed through a linear solve.
    FullNetworkMatrix z_to_s(const FullNetworkMatrix &z, double condition_cap = default_condition_cap);

    // Z = z0 (U + S)(U - S)^-1.
    FullNetworkMatrix s_to_z(const FullNetworkMatrix &s, double condition_cap = default_condition_cap);

    // Gamma = (z_load - z0) / (z_load + z0). Throws DegenerateLoad when
    // z_load == -z0.
    cdouble reflection_coefficient(cdouble z_load, double z0 = default_z0);

    ScatteringBlocks partition_scattering(const FullNetworkMatrix &s, const PortPartition &p);
    ImpedanceBlocks partition_impedance(const FullNetworkMatrix &z, const PortPartition &p);

    template <ParamKind Kind>
    FullNetworkMatrix reassemble(const NetworkBlocks<Kind> &blocks);

    extern template FullNetworkMatrix reassemble(const ScatteringBlocks &);
    extern template FullNetworkMatrix reassemble(const ImpedanceBlocks &);

    // ||M - M^T||_F / ||M||_F, zero for the zero matrix.
    double relative_asymmetry(const CMatrix &m);
}
