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

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "risnet/netparams.hpp"

namespace risnet
{
    inline constexpr double speed_of_light = 299792458.0;
    inline constexpr double free_space_impedance = 376.730313668;

    struct Vec3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
        friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
        friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
        friend bool operator==(const Vec3 &, const Vec3 &) = default;
    };

    // Thin perfectly conducting wire dipole. Only z-directed dipoles are
    // supported; the orientation is kept so callers can check it.
    struct Dipole
    {
        Vec3 center;
        double length = 0.0;
        double radius = 0.0;
        Vec3 orientation{0.0, 0.0, 1.0};

        // Throws InvalidGeometry unless length > 0, 0 < radius <= 0.05 length
        // and the orientation is +z.
        void validate() const;
    };

    // True when the two wires share volume: horizontal axis distance below the
    // sum of radii while their z-extents intersect.
    bool overlaps(const Dipole &a, const Dipole &b);

    enum class ImpedanceMethod
    {
        InducedEmfSinusoidal
    };

    struct MutualImpedanceModel
    {
        ImpedanceMethod method = ImpedanceMethod::InducedEmfSinusoidal;
        int integration_points = 64;

        void validate() const;
    };

    // Scene description as read from a key-value config file. Positions are in
    // metres, everything else is relative to the carrier wavelength.
    struct SceneConfig
    {
        double frequency_ghz = 28.0;
        Vec3 tx_position{4.0, 0.0, 3.0};
        Vec3 rx_position{0.7, 4.0, 1.0};
        Vec3 ris_center{0.0, 0.0, 2.0};
        double q_divisor = 4.0;
        double dz_over_lambda = 0.75;
        double dipole_length_over_lambda = 0.46;
        double dipole_radius_over_lambda = 1.0 / 500.0;
        std::optional<int> n_rows;
        std::optional<int> n_cols;
        int integration_points = 64;

        int rows() const { return n_rows.value_or(3); }
        // Default column count is 2Q, i.e. an aperture about 2 wavelengths wide.
        int cols() const;

        void validate() const;
    };

    // Parses `key = value` lines; `#` starts a comment and vectors are written
    // as `[x, y, z]`. Unknown keys are rejected. Throws ParseError/ConfigError.
    SceneConfig parse_scene_config(std::istream &in);
    SceneConfig load_scene_config(const std::filesystem::path &path);
    void write_scene_config(std::ostream &out, const SceneConfig &cfg);

    struct DipoleScene
    {
        double frequency_hz = 0.0;
        double wavelength = 0.0;
        std::vector<Dipole> tx;
        std::vector<Dipole> ris;
        std::vector<Dipole> rx;
        int ris_rows = 0;
        int ris_cols = 0;
        double dy = 0.0;
        double dz = 0.0;

        PortPartition partition() const
        {
            return {static_cast<Index>(tx.size()), static_cast<Index>(ris.size()), static_cast<Index>(rx.size())};
        }

        // All dipoles in port order: tx, ris, rx.
        std::vector<Dipole> ports() const;

        // Throws InvalidGeometry on bad dipoles or any overlapping pair.
        void validate() const;
    };

    // RIS element (iy, iz) sits at ris_center + (iy - (cols-1)/2) dy y^ +
    // (iz - (rows-1)/2) dz z^ and is stored at index iz * cols + iy.
    DipoleScene build_scene(const SceneConfig &cfg);

    // Induced-EMF mutual impedance between parallel z-directed thin dipoles with
    // sinusoidal current distributions, referred to the feed-point currents.
    // Symmetric in (a, b). Throws OverlappingDipoles for coincident or
    // intersecting wires.
    cdouble mutual_impedance(const Dipole &a, const Dipole &b, double frequency_hz,
                             const MutualImpedanceModel &model = {});

    // Induced-EMF self impedance: field of the axial filament evaluated on the
    // wire surface (offset = radius).
    cdouble self_impedance(const Dipole &a, double frequency_hz, const MutualImpedanceModel &model = {});

    // Full N x N impedance matrix, ports ordered tx, ris, rx. Exactly symmetric.
    FullNetworkMatrix assemble_z_matrix(const DipoleScene &scene, const MutualImpedanceModel &model = {},
                                        double z0 = default_z0);
}
