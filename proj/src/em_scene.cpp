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

#include "risnet/em_scene.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>

#include <gsl/gsl_integration.h>

namespace risnet
{
    void Dipole::validate() const
    {
        if (!(length > 0.0) || !std::isfinite(length))
            throw InvalidGeometry("dipole length must be positive");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw InvalidGeometry("dipole radius must be positive");
        if (radius > 0.05 * length)
            throw InvalidGeometry("dipole radius must not exceed 5% of its length (thin-wire model)");
        if (orientation.x != 0.0 || orientation.y != 0.0 || orientation.z != 1.0)
            throw InvalidGeometry("only z-directed dipoles are supported");
        if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(center.z))
            throw InvalidGeometry("dipole center must be finite");
    }

    bool overlaps(const Dipole &a, const Dipole &b)
    {
        const double rho = std::hypot(a.center.x - b.center.x, a.center.y - b.center.y);
        const double gap = std::abs(a.center.z - b.center.z);
        return rho < a.radius + b.radius && gap < 0.5 * (a.length + b.length);
    }

    void MutualImpedanceModel::validate() const
    {
        if (integration_points < 64)
            throw ConfigError("integration_points must be at least 64, got " + std::to_string(integration_points));
    }

    namespace
    {
        struct GaussRule
        {
            std::vector<double> x; // nodes on [-1, 1]
            std::vector<double> w;
        };

        GaussRule gauss_legendre(int n)
        {
            std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
                gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)), &gsl_integration_glfixed_table_free);
            if (!table)
                throw NumericalError("failed to allocate Gauss-Legendre table");
            GaussRule rule;
            rule.x.resize(n);
            rule.w.resize(n);
            for (int i = 0; i < n; ++i)
                gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &rule.x[i], &rule.w[i], table.get());
            return rule;
        }

        // One integration piece [s0, s1]; a clustered end has a near-singular
        // kernel peak of width `scale` next to it.
        struct Piece
        {
            double s0, s1;
            double scale0 = 0.0; // > 0 when the left end is clustered
            double scale1 = 0.0;
        };

        // Integrates the induced EMF kernel over the receiving dipole.
        //   h_src, h_obs : half lengths (metres)
        //   rho          : horizontal axis distance
        //   dzc          : z(obs center) - z(src center)
        cdouble emf_integral(double k, double h_src, double h_obs, double rho, double dzc, int points)
        {
            const double cos_kh = std::cos(k * h_src);
            const cdouble j(0.0, 1.0);

            auto kernel = [&](double s) -> cdouble {
                const double u = dzc + s;
                const double r1 = std::sqrt(rho * rho + (u - h_src) * (u - h_src));
                const double r2 = std::sqrt(rho * rho + (u + h_src) * (u + h_src));
                const double r0 = std::sqrt(rho * rho + u * u);
                const cdouble field = std::exp(-j * (k * r1)) / r1 + std::exp(-j * (k * r2)) / r2 -
                                      2.0 * cos_kh * std::exp(-j * (k * r0)) / r0;
                return field * std::sin(k * (h_obs - std::abs(s)));
            };

            // Positions (in s) where the kernel can peak: opposite the source ends
            // and the source centre.
            const std::array<double, 3> peaks{-dzc - h_src, -dzc, -dzc + h_src};
            const double tiny = 1e-12 * h_obs;

            std::vector<double> cuts{-h_obs, 0.0, h_obs};
            for (double p : peaks)
                if (p > -h_obs + tiny && p < h_obs - tiny)
                    cuts.push_back(p);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double a, double b) { return b - a <= tiny; }),
                       cuts.end());

            auto peak_distance = [&](double s) {
                double d = HUGE_VAL;
                for (double p : peaks)
                    d = std::min(d, std::abs(s - p));
                return std::hypot(rho, d);
            };

            std::vector<Piece> pieces;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            {
                const double s0 = cuts[i], s1 = cuts[i + 1];
                const double len = s1 - s0;
                const double c0 = peak_distance(s0), c1 = peak_distance(s1);
                const bool left = c0 < 0.25 * len;
                const bool right = c1 < 0.25 * len;
                if (left && right)
                {
                    const double mid = 0.5 * (s0 + s1);
                    pieces.push_back({s0, mid, c0, 0.0});
                    pieces.push_back({mid, s1, 0.0, c1});
                }
                else
                    pieces.push_back({s0, s1, left ? c0 : 0.0, right ? c1 : 0.0});
            }

            const int per_piece = std::max(8, (points + static_cast<int>(pieces.size()) - 1) /
                                                  static_cast<int>(pieces.size()));
            const GaussRule rule = gauss_legendre(per_piece);

            cdouble total = 0.0;
            for (const Piece &pc : pieces)
            {
                const double len = pc.s1 - pc.s0;
                if (pc.scale0 > 0.0 || pc.scale1 > 0.0)
                {
                    // s = anchor +/- c sinh(t) flattens the 1/sqrt(c^2 + x^2) peak.
                    const bool at_left = pc.scale0 > 0.0;
                    const double c = at_left ? pc.scale0 : pc.scale1;
                    const double t_max = std::asinh(len / c);
                    for (int i = 0; i < per_piece; ++i)
                    {
                        const double t = 0.5 * t_max * (rule.x[i] + 1.0);
                        const double wt = 0.5 * t_max * rule.w[i] * c * std::cosh(t);
                        const double offset = c * std::sinh(t);
                        const double s = at_left ? pc.s0 + offset : pc.s1 - offset;
                        total += wt * kernel(s);
                    }
                }
                else
                {
                    for (int i = 0; i < per_piece; ++i)
                    {
                        const double s = pc.s0 + 0.5 * len * (rule.x[i] + 1.0);
                        total += 0.5 * len * rule.w[i] * kernel(s);
                    }
                }
            }
            return total;
        }

        cdouble emf_impedance(const Dipole &src, const Dipole &obs, double rho, double frequency_hz,
                              const MutualImpedanceModel &model)
        {
            const double k = 2.0 * std::numbers::pi * frequency_hz / speed_of_light;
            const double h_src = 0.5 * src.length;
            const double h_obs = 0.5 * obs.length;
            const double feed = std::sin(k * h_src) * std::sin(k * h_obs);
            if (std::abs(feed) < 1e-6)
                throw InvalidGeometry("dipole length is a multiple of the wavelength; feed current vanishes");

            const cdouble integral =
                emf_integral(k, h_src, h_obs, rho, obs.center.z - src.center.z, model.integration_points);
            const cdouble j(0.0, 1.0);
            return j * (free_space_impedance / (4.0 * std::numbers::pi)) * integral / feed;
        }

        auto key(const Dipole &d)
        {
            return std::make_tuple(d.center.x, d.center.y, d.center.z, d.length, d.radius);
        }

        void check_frequency(double frequency_hz)
        {
            if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
                throw InvalidGeometry("frequency must be positive");
        }
    }

    cdouble mutual_impedance(const Dipole &a, const Dipole &b, double frequency_hz, const MutualImpedanceModel &model)
    {
        a.validate();
        b.validate();
        model.validate();
        check_frequency(frequency_hz);
        if (a.center == b.center || overlaps(a, b))
            throw OverlappingDipoles("mutual impedance requested for overlapping dipoles");

        // Integrate with a canonical source so Z(a, b) == Z(b, a) bitwise.
        const bool swap = key(b) < key(a);
        const Dipole &src = swap ? b : a;
        const Dipole &obs = swap ? a : b;
        const double rho = std::hypot(obs.center.x - src.center.x, obs.center.y - src.center.y);
        return emf_impedance(src, obs, rho, frequency_hz, model);
    }

    cdouble self_impedance(const Dipole &a, double frequency_hz, const MutualImpedanceModel &model)
    {
        a.validate();
        model.validate();
        check_frequency(frequency_hz);
        return emf_impedance(a, a, a.radius, frequency_hz, model);
    }

    std::vector<Dipole> DipoleScene::ports() const
    {
        std::vector<Dipole> all;
        all.reserve(tx.size() + ris.size() + rx.size());
        all.insert(all.end(), tx.begin(), tx.end());
        all.insert(all.end(), ris.begin(), ris.end());
        all.insert(all.end(), rx.begin(), rx.end());
        return all;
    }

    void DipoleScene::validate() const
    {
        if (tx.empty() || ris.empty() || rx.empty())
            throw InvalidGeometry("scene needs at least one transmitter, RIS and receiver dipole");
        const auto all = ports();
        for (const Dipole &d : all)
            d.validate();
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                if (overlaps(all[i], all[j]))
                    throw InvalidGeometry("dipoles " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }

    int SceneConfig::cols() const
    {
        return n_cols.value_or(static_cast<int>(std::lround(2.0 * q_divisor)));
    }

    void SceneConfig::validate() const
    {
        auto positive = [](double v, const char *name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(name) + " must be positive");
        };
        positive(frequency_ghz, "frequency_ghz");
        positive(q_divisor, "q_divisor");
        positive(dz_over_lambda, "dz_over_lambda");
        positive(dipole_length_over_lambda, "dipole_length_over_lambda");
        positive(dipole_radius_over_lambda, "dipole_radius_over_lambda");
        if (rows() < 1)
            throw ConfigError("n_rows must be at least 1");
        if (cols() < 1)
            throw ConfigError("n_cols must be at least 1");
        MutualImpedanceModel{ImpedanceMethod::InducedEmfSinusoidal, integration_points}.validate();
    }

    DipoleScene build_scene(const SceneConfig &cfg)
    {
        cfg.validate();

        DipoleScene scene;
        scene.frequency_hz = cfg.frequency_ghz * 1e9;
        scene.wavelength = speed_of_light / scene.frequency_hz;
        const double lambda = scene.wavelength;
        scene.dy = lambda / cfg.q_divisor;
        scene.dz = cfg.dz_over_lambda * lambda;
        scene.ris_rows = cfg.rows();
        scene.ris_cols = cfg.cols();

        const double length = cfg.dipole_length_over_lambda * lambda;
        const double radius = cfg.dipole_radius_over_lambda * lambda;
        auto make = [&](Vec3 c) { return Dipole{c, length, radius, {0.0, 0.0, 1.0}}; };

        scene.tx.push_back(make(cfg.tx_position));
        scene.rx.push_back(make(cfg.rx_position));

        const double cy = 0.5 * (scene.ris_cols - 1);
        const double cz = 0.5 * (scene.ris_rows - 1);
        scene.ris.reserve(static_cast<std::size_t>(scene.ris_rows * scene.ris_cols));
        for (int iz = 0; iz < scene.ris_rows; ++iz)
            for (int iy = 0; iy < scene.ris_cols; ++iy)
                scene.ris.push_back(make(cfg.ris_center + Vec3{0.0, (iy - cy) * scene.dy, (iz - cz) * scene.dz}));

        scene.validate();
        return scene;
    }

    FullNetworkMatrix assemble_z_matrix(const DipoleScene &scene, const MutualImpedanceModel &model, double z0)
    {
        scene.validate();
        model.validate();

        const auto all = scene.ports();
        const auto n = static_cast<Index>(all.size());
        CMatrix z(n, n);
        for (Index i = 0; i < n; ++i)
        {
            z(i, i) = self_impedance(all[i], scene.frequency_hz, model);
            for (Index j = i + 1; j < n; ++j)
            {
                z(i, j) = mutual_impedance(all[i], all[j], scene.frequency_hz, model);
                z(j, i) = z(i, j);
            }
        }
        return FullNetworkMatrix(ParamKind::Impedance, std::move(z), z0);
    }
}
