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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "risnet/channel.hpp"
#include "risnet/em_scene.hpp"
#include "risnet/experiment.hpp"
#include "risnet/netparams.hpp"
#include "risnet/optimizer.hpp"

namespace py = pybind11;
using namespace risnet;

namespace
{
    PortPartition to_partition(const std::tuple<Index, Index, Index> &p)
    {
        return {std::get<0>(p), std::get<1>(p), std::get<2>(p)};
    }

    py::dict trace_to_dict(const OptimizerTrace &t)
    {
        std::vector<int> iteration;
        std::vector<double> gain, delta;
        std::vector<bool> accepted;
        for (const TraceRecord &r : t.records)
        {
            iteration.push_back(r.iteration);
            gain.push_back(r.gain);
            delta.push_back(r.delta);
            accepted.push_back(r.accepted);
        }
        py::dict d;
        d["iteration"] = iteration;
        d["gain"] = gain;
        d["delta"] = delta;
        d["accepted"] = accepted;
        d["final_phases"] = RVector(t.final_state.phases());
        d["converged"] = t.stop_reason == StopReason::Converged;
        return d;
    }

    StepSchedule schedule_from(double delta0, double decay, double min_delta, bool safeguard)
    {
        StepSchedule s;
        s.delta0 = delta0;
        s.decay = decay;
        s.min_delta = min_delta;
        s.greedy_safeguard = safeguard;
        return s;
    }
}

PYBIND11_MODULE(risnet, m)
{
    m.doc() = "S/Z-parameter modelling and unit-modulus load optimization of RIS-aided links";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "z_to_s", [](const CMatrix &z, double z0) { return z_to_s(FullNetworkMatrix(ParamKind::Impedance, z, z0)).entries(); },
        py::arg("z"), py::arg("z0") = default_z0);
    m.def(
        "s_to_z", [](const CMatrix &s, double z0) { return s_to_z(FullNetworkMatrix(ParamKind::Scattering, s, z0)).entries(); },
        py::arg("s"), py::arg("z0") = default_z0);
    m.def("reflection_coefficient", &reflection_coefficient, py::arg("z_load"), py::arg("z0") = default_z0);

    py::class_<SceneConfig>(m, "SceneConfig")
        .def(py::init<>())
        .def_readwrite("frequency_ghz", &SceneConfig::frequency_ghz)
        .def_readwrite("q_divisor", &SceneConfig::q_divisor)
        .def_readwrite("dz_over_lambda", &SceneConfig::dz_over_lambda)
        .def_readwrite("dipole_length_over_lambda", &SceneConfig::dipole_length_over_lambda)
        .def_readwrite("dipole_radius_over_lambda", &SceneConfig::dipole_radius_over_lambda)
        .def_readwrite("n_rows", &SceneConfig::n_rows)
        .def_readwrite("n_cols", &SceneConfig::n_cols)
        .def_readwrite("integration_points", &SceneConfig::integration_points)
        .def_property(
            "tx_position", [](const SceneConfig &c) { return std::array{c.tx_position.x, c.tx_position.y, c.tx_position.z}; },
            [](SceneConfig &c, std::array<double, 3> v) { c.tx_position = {v[0], v[1], v[2]}; })
        .def_property(
            "rx_position", [](const SceneConfig &c) { return std::array{c.rx_position.x, c.rx_position.y, c.rx_position.z}; },
            [](SceneConfig &c, std::array<double, 3> v) { c.rx_position = {v[0], v[1], v[2]}; })
        .def_property(
            "ris_center", [](const SceneConfig &c) { return std::array{c.ris_center.x, c.ris_center.y, c.ris_center.z}; },
            [](SceneConfig &c, std::array<double, 3> v) { c.ris_center = {v[0], v[1], v[2]}; });

    m.def("load_scene_config", [](const std::filesystem::path &p) { return load_scene_config(p); }, py::arg("path"));

    m.def(
        "assemble_z_matrix",
        [](const SceneConfig &cfg, double z0) {
            const DipoleScene scene = build_scene(cfg);
            const MutualImpedanceModel model{ImpedanceMethod::InducedEmfSinusoidal, cfg.integration_points};
            const auto p = scene.partition();
            return py::make_tuple(assemble_z_matrix(scene, model, z0).entries(), py::make_tuple(p.n_t, p.n_s, p.n_r));
        },
        py::arg("config"), py::arg("z0") = default_z0,
        "Returns (Z, (n_t, n_s, n_r)) for the dipole scene, ports ordered tx, ris, rx.");

    m.def(
        "e2e_s",
        [](const CMatrix &s, std::tuple<Index, Index, Index> partition, const CVector &gamma_s) {
            const auto blocks = partition_scattering(FullNetworkMatrix(ParamKind::Scattering, s), to_partition(partition));
            return e2e_s(blocks, gamma_s).h;
        },
        py::arg("s"), py::arg("partition"), py::arg("gamma_s"));

    m.def(
        "solve_network",
        [](const CMatrix &s, std::tuple<Index, Index, Index> partition, const CVector &gamma_s, const CVector &a_g) {
            const PortPartition p = to_partition(partition);
            const NetworkSolution sol =
                solve_network(FullNetworkMatrix(ParamKind::Scattering, s), p, Termination::matched(p, gamma_s, a_g));
            return py::make_tuple(sol.a, sol.b);
        },
        py::arg("s"), py::arg("partition"), py::arg("gamma_s"), py::arg("a_g"),
        "Matched transmitter/receiver network solve; returns (a, b).");

    m.def(
        "sopt_run",
        [](const CMatrix &s, std::tuple<Index, Index, Index> partition, const RVector &init_phases, double delta0,
           double decay, double min_delta, bool safeguard, int max_iterations) {
            const auto blocks = partition_scattering(FullNetworkMatrix(ParamKind::Scattering, s), to_partition(partition));
            StoppingRule stop;
            stop.max_iterations = max_iterations;
            return trace_to_dict(
                sopt_run(blocks, RisLoadState(init_phases), schedule_from(delta0, decay, min_delta, safeguard), stop));
        },
        py::arg("s"), py::arg("partition"), py::arg("init_phases"), py::arg("delta0") = 0.05, py::arg("decay") = 0.98,
        py::arg("min_delta") = 1e-3, py::arg("safeguard") = true, py::arg("max_iterations") = 2000);

    m.def(
        "zopt_run",
        [](const CMatrix &z, std::tuple<Index, Index, Index> partition, const RVector &init_phases, double z0,
           double delta0, double decay, double min_delta, bool safeguard, int max_iterations) {
            const auto blocks =
                partition_impedance(FullNetworkMatrix(ParamKind::Impedance, z, z0), to_partition(partition));
            StoppingRule stop;
            stop.max_iterations = max_iterations;
            return trace_to_dict(
                zopt_run(blocks, RisLoadState(init_phases), schedule_from(delta0, decay, min_delta, safeguard), stop));
        },
        py::arg("z"), py::arg("partition"), py::arg("init_phases"), py::arg("z0") = default_z0,
        py::arg("delta0") = 1.0, py::arg("decay") = 0.98, py::arg("min_delta") = 1e-3, py::arg("safeguard") = true,
        py::arg("max_iterations") = 2000);

    m.def(
        "brute_force_phases",
        [](const CMatrix &s, std::tuple<Index, Index, Index> partition, int levels) {
            const auto blocks = partition_scattering(FullNetworkMatrix(ParamKind::Scattering, s), to_partition(partition));
            const BruteForceResult r = brute_force_phases(blocks, levels);
            return py::make_tuple(RVector(r.best.phases()), r.best_gain);
        },
        py::arg("s"), py::arg("partition"), py::arg("levels"));

    m.def(
        "uncoupled_optimum_gain",
        [](const CMatrix &s, std::tuple<Index, Index, Index> partition) {
            return uncoupled_optimum_gain(
                partition_scattering(FullNetworkMatrix(ParamKind::Scattering, s), to_partition(partition)));
        },
        py::arg("s"), py::arg("partition"));
}
