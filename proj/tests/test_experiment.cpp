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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <unistd.h>

#include "risnet/experiment.hpp"
#include "risnet/matrix_io.hpp"
#include "risnet/touchstone.hpp"

using namespace risnet;
namespace fs = std::filesystem;

namespace
{
    struct TempDir
    {
        fs::path path;
        explicit TempDir(const std::string &tag)
            : path(fs::temp_directory_path() / fmt::format("risnet_{}_{}", tag, ::getpid()))
        {
            fs::remove_all(path);
            fs::create_directories(path);
        }
        ~TempDir() { fs::remove_all(path); }
    };

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    ExperimentSpec quick_spec(const fs::path &out, Algorithm a, const std::string &label)
    {
        ExperimentSpec spec;
        spec.algorithm = a;
        spec.label = label;
        spec.out_dir = out;
        spec.stop.max_iterations = 40;
        return spec;
    }
}

TEST_CASE("run_experiment writes a consistent trace and summary")
{
    TempDir dir("exp");
    const ExperimentResult r = run_experiment(quick_spec(dir.path, Algorithm::SOpt, "q4"));
    CHECK(fs::exists(r.summary.trace_path));
    CHECK(fs::exists(r.summary.summary_path));
    CHECK(r.summary.n_ris == 24);
    CHECK(r.summary.fingerprint.size() == 16);

    std::istringstream trace(slurp(r.summary.trace_path));
    std::string header, line, last;
    std::getline(trace, header);
    CHECK(header == "iteration,gain,gain_db,delta,accepted");
    int rows = 0;
    double previous = -1.0;
    while (std::getline(trace, line))
    {
        ++rows;
        last = line;
        const double g = std::stod(line.substr(line.find(',') + 1));
        CHECK(g >= previous);
        previous = g;
    }
    CHECK(rows == static_cast<int>(r.trace.records.size()));
    CHECK(previous == r.summary.final_gain);

    const std::string json = slurp(r.summary.summary_path);
    CHECK(json.find("\"algorithm\": \"s-opt\"") != std::string::npos);
    CHECK(json.find(fmt::format("\"final_gain\": {}", r.summary.final_gain)) != std::string::npos);
    CHECK(json.find("\"scene_fingerprint\": \"" + r.summary.fingerprint + "\"") != std::string::npos);
}

TEST_CASE("identical specs give byte-identical traces")
{
    TempDir a("det_a"), b("det_b");
    for (Algorithm algo : {Algorithm::SOpt, Algorithm::ZOpt})
    {
        ExperimentSpec spec = quick_spec(a.path, algo, "same");
        spec.init = InitMode::Random;
        spec.seed = 42;
        run_experiment(spec);
        spec.out_dir = b.path;
        run_experiment(spec);
        CHECK(slurp(a.path / "same.trace.csv") == slurp(b.path / "same.trace.csv"));
    }
}

TEST_CASE("brute-force runs and the algorithm/init names")
{
    TempDir dir("brute");
    SceneConfig cfg;
    cfg.n_rows = 1;
    cfg.n_cols = 2;
    ExperimentSpec spec = quick_spec(dir.path, Algorithm::Brute, "tiny");
    spec.scene = cfg;
    spec.brute_levels = 8;
    const ExperimentResult r = run_experiment(spec);
    CHECK(r.summary.n_ris == 2);
    CHECK(r.summary.final_gain >= r.summary.initial_gain);

    for (Algorithm a : {Algorithm::SOpt, Algorithm::ZOpt, Algorithm::Brute})
        CHECK(parse_algorithm(to_string(a)) == a);
    for (InitMode m : {InitMode::Auto, InitMode::ZeroPhase, InitMode::ShortCircuit, InitMode::Random})
        CHECK(parse_init_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_algorithm("newton"), ConfigError);
    CHECK_THROWS_AS(parse_init_mode("ones"), ConfigError);
}

TEST_CASE("sweep runs every pair and writes one table")
{
    TempDir dir("sweep");
    ExperimentSpec base = quick_spec(dir.path, Algorithm::SOpt, "unused");
    base.stop.max_iterations = 10;
    const auto runs = run_sweep(base, {4.0, 8.0}, {Algorithm::SOpt, Algorithm::ZOpt});
    REQUIRE(runs.size() == 4);
    CHECK(runs[0].label == "s-opt_q4");
    CHECK(runs[1].label == "z-opt_q4");
    CHECK(runs[3].n_ris == 48);
    CHECK(fs::exists(dir.path / "z-opt_q8.trace.csv"));

    std::istringstream table(slurp(dir.path / "sweep_summary.csv"));
    int lines = 0;
    for (std::string l; std::getline(table, l);)
        ++lines;
    CHECK(lines == 5);
}

TEST_CASE("scene fingerprint")
{
    const CMatrix m = CMatrix::Identity(3, 3);
    CHECK(matrix_fingerprint(m) == matrix_fingerprint(m));
    CMatrix n = m;
    n(2, 1) = cdouble(0.0, 1e-300);
    CHECK(matrix_fingerprint(m) != matrix_fingerprint(n));
}

#ifdef RISNET_CLI_PATH
namespace
{
    int cli(const std::string &args, const fs::path &log)
    {
        const std::string cmd = fmt::format("\"{}\" {} > \"{}\" 2>&1", RISNET_CLI_PATH, args, log.string());
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
}

TEST_CASE("command line: run and determinism")
{
    TempDir dir("cli");
    const fs::path cfg = dir.path / "scene.cfg";
    std::ofstream(cfg) << "q_divisor = 4\n";
    const fs::path log = dir.path / "log.txt";

    for (const char *sub : {"a", "b"})
        CHECK(cli(fmt::format("run --config \"{}\" --algo s-opt --init random --seed 3 --max-iters 25 --out \"{}\"",
                              cfg.string(), (dir.path / sub).string()),
                  log) == 0);
    const std::string first = slurp(dir.path / "a" / "scene.trace.csv");
    CHECK(!first.empty());
    CHECK(first == slurp(dir.path / "b" / "scene.trace.csv"));

    ::setenv("RISNET_OUT_DIR", (dir.path / "env").c_str(), 1);
    CHECK(cli(fmt::format("run --config \"{}\" --algo z-opt --max-iters 5", cfg.string()), log) == 0);
    ::unsetenv("RISNET_OUT_DIR");
    CHECK(fs::exists(dir.path / "env" / "scene.summary.json"));
}

TEST_CASE("command line: exit codes")
{
    TempDir dir("cli_err");
    const fs::path log = dir.path / "log.txt";
    const fs::path bad = dir.path / "bad.cfg";
    std::ofstream(bad) << "q_divisor = 4\nwavelength = 2\n";
    CHECK(cli(fmt::format("run --config \"{}\"", bad.string()), log) == 2);
    CHECK(slurp(log).find("unknown key 'wavelength'") != std::string::npos);
    CHECK(cli("run --algo newton", log) == 2);
    CHECK(cli("frobnicate", log) == 2);
    CHECK(cli("--help", log) == 0);

    const fs::path singular = dir.path / "singular.csv";
    std::ofstream(singular) << "-50,0\n0,50\n";
    CHECK(cli(fmt::format("convert \"{}\" --to s", singular.string()), log) == 3);

    const fs::path ragged = dir.path / "ragged.csv";
    std::ofstream(ragged) << "1,2\n3\n";
    CHECK(cli(fmt::format("convert \"{}\" --to s", ragged.string()), log) == 2);
    CHECK(slurp(log).find("row 2") != std::string::npos);
}

TEST_CASE("command line: convert and touchstone export")
{
    TempDir dir("cli_conv");
    const fs::path log = dir.path / "log.txt";
    const fs::path z = dir.path / "z.csv";
    std::ofstream(z) << "50,0,0\n0,50+0j,0\n0,0,50\n";
    CHECK(cli(fmt::format("convert \"{}\" --to s -o \"{}\"", z.string(), (dir.path / "s.csv").string()), log) == 0);
    CHECK(read_matrix_csv(dir.path / "s.csv").norm() == 0.0);

    CMatrix m(2, 2);
    m << cdouble(60, 10), cdouble(5, -3), cdouble(5, -3), cdouble(40, 20);
    write_matrix_csv(dir.path / "m.csv", m);
    CHECK(cli(fmt::format("convert \"{}\" --to s --z0 75 -o \"{}\"", (dir.path / "m.csv").string(),
                          (dir.path / "ms.csv").string()),
              log) == 0);
    CHECK(cli(fmt::format("convert \"{}\" --to z --z0 75 -o \"{}\"", (dir.path / "ms.csv").string(),
                          (dir.path / "mz.csv").string()),
              log) == 0);
    CHECK((read_matrix_csv(dir.path / "mz.csv") - m).norm() <= 1e-10 * m.norm());

    CHECK(cli(fmt::format("export-touchstone --out \"{}\"", dir.path.string()), log) == 0);
    const TouchstoneData t = read_touchstone(dir.path / "scene.s26p");
    CHECK(t.s.size() == 26);
    CHECK(t.frequency_hz == 28e9);
    CHECK(slurp(dir.path / "scene.s26p").find("# Hz S RI R 50\n") != std::string::npos);

    const SceneConfig cfg;
    const DipoleScene scene = build_scene(cfg);
    const CMatrix s = z_to_s(assemble_z_matrix(scene)).entries();
    CHECK((t.s.entries() - s).norm() <= 1e-9 * s.norm());
}
#endif
