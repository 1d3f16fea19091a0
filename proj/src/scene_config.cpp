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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "risnet/em_scene.hpp"

namespace risnet
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double parse_number(std::string_view text, std::size_t line, std::size_t column)
        {
            text = trim(text);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
                throw ParseError(fmt::format("line {}: expected a number, got '{}'", line, text), line, column);
            return v;
        }

        int parse_int(std::string_view text, std::size_t line, std::size_t column)
        {
            text = trim(text);
            int v = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
                throw ParseError(fmt::format("line {}: expected an integer, got '{}'", line, text), line, column);
            return v;
        }

        Vec3 parse_vec3(std::string_view text, std::size_t line, std::size_t column)
        {
            text = trim(text);
            if (text.size() < 2 || text.front() != '[' || text.back() != ']')
                throw ParseError(fmt::format("line {}: expected a vector '[x, y, z]'", line), line, column);
            text = text.substr(1, text.size() - 2);
            std::vector<double> parts;
            while (true)
            {
                const auto comma = text.find(',');
                parts.push_back(parse_number(text.substr(0, comma), line, column));
                if (comma == std::string_view::npos)
                    break;
                text.remove_prefix(comma + 1);
            }
            if (parts.size() != 3)
                throw ParseError(fmt::format("line {}: expected 3 components, got {}", line, parts.size()), line,
                                 column);
            return {parts[0], parts[1], parts[2]};
        }
    }

    SceneConfig parse_scene_config(std::istream &in)
    {
        SceneConfig cfg;
        std::set<std::string, std::less<>> seen;
        std::size_t line_no = 0;
        for (std::string raw; std::getline(in, raw);)
        {
            ++line_no;
            std::string_view line(raw);
            if (auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            if (trim(line).empty())
                continue;

            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError(fmt::format("line {}: expected 'key = value'", line_no), line_no, 1);
            const std::string key(trim(line.substr(0, eq)));
            const std::string_view value = line.substr(eq + 1);
            const std::size_t col = eq + 2;
            if (!seen.insert(key).second)
                throw ParseError(fmt::format("line {}: duplicate key '{}'", line_no, key), line_no, 1);

            if (key == "frequency_ghz")
                cfg.frequency_ghz = parse_number(value, line_no, col);
            else if (key == "tx_position")
                cfg.tx_position = parse_vec3(value, line_no, col);
            else if (key == "rx_position")
                cfg.rx_position = parse_vec3(value, line_no, col);
            else if (key == "ris_center")
                cfg.ris_center = parse_vec3(value, line_no, col);
            else if (key == "q_divisor")
                cfg.q_divisor = parse_number(value, line_no, col);
            else if (key == "dz_over_lambda")
                cfg.dz_over_lambda = parse_number(value, line_no, col);
            else if (key == "dipole_length_over_lambda")
                cfg.dipole_length_over_lambda = parse_number(value, line_no, col);
            else if (key == "dipole_radius_over_lambda")
                cfg.dipole_radius_over_lambda = parse_number(value, line_no, col);
            else if (key == "n_rows")
                cfg.n_rows = parse_int(value, line_no, col);
            else if (key == "n_cols")
                cfg.n_cols = parse_int(value, line_no, col);
            else if (key == "integration_points")
                cfg.integration_points = parse_int(value, line_no, col);
            else
                throw ParseError(fmt::format("line {}: unknown key '{}'", line_no, key), line_no, 1);
        }
        cfg.validate();
        return cfg;
    }

    SceneConfig load_scene_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open scene config " + path.string());
        try
        {
            return parse_scene_config(in);
        }
        catch (const ParseError &e)
        {
            throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
        }
    }

    void write_scene_config(std::ostream &out, const SceneConfig &cfg)
    {
        auto vec = [](Vec3 v) { return fmt::format("[{}, {}, {}]", v.x, v.y, v.z); };
        out << "frequency_ghz = " << fmt::format("{}", cfg.frequency_ghz) << '\n'
            << "tx_position = " << vec(cfg.tx_position) << '\n'
            << "rx_position = " << vec(cfg.rx_position) << '\n'
            << "ris_center = " << vec(cfg.ris_center) << '\n'
            << "q_divisor = " << fmt::format("{}", cfg.q_divisor) << '\n'
            << "dz_over_lambda = " << fmt::format("{}", cfg.dz_over_lambda) << '\n'
            << "dipole_length_over_lambda = " << fmt::format("{}", cfg.dipole_length_over_lambda) << '\n'
            << "dipole_radius_over_lambda = " << fmt::format("{}", cfg.dipole_radius_over_lambda) << '\n';
        if (cfg.n_rows)
            out << "n_rows = " << *cfg.n_rows << '\n';
        if (cfg.n_cols)
            out << "n_cols = " << *cfg.n_cols << '\n';
        out << "integration_points = " << cfg.integration_points << '\n';
    }
}
