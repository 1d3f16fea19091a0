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

#include "risnet/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace risnet
{
    namespace
    {
        constexpr std::size_t pairs_per_line = 4;

        std::string pair(cdouble v)
        {
            return fmt::format("{: .17e} {: .17e}", v.real(), v.imag());
        }

        std::string upper(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
            return s;
        }
    }

    void write_touchstone(std::ostream &out, const FullNetworkMatrix &s, double frequency_hz,
                          const std::string &comment)
    {
        if (s.kind() != ParamKind::Scattering)
            throw InputError("touchstone export expects a scattering matrix");

        const CMatrix &m = s.entries();
        const Index n = s.size();

        if (!comment.empty())
        {
            std::istringstream lines(comment);
            for (std::string line; std::getline(lines, line);)
                out << "! " << line << '\n';
        }
        out << fmt::format("# Hz S RI R {}\n", s.z0());

        const std::string freq = fmt::format("{:.17g}", frequency_hz);
        if (n == 1)
        {
            out << freq << ' ' << pair(m(0, 0)) << '\n';
        }
        else if (n == 2)
        {
            out << freq << ' ' << pair(m(0, 0)) << ' ' << pair(m(1, 0)) << ' ' << pair(m(0, 1)) << ' '
                << pair(m(1, 1)) << '\n';
        }
        else
        {
            for (Index r = 0; r < n; ++r)
            {
                out << (r == 0 ? freq : std::string(freq.size(), ' '));
                for (Index c = 0; c < n; ++c)
                {
                    if (c > 0 && c % pairs_per_line == 0)
                        out << '\n' << std::string(freq.size(), ' ');
                    out << ' ' << pair(m(r, c));
                }
                out << '\n';
            }
        }
    }

    void write_touchstone(const std::filesystem::path &path, const FullNetworkMatrix &s, double frequency_hz,
                          const std::string &comment)
    {
        std::ofstream out(path);
        if (!out)
            throw InputError("cannot open " + path.string() + " for writing");
        write_touchstone(out, s, frequency_hz, comment);
        if (!out)
            throw InputError("failed writing " + path.string());
    }

    TouchstoneData read_touchstone(std::istream &in)
    {
        double freq_scale = 1e9; // v1 default unit is GHz
        std::string format = "MA";
        double z0 = default_z0;
        bool seen_option = false;

        std::vector<double> values;
        std::size_t line_no = 0;
        for (std::string line; std::getline(in, line);)
        {
            ++line_no;
            if (auto bang = line.find('!'); bang != std::string::npos)
                line.erase(bang);

            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;

            if (line[first] == '#')
            {
                if (seen_option)
                    continue;
                seen_option = true;
                std::istringstream opts(line.substr(first + 1));
                for (std::string tok; opts >> tok;)
                {
                    tok = upper(tok);
                    if (tok == "HZ")
                        freq_scale = 1.0;
                    else if (tok == "KHZ")
                        freq_scale = 1e3;
                    else if (tok == "MHZ")
                        freq_scale = 1e6;
                    else if (tok == "GHZ")
                        freq_scale = 1e9;
                    else if (tok == "RI" || tok == "MA" || tok == "DB")
                        format = tok;
                    else if (tok == "S")
                        ;
                    else if (tok == "Y" || tok == "Z" || tok == "G" || tok == "H")
                        throw ParseError("only S-parameter touchstone files are supported", line_no, 1);
                    else if (tok == "R")
                    {
                        if (!(opts >> z0) || !(z0 > 0.0))
                            throw ParseError("invalid reference impedance in option line", line_no, 1);
                    }
                    else
                        throw ParseError("unknown option '" + tok + "'", line_no, 1);
                }
                continue;
            }

            const char *p = line.data();
            const char *end = line.data() + line.size();
            while (p < end)
            {
                while (p < end && std::isspace(static_cast<unsigned char>(*p)))
                    ++p;
                if (p == end)
                    break;
                const char *start = p;
                if (*p == '+')
                    ++p;
                double v = 0.0;
                auto [next, ec] = std::from_chars(p, end, v);
                if (ec != std::errc() || (p != start && *p == '-'))
                    throw ParseError("malformed number", line_no, static_cast<std::size_t>(start - line.data()) + 1);
                values.push_back(v);
                p = next;
            }
        }

        if (values.empty())
            throw ParseError("no data records", line_no, 1);

        // One frequency point: 1 + 2 N^2 values.
        const double root = std::sqrt((static_cast<double>(values.size()) - 1.0) / 2.0);
        const auto n = static_cast<Index>(std::llround(root));
        if (n < 1 || static_cast<std::size_t>(1 + 2 * n * n) != values.size())
            throw ParseError("value count " + std::to_string(values.size()) +
                                 " does not match a single-frequency N-port record",
                             line_no, 1);

        auto decode = [&](double x, double y) -> cdouble {
            if (format == "RI")
                return {x, y};
            const double mag = format == "DB" ? std::pow(10.0, x / 20.0) : x;
            return std::polar(mag, y * std::numbers::pi / 180.0);
        };

        CMatrix m(n, n);
        std::size_t k = 1;
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < n; ++c, k += 2)
                m(r, c) = decode(values[k], values[k + 1]);
        if (n == 2)
            std::swap(m(0, 1), m(1, 0));

        return TouchstoneData{values[0] * freq_scale, FullNetworkMatrix(ParamKind::Scattering, std::move(m), z0)};
    }

    TouchstoneData read_touchstone(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw InputError("cannot open " + path.string());
        return read_touchstone(in);
    }
}
