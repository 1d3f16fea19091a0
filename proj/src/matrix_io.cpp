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

#include "risnet/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

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

        bool to_double(std::string_view s, double &v)
        {
            if (!s.empty() && s.front() == '+')
                s.remove_prefix(1);
            if (s.empty())
                return false;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            return ec == std::errc() && ptr == s.data() + s.size();
        }
    }

    cdouble parse_complex(std::string_view token, std::size_t line, std::size_t column)
    {
        const std::string_view t = trim(token);
        auto fail = [&] {
            return ParseError(fmt::format("line {}, column {}: malformed complex entry '{}'", line, column, t), line,
                              column);
        };
        if (t.empty())
            throw fail();

        if (t.back() != 'j')
        {
            double re = 0.0;
            if (!to_double(t, re))
                throw fail();
            return {re, 0.0};
        }

        const std::string_view body = t.substr(0, t.size() - 1);
        std::size_t split = std::string_view::npos;
        for (std::size_t i = body.size(); i-- > 1;)
        {
            if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
            {
                split = i;
                break;
            }
        }

        double re = 0.0, im = 0.0;
        if (split == std::string_view::npos)
        {
            if (!to_double(body, im))
                throw fail();
            return {0.0, im};
        }
        if (!to_double(body.substr(0, split), re) || !to_double(body.substr(split), im))
            throw fail();
        return {re, im};
    }

    CMatrix read_matrix_csv(std::istream &in)
    {
        std::vector<std::vector<cdouble>> rows;
        std::size_t line_no = 0;
        std::size_t first_line = 0;
        for (std::string raw; std::getline(in, raw);)
        {
            ++line_no;
            const std::string_view line = trim(raw);
            if (line.empty() || line.front() == '#')
                continue;

            std::vector<cdouble> row;
            std::size_t start = 0;
            while (true)
            {
                const auto comma = line.find(',', start);
                const auto token = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
                row.push_back(parse_complex(token, line_no, row.size() + 1));
                if (comma == std::string_view::npos)
                    break;
                start = comma + 1;
            }

            if (rows.empty())
                first_line = line_no;
            else if (row.size() != rows.front().size())
                throw ParseError(fmt::format("line {}: row {} has {} entries, expected {} (from line {})", line_no,
                                             rows.size() + 1, row.size(), rows.front().size(), first_line),
                                 line_no, row.size());
            rows.push_back(std::move(row));
        }

        if (rows.empty())
            throw ParseError("matrix file contains no rows", line_no, 0);

        CMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
        for (Index r = 0; r < m.rows(); ++r)
            for (Index c = 0; c < m.cols(); ++c)
                m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        return m;
    }

    CMatrix read_matrix_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw InputError("cannot open " + path.string());
        try
        {
            return read_matrix_csv(in);
        }
        catch (const ParseError &e)
        {
            throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
        }
    }

    void write_matrix_csv(std::ostream &out, const CMatrix &m)
    {
        for (Index r = 0; r < m.rows(); ++r)
        {
            for (Index c = 0; c < m.cols(); ++c)
            {
                if (c > 0)
                    out << ',';
                out << fmt::format("{:.17g}{:+.17g}j", m(r, c).real(), m(r, c).imag());
            }
            out << '\n';
        }
    }

    void write_matrix_csv(const std::filesystem::path &path, const CMatrix &m)
    {
        std::ofstream out(path);
        if (!out)
            throw InputError("cannot open " + path.string() + " for writing");
        write_matrix_csv(out, m);
    }
}
