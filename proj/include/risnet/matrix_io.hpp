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

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "risnet/netparams.hpp"

namespace risnet
{
    // Complex matrix CSV: one matrix row per line, comma separated entries,
    // each written as `re+imj` (e.g. `50+0j`, `1.5e-3-2j`). Plain reals and
    // pure imaginaries (`4j`) are accepted on input. Blank lines and lines
    // starting with `#` are skipped.
    CMatrix read_matrix_csv(std::istream &in);
    CMatrix read_matrix_csv(const std::filesystem::path &path);

    void write_matrix_csv(std::ostream &out, const CMatrix &m);
    void write_matrix_csv(const std::filesystem::path &path, const CMatrix &m);

    // Parses one `re+imj` token; throws ParseError with the given position.
    cdouble parse_complex(std::string_view token, std::size_t line = 0, std::size_t column = 0);
}
