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
#include <string>

#include "risnet/netparams.hpp"

namespace risnet
{
    // Touchstone v1, single frequency point, real/imaginary format.
    //
    // Writer layout: option line `# Hz S RI R <z0>`, then one data record. For
    // two ports the record is `f S11 S21 S12 S22` on one line (the v1 two-port
    // ordering). For N >= 3 each matrix row starts on a new line and holds at
    // most four complex entries per line; the frequency precedes the first row.
    void write_touchstone(std::ostream &out, const FullNetworkMatrix &s, double frequency_hz,
                          const std::string &comment = {});
    void write_touchstone(const std::filesystem::path &path, const FullNetworkMatrix &s, double frequency_hz,
                          const std::string &comment = {});

    struct TouchstoneData
    {
        double frequency_hz = 0.0;
        FullNetworkMatrix s;
    };

    // Reads the first frequency point of a v1 S-parameter file. Accepts RI, MA
    // and DB formats and the Hz/kHz/MHz/GHz units. The port count is inferred
    // from the number of values in the first record.
    TouchstoneData read_touchstone(std::istream &in);
    TouchstoneData read_touchstone(const std::filesystem::path &path);
}
