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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string_view>

#include "risnet/netparams.hpp"

namespace risnet::detail
{
    // LU with partial pivoting; throws E when the matrix is non-finite or its
    // reciprocal condition estimate is below 1/cap.
    template <class E>
    Eigen::PartialPivLU<CMatrix> checked_lu(const CMatrix &m, double condition_cap, std::string_view what)
    {
        if (!m.allFinite())
            throw E(std::string(what) + ": matrix has non-finite entries");
        if (m.size() == 0)
            throw E(std::string(what) + ": empty matrix");

        Eigen::PartialPivLU<CMatrix> lu(m);
        // The Hager estimate can report rcond = 1 when a pivot is exactly
        // zero, so the pivot spread is checked as well.
        const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
        const double rcond = std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff());
        if (!(rcond * condition_cap >= 1.0))
        {
            std::ostringstream msg;
            msg << what << ": condition number estimate " << (rcond > 0.0 ? 1.0 / rcond : HUGE_VAL)
                << " exceeds cap " << condition_cap;
            throw E(msg.str());
        }
        return lu;
    }
}
