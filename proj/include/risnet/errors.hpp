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

#include <stdexcept>
#include <string>

namespace risnet
{
    // Two families: bad input (configuration, geometry, parse) and numerical
    // failure (singular or resonant systems). The CLI maps them to distinct
    // exit codes.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InputError : public Error
    {
    public:
        using Error::Error;
    };

    class NumericalError : public Error
    {
    public:
        using Error::Error;
    };

    class DimensionMismatch : public InputError
    {
    public:
        using InputError::InputError;
    };

    class DegenerateLoad : public InputError
    {
    public:
        using InputError::InputError;
    };

    class InvalidGeometry : public InputError
    {
    public:
        using InputError::InputError;
    };

    class OverlappingDipoles : public InvalidGeometry
    {
    public:
        using InvalidGeometry::InvalidGeometry;
    };

    class ConfigError : public InputError
    {
    public:
        using InputError::InputError;
    };

    class ParseError : public InputError
    {
    public:
        ParseError(const std::string &what, std::size_t line, std::size_t column)
            : InputError(what), line_(line), column_(column) {}

        std::size_t line() const noexcept { return line_; }
        std::size_t column() const noexcept { return column_; }

    private:
        std::size_t line_;
        std::size_t column_;
    };

    class BudgetExceeded : public InputError
    {
    public:
        using InputError::InputError;
    };

    class SingularConversion : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };

    class ResonantConfiguration : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };

    class SingularNetwork : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };
}
