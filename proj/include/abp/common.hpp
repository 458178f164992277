// SPDX-License-Identifier: Apache-2.0
//
// abp-sim: auxiliary beam pair angle estimation for mmWave MIMO links
// Copyright (C) 2026 The abp-sim contributors
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

#ifndef ABP_COMMON_H
#define ABP_COMMON_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abp
{
    using cd = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    inline constexpr double pi = std::numbers::pi;

    inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

    enum class ErrorCode
    {
        DegenerateDirection,
        DimensionMismatch,
        InvalidChi,
        InvalidArgument,
        EmptyRange,
        InfeasibleCoverage,
        InvalidRoot,
        PoolExhausted,
        ShiftConflict,
        LengthMismatch,
        BothZero,
        NoSignal,
        InsufficientNeighbors,
        OutOfRange,
        EmptyInput,
        ConfigError,
        ParseError,
        IoError
    };

    const char *error_name(ErrorCode code);

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &what)
            : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    // Counter-based seed derivation (splitmix64 finalizer)
    inline std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0)
    {
        std::uint64_t s = mix_seed(master);
        s = mix_seed(s ^ a);
        s = mix_seed(s ^ (b + 0x632BE59BD9B4E019ULL));
        return mix_seed(s ^ (c + 0x8CB92BA72F3D8DD7ULL));
    }
}

#endif
