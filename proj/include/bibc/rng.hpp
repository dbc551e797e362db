// SPDX-License-Identifier: Apache-2.0
//
// bibc - cell-free bistatic backscatter simulation and optimization library
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

#ifndef BIBC_RNG_HPP
#define BIBC_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace bibc
{

/// Named random streams. A stream is keyed by (master seed, drop, stream id,
/// index) so that any drop can be regenerated in isolation, in any order.
enum class Stream : std::uint64_t
{
    tags = 1,
    aps = 2,
    direct = 3,
    forward = 4,
    backscatter = 5,
    reader_noise = 6,
    ap_noise = 7,
    baseline = 8,
    test = 99
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based sub-seed derivation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t drop, Stream stream,
                                 std::uint64_t index = 0)
{
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ drop);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ index);
}

/// mt19937_64 plus portable uniform and Gaussian draws. The standard
/// distributions are implementation-defined, so the conversions are done here
/// to keep results bit-identical across standard libraries.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    Rng(std::uint64_t master, std::uint64_t drop, Stream stream, std::uint64_t index = 0)
        : engine_(derive_seed(master, drop, stream, index))
    {
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (the cosine branch only).
    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// CN(0, variance).
    std::complex<double> complex_normal(double variance = 1.0)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace bibc

#endif
