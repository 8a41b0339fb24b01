// SPDX-License-Identifier: Apache-2.0
//
// mmwq: uplink rate analysis for mmWave massive MIMO with low-precision ADCs
// Copyright (C) 2026 The mmwq Authors
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

#ifndef MMWQ_RNG_HPP
#define MMWQ_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mmwq
{
    using Rng = std::mt19937_64;

    // Entity tags for per-trial substreams
    enum class Stream : std::uint64_t
    {
        channel = 1,
        training = 2,
        pilots = 3,
        symbols = 4,
        user = 100
    };

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Independent generator for (seed, trial, entity). Does not depend on scheduling.
    inline Rng substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t entity)
    {
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ (trial + 0x632be59bd9b4e019ULL));
        h = splitmix64(h ^ (entity + 0x8cb92ba72f3d8dd7ULL));
        std::seed_seq seq{std::uint32_t(h), std::uint32_t(h >> 32), std::uint32_t(seed), std::uint32_t(trial)};
        return Rng(seq);
    }

    inline Rng substream(std::uint64_t seed, std::uint64_t trial, Stream s)
    {
        return substream(seed, trial, std::uint64_t(s));
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance
    inline std::complex<double> complex_normal(Rng &rng, double variance)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        const double s = std::sqrt(variance / 2.0);
        const double re = n(rng);
        const double im = n(rng);
        return {s * re, s * im};
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        std::uniform_real_distribution<double> u(lo, hi);
        return u(rng);
    }

} // namespace mmwq

#endif
