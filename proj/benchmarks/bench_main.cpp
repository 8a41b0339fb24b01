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


#include "mmwq/closed_form.hpp"
#include "mmwq/quantizer.hpp"
#include "mmwq/rate.hpp"
#include "mmwq/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace mmwq;

namespace
{
    SystemConfig fig2(int K, int bits)
    {
        SystemConfig c;
        c.L = 3;
        c.K = K;
        c.N = 64;
        c.M = 2;
        c.adc_bits = bits;
        c.p_p = K;
        return validated(c);
    }

    void BM_BesselJ0(benchmark::State &state)
    {
        double x = 0.1;
        for (auto _ : state)
        {
            benchmark::DoNotOptimize(bessel_j0(x));
            x += 0.37;
            if (x > 200.0)
                x = 0.1;
        }
    }
    BENCHMARK(BM_BesselJ0);

    void BM_TripleSumCached(benchmark::State &state)
    {
        const auto N = std::int64_t(state.range(0));
        for (auto _ : state)
            benchmark::DoNotOptimize(j0_triple_double_sum(N));
    }
    BENCHMARK(BM_TripleSumCached)->Arg(64)->Arg(1024)->Arg(16384)->Unit(benchmark::kMicrosecond);

    void BM_LowerBound(benchmark::State &state)
    {
        auto c = fig2(8, 1);
        c.N = int(state.range(0));
        for (auto _ : state)
            benchmark::DoNotOptimize(lower_bound_rate(c).R_LB);
    }
    BENCHMARK(BM_LowerBound)->Arg(64)->Arg(4096)->Arg(10000000);

    void BM_LloydMaxDesign(benchmark::State &state)
    {
        const int bits = int(state.range(0));
        for (auto _ : state)
            benchmark::DoNotOptimize(design_lloyd_max(bits).distortion);
    }
    BENCHMARK(BM_LloydMaxDesign)->DenseRange(1, 12, 5)->Unit(benchmark::kMicrosecond);

    void BM_Quantize(benchmark::State &state)
    {
        auto rng = substream(1, 0, 0);
        Eigen::VectorXcd y(4096);
        for (Eigen::Index i = 0; i < y.size(); ++i)
            y[i] = complex_normal(rng, 1.0);
        const int bits = int(state.range(0));
        for (auto _ : state)
            benchmark::DoNotOptimize(lloyd_max_quantize(y, bits, 1.0));
        state.SetItemsProcessed(state.iterations() * y.size());
    }
    BENCHMARK(BM_Quantize)->Arg(1)->Arg(3)->Arg(8);

    void BM_TrialSemi(benchmark::State &state)
    {
        const auto c = fig2(int(state.range(0)), 1);
        std::uint64_t t = 0;
        for (auto _ : state)
            benchmark::DoNotOptimize(run_trial(c, t++, RateOptions{}));
    }
    BENCHMARK(BM_TrialSemi)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

    void BM_TrialSymbol(benchmark::State &state)
    {
        const auto c = fig2(int(state.range(0)), 3);
        RateOptions opt;
        opt.mode = RateMode::symbol_level;
        std::uint64_t t = 0;
        for (auto _ : state)
            benchmark::DoNotOptimize(run_trial(c, t++, opt));
    }
    BENCHMARK(BM_TrialSymbol)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);
} // namespace

BENCHMARK_MAIN();
