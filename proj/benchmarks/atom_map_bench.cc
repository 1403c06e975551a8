// Copyright 2026 The deltanet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "deltanet/atom_map.h"
#include "deltanet/generator.h"
#include "deltanet/prefix.h"

namespace deltanet {
namespace {

std::vector<Interval> PrefixIntervals(size_t count) {
  std::vector<Interval> out;
  const AddressSpace space;
  for (const IpPrefix& p : SyntheticPrefixes(count, 1)) {
    out.push_back(*PrefixToInterval(p, space));
  }
  return out;
}

void BM_CreateAtoms(benchmark::State& state) {
  const std::vector<Interval> ivs = PrefixIntervals(state.range(0));
  for (auto _ : state) {
    AtomMap map{AddressSpace()};
    for (const Interval& iv : ivs) benchmark::DoNotOptimize(map.CreateAtomsPlus(iv));
  }
  state.SetItemsProcessed(state.iterations() * ivs.size());
}
BENCHMARK(BM_CreateAtoms)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_AtomsOf(benchmark::State& state) {
  const std::vector<Interval> ivs = PrefixIntervals(state.range(0));
  AtomMap map{AddressSpace()};
  for (const Interval& iv : ivs) map.CreateAtomsPlus(iv);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map.AtomsOf(ivs[i++ % ivs.size()]));
  }
}
BENCHMARK(BM_AtomsOf)->Arg(10000)->Arg(100000);

}  // namespace
}  // namespace deltanet

BENCHMARK_MAIN();
