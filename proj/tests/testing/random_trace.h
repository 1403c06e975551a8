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

// Random inputs for property tests.

#ifndef DELTANET_TESTS_TESTING_RANDOM_TRACE_H_
#define DELTANET_TESTS_TESTING_RANDOM_TRACE_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "deltanet/engine.h"
#include "deltanet/prefix.h"
#include "deltanet/trace.h"

namespace deltanet::testing {

struct RandomTraceOptions {
  int bits = 8;
  size_t ops = 2000;
  int nodes = 6;
  // Chance an op is an add while some rule is live.
  double add_fraction = 0.6;
  Priority max_priority = 16;
  // Chance an add forwards to DROP.
  double drop_fraction = 0.1;
  uint64_t seed = 1;
};

// Node names used by the generators below: "n0", "n1", ...
std::string NodeName(int i);

IpPrefix RandomPrefix(std::mt19937_64& rng, int bits);

// A valid trace: deletes name live rules only, ids are never reused.
std::vector<TraceOp> RandomTrace(const RandomTraceOptions& options);

// `count` adds with ids 1..count.
std::vector<TraceOp> RandomRules(size_t count, const RandomTraceOptions& options);

}  // namespace deltanet::testing

#endif  // DELTANET_TESTS_TESTING_RANDOM_TRACE_H_
