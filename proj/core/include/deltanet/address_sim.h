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

// Brute-force forwarding over concrete addresses, used as ground truth.

#ifndef DELTANET_ADDRESS_SIM_H_
#define DELTANET_ADDRESS_SIM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "deltanet/address.h"
#include "deltanet/engine.h"
#include "deltanet/prefix.h"
#include "deltanet/trace.h"

namespace deltanet {

class AddressSim {
 public:
  // Spaces up to this many bits keep a per-address next-hop table.
  static constexpr int kMaxTableBits = 16;
  static constexpr int kNoHop = -1;

  explicit AddressSim(AddressSpace space);

  struct Change {
    int node;
    uint64_t address;
  };

  // Applies `op`. With a table, returns the (node, address) pairs whose
  // next hop changed; otherwise returns an empty list.
  absl::StatusOr<std::vector<Change>> Apply(const TraceOp& op);

  // Index of the node the matching rule forwards to, or kNoHop. Scans the
  // node's rules.
  int NextHop(int node, const Address& addr) const;
  // Table lookup; requires has_table().
  int CachedNextHop(int node, uint64_t addr) const {
    return table_[node][addr].target;
  }

  enum class End { kNoRule, kDropped, kLoop };
  struct Walk {
    End end = End::kNoRule;
    // Visited nodes starting at the origin. For kLoop the last entry is the
    // first repeated node.
    std::vector<int> path;
  };
  Walk Forward(int node, const Address& addr) const;

  // Next hop at every node for `addr`.
  std::vector<int> NextHops(const Address& addr) const;

  // The cycle through `node` (starting at `node`) if packets to `addr`
  // leaving `node` come back to it within node_count() hops.
  std::optional<std::vector<int>> LoopThrough(int node,
                                             const Address& addr) const;

  bool has_table() const { return space_.bits() <= kMaxTableBits; }
  const AddressSpace& space() const { return space_; }
  size_t node_count() const { return names_.size(); }
  const std::string& node_name(int node) const { return names_[node]; }
  std::optional<int> FindNode(absl::string_view name) const;
  size_t rule_count() const { return where_.size(); }

  // Add lines for the rules at `node` whose match contains `addr`.
  std::string RulesCovering(int node, const Address& addr) const;
  // Every rule bound, in ascending order, plus the space minimum.
  std::vector<Address> Bounds() const;

 private:
  struct SimRule {
    RuleId id;
    int target;
    Priority priority;
    Interval match;
    IpPrefix prefix;
  };
  struct Best {
    int target = kNoHop;
    Priority priority = 0;
    RuleId id = 0;
  };

  static bool Beats(const SimRule& r, const Best& b) {
    return b.target == kNoHop || r.priority > b.priority ||
           (r.priority == b.priority && r.id > b.id);
  }

  int Intern(absl::string_view name);
  Best Scan(int node, const Address& addr) const;

  AddressSpace space_;
  std::vector<std::string> names_;
  absl::flat_hash_map<std::string, int> index_;
  std::vector<std::vector<SimRule>> rules_;
  absl::flat_hash_map<RuleId, int> where_;  // rule id -> source node
  std::vector<std::vector<Best>> table_;
};

struct Counterexample {
  std::string node;
  Address address;
  std::string expected;
  std::string got;
  // Replayable add lines for the rules involved.
  std::string trace;

  std::string ToString() const;
};

// Compares every node's next hop for every address with the engine's
// labels. Exhaustive over all addresses when the space has a table,
// otherwise over every bound of either side (forwarding is constant between
// consecutive bounds). Returns the first mismatch in (node, address) order.
std::optional<Counterexample> CompareWithEngine(const AddressSim& sim,
                                                const Engine& engine);

// Same, restricted to one node name and the addresses of `range`.
std::optional<Counterexample> CompareWithEngine(const AddressSim& sim,
                                                const Engine& engine,
                                                absl::string_view node,
                                                const Interval& range);

}  // namespace deltanet

#endif  // DELTANET_ADDRESS_SIM_H_
