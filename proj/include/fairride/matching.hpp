// Copyright 2026 The FairRide Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairride/fleet.hpp"

namespace fairride {

// Objective weights: every matched request earns reward_per_match and every
// second of added detour costs detour_penalty.
struct MatchWeights {
  std::int64_t reward_per_match = 6000;
  std::int64_t detour_penalty = 1;

  // reward = 10 * max_detour_delay * penalty, so one more match always beats
  // the detour the same taxi could save.
  static MatchWeights defaults_for(const Constraints& c);
  friend bool operator==(const MatchWeights&, const MatchWeights&) = default;
};

struct Insertion {
  StopPlan plan;
  Seconds added_detour = 0;
};

// Exhaustive search over stop orderings that serve the taxi's committed rides
// plus `new_requests`. Returns the minimum-added-detour feasible plan
// (ties broken by lexicographically smallest stop sequence), or nullopt when
// no ordering is feasible or the rides would exceed capacity. `now` is the
// absolute time of the taxi's position.
std::optional<Insertion> feasible_insertion(const TaxiState& taxi,
                                            std::span<const Request> new_requests,
                                            const Constraints& constraints,
                                            const RoadNetwork& net, Seconds now);

struct Candidate {
  TaxiId taxi_id = 0;
  std::vector<RequestId> group;  // sorted
  StopPlan plan;
  Seconds added_detour = 0;
};

// Every feasible (taxi, group) pair, groups of size 1..min(free seats,
// max_group_size) built level by level: a group is tried only when all its
// one-smaller subsets were feasible for that taxi. Ordered by taxi id, then
// group size, then group lexicographically; a candidate's index is its id.
std::vector<Candidate> generate_candidates(std::span<const TaxiState> taxis,
                                           std::span<const Request> batch,
                                           const Constraints& constraints,
                                           const RoadNetwork& net, Seconds now);

struct TaxiAssignment {
  TaxiId taxi_id = 0;
  std::vector<RequestId> group;  // new requests given to the taxi, sorted
  StopPlan plan;                 // the taxi's full replacement plan
  Seconds added_detour = 0;
};

struct Assignment {
  std::vector<TaxiAssignment> entries;  // sorted by taxi id

  std::size_t matched_count() const;
  // (request, taxi) pairs sorted by request id.
  std::vector<std::pair<RequestId, TaxiId>> matches() const;
  std::int64_t objective(const MatchWeights& w) const;
};

std::int64_t candidate_value(const Candidate& c, const MatchWeights& w);

// Exact maximiser of total candidate value subject to one candidate per taxi
// and one candidate per request. Returns chosen candidate ids ascending; among
// optimal selections the lexicographically smallest id set wins.
std::vector<std::size_t> select_candidates(std::span<const Candidate> candidates,
                                           const MatchWeights& weights);

Assignment solve_batch_ilp(std::span<const Candidate> candidates, std::span<const Request> batch,
                           const MatchWeights& weights);

// One request at a time in arrival order; each goes to the feasible taxi with
// the smallest added detour (smallest taxi id on ties), whose plan is updated
// before the next request. A taxi takes at most max_group_size new requests
// per call.
Assignment greedy_sequential_match(std::span<const TaxiState> taxis,
                                   std::span<const Request> batch,
                                   const Constraints& constraints, const RoadNetwork& net,
                                   Seconds now);

// Plug-in seam for dispatch policies. `pool` holds every pending request,
// sorted by (arrival_epoch, id). Implementations must only return feasible
// assignments; the simulator re-validates and aborts otherwise.
class MatchingPolicy {
 public:
  virtual ~MatchingPolicy() = default;
  virtual std::string name() const = 0;
  virtual Assignment match(Epoch epoch, std::span<const TaxiState> taxis,
                           std::span<const Request> pool, const Constraints& constraints,
                           const RoadNetwork& net) = 0;
};

// Batch matching: candidate groups solved exactly as a set-packing program.
class RewardPlusDelayPolicy final : public MatchingPolicy {
 public:
  explicit RewardPlusDelayPolicy(std::optional<MatchWeights> weights = std::nullopt)
      : weights_(weights) {}
  std::string name() const override { return "rpd"; }
  Assignment match(Epoch epoch, std::span<const TaxiState> taxis, std::span<const Request> pool,
                   const Constraints& constraints, const RoadNetwork& net) override;

 private:
  std::optional<MatchWeights> weights_;
};

class GreedyPolicy final : public MatchingPolicy {
 public:
  std::string name() const override { return "greedy"; }
  Assignment match(Epoch epoch, std::span<const TaxiState> taxis, std::span<const Request> pool,
                   const Constraints& constraints, const RoadNetwork& net) override;
};

// "rpd" or "greedy"; throws InputError otherwise.
std::unique_ptr<MatchingPolicy> make_policy(const std::string& name,
                                            std::optional<MatchWeights> weights = std::nullopt);

// Re-checks a policy's output against the taxis and pending pool. Throws
// FeasibilityError describing the first problem found.
void validate_assignment(std::span<const TaxiState> taxis, std::span<const Request> pool,
                         const Assignment& assignment, const Constraints& constraints,
                         const RoadNetwork& net, Seconds now);

}  // namespace fairride
