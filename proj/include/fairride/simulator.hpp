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
#include <string>
#include <vector>

#include "fairride/demand.hpp"
#include "fairride/fleet.hpp"
#include "fairride/matching.hpp"
#include "fairride/road_network.hpp"
#include "fairride/runlog.hpp"

namespace fairride {

enum class MovementMode {
  // Travel time carries over between epochs: a taxi part-way along an edge
  // keeps its progress.
  kContinuous,
  // Legacy behaviour kept only so the stuck-taxi regression test can show
  // that it fails: a taxi moves only if it can reach the next node within
  // the remaining epoch time, so edges longer than an epoch are never
  // entered.
  kSnapToNode,
};

struct SimConfig {
  Epoch horizon_epochs = 1440;
  std::int64_t n_taxis = 1000;
  // Empty: place taxis uniformly at random over nodes from `seed`.
  // Otherwise one start node per taxi.
  std::vector<NodeId> initial_nodes;
  std::string policy = "rpd";
  Constraints constraints;
  std::optional<MatchWeights> weights;
  std::uint64_t seed = 0;
  MovementMode movement = MovementMode::kContinuous;
};

struct StopEvent {
  Seconds t = 0;  // absolute
  StopKind kind = StopKind::kPickup;
  RequestId request_id = 0;
};

struct AdvanceResult {
  TaxiState taxi;
  std::vector<StopEvent> events;
};

// Moves the taxi for `duration` seconds from absolute time `start` along its
// plan, following shortest paths stop to stop and carrying partial-edge
// progress. Stops are executed (and reported) at the exact second they are
// reached, including a stop reached exactly at start + duration. A taxi
// with an empty plan stays put.
AdvanceResult advance_taxi(const TaxiState& taxi, Seconds duration, Seconds start,
                           const RoadNetwork& net,
                           MovementMode mode = MovementMode::kContinuous);

struct RunStats {
  std::int64_t arrivals = 0;
  std::int64_t matched = 0;
  std::int64_t unmatched = 0;
  std::int64_t pending_at_horizon = 0;
  std::int64_t completed = 0;
};

// Runs the epoch loop and streams the log into `sink`. `header` supplies the
// input descriptions (inputs, demand); configuration fields are filled in
// from `config`. Throws InputError when demand does not fit the network or
// horizon, FeasibilityError when the policy returns an invalid assignment.
RunStats simulate(const SimConfig& config, const RoadNetwork& net, const RequestStream& demand,
                  MatchingPolicy& policy, EventSink& sink, RunHeader header = {});

// Convenience: policy chosen by config.policy, log collected in memory.
RunLog run(const SimConfig& config, const RoadNetwork& net, const RequestStream& demand,
           RunHeader header = {});

}  // namespace fairride
