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

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "fairride/demand.hpp"
#include "fairride/road_network.hpp"
#include "fairride/types.hpp"

namespace fairride {

// Capacity and time bounds applied to every plan, plus the decision-epoch
// length.
struct Constraints {
  int capacity = 4;
  Seconds max_pickup_delay = 300;
  Seconds max_detour_delay = 600;
  Seconds epoch_length = 60;
  // Largest group of new requests offered to one taxi in one epoch.
  int max_group_size = 3;

  // Throws InputError when a field is not positive.
  void validate() const;
  friend bool operator==(const Constraints&, const Constraints&) = default;
};

enum class StopKind { kPickup = 0, kDropoff = 1 };

const char* to_string(StopKind kind);

struct Stop {
  NodeId node = 0;
  StopKind kind = StopKind::kPickup;
  RequestId request_id = 0;

  friend auto operator<=>(const Stop&, const Stop&) = default;
};

// Remaining stops of a taxi, with ETAs in seconds from the planning instant.
struct StopPlan {
  std::vector<Stop> stops;
  std::vector<Seconds> etas;

  bool empty() const { return stops.empty(); }
  friend bool operator==(const StopPlan&, const StopPlan&) = default;
};

// A request a taxi is committed to, either waiting for pickup or onboard.
struct ActiveRide {
  Request request;
  Seconds direct_time = 0;  // shortest pickup->dropoff time
  std::optional<Seconds> picked_up_at;

  bool onboard() const { return picked_up_at.has_value(); }
  friend bool operator==(const ActiveRide&, const ActiveRide&) = default;
};

// A taxi is either parked at `node` or `progress` seconds into the edge
// node -> *edge_to.
struct TaxiPosition {
  NodeId node = 0;
  std::optional<NodeId> edge_to;
  Seconds progress = 0;

  friend bool operator==(const TaxiPosition&, const TaxiPosition&) = default;
};

// First node the taxi can route from, and the seconds until it gets there.
struct Anchor {
  NodeId node = 0;
  Seconds delay = 0;
};

Anchor anchor_of(const TaxiPosition& pos, const RoadNetwork& net);

struct TaxiState {
  TaxiId id = 0;
  TaxiPosition position;
  StopPlan plan;
  std::vector<ActiveRide> rides;  // sorted by request id

  int onboard_count() const;
  const ActiveRide* find_ride(RequestId id) const;
  friend bool operator==(const TaxiState&, const TaxiState&) = default;
};

// Result of replaying a stop sequence from a taxi's current position.
struct PlanCheck {
  bool feasible = false;
  std::string violation;     // first violated rule when infeasible
  std::vector<Seconds> etas;  // seconds from `now`, per stop
  Seconds total_detour = 0;  // summed planned detour of every ride dropped off
};

// Replays `stops` for `taxi` whose committed rides are extended by
// `new_rides`, checking coverage (each onboard ride dropped off once, each
// waiting ride picked up then dropped off), occupancy <= capacity and both
// delay bounds. `now` is the absolute time of the taxi's current position.
PlanCheck check_plan(const TaxiState& taxi, const std::vector<ActiveRide>& new_rides,
                     const std::vector<Stop>& stops, const Constraints& constraints,
                     const RoadNetwork& net, Seconds now);

inline Seconds arrival_time(const Request& r, const Constraints& c) {
  return r.arrival_epoch * c.epoch_length;
}

}  // namespace fairride
