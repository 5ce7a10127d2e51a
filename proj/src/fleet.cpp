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

#include "fairride/fleet.hpp"

#include <algorithm>
#include <map>

namespace fairride {

void Constraints::validate() const {
  if (capacity <= 0) throw InputError("capacity must be positive");
  if (max_pickup_delay <= 0) throw InputError("max pickup delay must be positive");
  if (max_detour_delay <= 0) throw InputError("max detour delay must be positive");
  if (epoch_length <= 0) throw InputError("epoch length must be positive");
  if (max_group_size <= 0) throw InputError("max group size must be positive");
}

const char* to_string(StopKind kind) { return kind == StopKind::kPickup ? "pickup" : "dropoff"; }

Anchor anchor_of(const TaxiPosition& pos, const RoadNetwork& net) {
  if (!pos.edge_to) return {pos.node, 0};
  const auto cost = net.edge_cost(pos.node, *pos.edge_to);
  if (!cost) {
    throw InputError("taxi on missing edge " + std::to_string(pos.node) + "->" +
                     std::to_string(*pos.edge_to));
  }
  return {*pos.edge_to, *cost - pos.progress};
}

int TaxiState::onboard_count() const {
  return static_cast<int>(
      std::count_if(rides.begin(), rides.end(), [](const ActiveRide& r) { return r.onboard(); }));
}

const ActiveRide* TaxiState::find_ride(RequestId id) const {
  auto it = std::lower_bound(rides.begin(), rides.end(), id,
                             [](const ActiveRide& r, RequestId v) { return r.request.id < v; });
  return (it != rides.end() && it->request.id == id) ? &*it : nullptr;
}

PlanCheck check_plan(const TaxiState& taxi, const std::vector<ActiveRide>& new_rides,
                     const std::vector<Stop>& stops, const Constraints& constraints,
                     const RoadNetwork& net, Seconds now) {
  PlanCheck out;
  auto fail = [&](std::string why) {
    out.feasible = false;
    out.violation = std::move(why);
    return out;
  };

  struct Progress {
    const ActiveRide* ride = nullptr;
    bool picked = false;
    bool dropped = false;
    Seconds pickup_abs = 0;
  };
  std::map<RequestId, Progress> rides;
  for (const auto& r : taxi.rides) rides[r.request.id] = Progress{&r, r.onboard(), false, r.picked_up_at.value_or(0)};
  for (const auto& r : new_rides) {
    if (r.onboard()) return fail("new ride " + std::to_string(r.request.id) + " is already onboard");
    if (!rides.emplace(r.request.id, Progress{&r, false, false, 0}).second) {
      return fail("request " + std::to_string(r.request.id) + " is already committed to taxi " +
                  std::to_string(taxi.id));
    }
  }
  if (static_cast<int>(rides.size()) > constraints.capacity) {
    return fail("taxi " + std::to_string(taxi.id) + " would hold " + std::to_string(rides.size()) +
                " requests, capacity " + std::to_string(constraints.capacity));
  }

  const Anchor anchor = anchor_of(taxi.position, net);
  NodeId at = anchor.node;
  Seconds t = anchor.delay;
  int occupancy = taxi.onboard_count();
  for (const Stop& s : stops) {
    auto it = rides.find(s.request_id);
    if (it == rides.end()) return fail("stop for unknown request " + std::to_string(s.request_id));
    Progress& p = it->second;
    const Request& req = p.ride->request;
    const NodeId expected = s.kind == StopKind::kPickup ? req.pickup : req.dropoff;
    if (s.node != expected) {
      return fail(std::string(to_string(s.kind)) + " of request " + std::to_string(req.id) +
                  " at wrong node " + std::to_string(s.node));
    }
    const auto leg = net.travel_time(at, s.node);
    if (!leg) return fail("stop node " + std::to_string(s.node) + " unreachable");
    t += *leg;
    at = s.node;
    if (s.kind == StopKind::kPickup) {
      if (p.picked) return fail("request " + std::to_string(req.id) + " picked up twice");
      p.picked = true;
      p.pickup_abs = now + t;
      if (++occupancy > constraints.capacity) {
        return fail("occupancy " + std::to_string(occupancy) + " exceeds capacity at pickup of " +
                    std::to_string(req.id));
      }
      if (now + t > arrival_time(req, constraints) + constraints.max_pickup_delay) {
        return fail("pickup delay of request " + std::to_string(req.id) + " exceeds bound");
      }
    } else {
      if (!p.picked) return fail("dropoff of request " + std::to_string(req.id) + " before pickup");
      if (p.dropped) return fail("request " + std::to_string(req.id) + " dropped off twice");
      p.dropped = true;
      --occupancy;
      const Seconds detour = now + t - p.pickup_abs - p.ride->direct_time;
      if (detour > constraints.max_detour_delay) {
        return fail("detour delay of request " + std::to_string(req.id) + " exceeds bound");
      }
      out.total_detour += detour;
    }
    out.etas.push_back(t);
  }
  for (const auto& [id, p] : rides) {
    if (!p.dropped) return fail("request " + std::to_string(id) + " has no dropoff in plan");
  }
  out.feasible = true;
  return out;
}

}  // namespace fairride
