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

#include "fairride/validate.hpp"

#include <algorithm>

namespace fairride {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string req(RequestId id) { return "request " + std::to_string(id); }
std::string cab(TaxiId id) { return "taxi " + std::to_string(id); }

}  // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCapacity: return "capacity";
    case ViolationKind::kPickupDelay: return "pickup_delay";
    case ViolationKind::kDetourDelay: return "detour_delay";
    case ViolationKind::kDropoffWithoutPickup: return "dropoff_without_pickup";
    case ViolationKind::kDuplicateMatch: return "duplicate_match";
    case ViolationKind::kTeleport: return "teleport";
    case ViolationKind::kLifecycle: return "lifecycle";
    case ViolationKind::kOnboardMismatch: return "onboard_mismatch";
    case ViolationKind::kOrdering: return "ordering";
    case ViolationKind::kInconsistentRecord: return "inconsistent_record";
  }
  return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

RunLogValidator::RunLogValidator(const RoadNetwork& net, const Constraints& constraints)
    : net_(net), c_(constraints), order_(constraints.epoch_length) {}

void RunLogValidator::flag(ViolationKind kind, std::string message) {
  report_.violations.push_back(Violation{kind, index_, std::move(message)});
}

RunLogValidator::RequestTrack* RunLogValidator::track(RequestId id, const char* what) {
  auto it = requests_.find(id);
  if (it == requests_.end() || !it->second.request) {
    flag(ViolationKind::kLifecycle, std::string(what) + " for " + req(id) + " before its arrival");
    return nullptr;
  }
  return &it->second;
}

std::optional<Seconds> RunLogValidator::min_travel(const TaxiPosition& from,
                                                   const TaxiPosition& to) const {
  if (from == to) return 0;
  if (from.edge_to && to.edge_to && from.node == to.node && *from.edge_to == *to.edge_to &&
      to.progress >= from.progress) {
    return to.progress - from.progress;
  }
  const Anchor a = anchor_of(from, net_);
  const auto leg = net_.travel_time(a.node, to.node);
  if (!leg) return std::nullopt;
  return a.delay + *leg + (to.edge_to ? to.progress : 0);
}

void RunLogValidator::check_move(TaxiId taxi, const TaxiPosition& to, Seconds t) {
  if (!net_.contains(to.node) || (to.edge_to && !net_.contains(*to.edge_to))) {
    flag(ViolationKind::kTeleport, cab(taxi) + " reported at a node outside the network");
    return;
  }
  if (to.edge_to) {
    const auto cost = net_.edge_cost(to.node, *to.edge_to);
    if (!cost || to.progress < 0 || to.progress >= *cost) {
      flag(ViolationKind::kTeleport, cab(taxi) + " reported on a missing edge or past its end");
      return;
    }
  }
  auto it = fixes_.find(taxi);
  if (it != fixes_.end()) {
    const Seconds elapsed = t - it->second.t;
    const auto need = min_travel(it->second.position, to);
    if (!need || *need > elapsed) {
      flag(ViolationKind::kTeleport,
           cab(taxi) + " moved to node " + std::to_string(to.node) + " in " +
               std::to_string(elapsed) + " s, which needs " +
               (need ? std::to_string(*need) + " s" : std::string("an unreachable path")));
    }
  }
  fixes_[taxi] = Fix{to, t};
}

void RunLogValidator::accept(const Event& e) {
  try {
    order_.accept(e);
  } catch (const OrderingError& err) {
    flag(ViolationKind::kOrdering, err.what());
  }
  const Seconds t = time_of(e, c_.epoch_length);
  std::visit(
      Overloaded{
          [&](const PositionEvent& x) {
            check_move(x.taxi_id, x.position, t);
            const auto held = static_cast<int>(onboard_[x.taxi_id].size());
            if (held != x.n_onboard) {
              flag(ViolationKind::kOnboardMismatch,
                   cab(x.taxi_id) + " reports " + std::to_string(x.n_onboard) +
                       " onboard, replay gives " + std::to_string(held));
            }
          },
          [&](const ArrivalEvent& x) {
            auto& r = requests_[x.request.id];
            if (r.request) {
              flag(ViolationKind::kLifecycle, req(x.request.id) + " arrives twice");
              return;
            }
            r.request = x.request;
            r.direct = x.direct_time;
            const auto tt = net_.travel_time(x.request.pickup, x.request.dropoff);
            if (!tt) {
              flag(ViolationKind::kInconsistentRecord,
                   req(x.request.id) + " has an unreachable or unknown dropoff");
            } else if (*tt != x.direct_time) {
              flag(ViolationKind::kInconsistentRecord,
                   req(x.request.id) + " records direct time " + std::to_string(x.direct_time) +
                       " s, network gives " + std::to_string(*tt) + " s");
              r.direct = *tt;
            }
          },
          [&](const MatchedEvent& x) {
            RequestTrack* r = track(x.request_id, "match");
            if (!r) return;
            if (r->taxi) {
              flag(ViolationKind::kDuplicateMatch, req(x.request_id) + " matched again to " +
                                                       cab(x.taxi_id));
              return;
            }
            if (r->unmatched) {
              flag(ViolationKind::kLifecycle, req(x.request_id) + " matched after being finalized");
            }
            r->taxi = x.taxi_id;
          },
          [&](const PickupEvent& x) {
            RequestTrack* r = track(x.request_id, "pickup");
            if (!r) return;
            if (!r->taxi || *r->taxi != x.taxi_id) {
              flag(ViolationKind::kLifecycle,
                   req(x.request_id) + " picked up by unmatched " + cab(x.taxi_id));
            }
            if (r->pickup || r->dropped) {
              flag(ViolationKind::kLifecycle, req(x.request_id) + " picked up twice");
              return;
            }
            check_move(x.taxi_id, TaxiPosition{r->request->pickup, std::nullopt, 0}, x.t);
            r->pickup = x.t;
            auto& held = onboard_[x.taxi_id];
            held.insert(x.request_id);
            if (static_cast<int>(held.size()) > c_.capacity) {
              flag(ViolationKind::kCapacity, cab(x.taxi_id) + " carries " +
                                                 std::to_string(held.size()) + " passengers");
            }
            const Seconds delay = x.t - arrival_time(*r->request, c_);
            if (delay > c_.max_pickup_delay) {
              flag(ViolationKind::kPickupDelay,
                   req(x.request_id) + " waited " + std::to_string(delay) + " s");
            } else if (delay < 0) {
              flag(ViolationKind::kLifecycle, req(x.request_id) + " picked up before it arrived");
            }
          },
          [&](const DropoffEvent& x) {
            RequestTrack* r = track(x.request_id, "dropoff");
            if (!r) return;
            if (r->dropped) {
              flag(ViolationKind::kLifecycle, req(x.request_id) + " dropped off twice");
              return;
            }
            if (!r->pickup) {
              flag(ViolationKind::kDropoffWithoutPickup,
                   req(x.request_id) + " dropped off before any pickup");
              r->dropped = true;
              return;
            }
            if (!r->taxi || *r->taxi != x.taxi_id ||
                onboard_[x.taxi_id].count(x.request_id) == 0) {
              flag(ViolationKind::kLifecycle,
                   req(x.request_id) + " dropped off by " + cab(x.taxi_id) + " not carrying it");
            }
            check_move(x.taxi_id, TaxiPosition{r->request->dropoff, std::nullopt, 0}, x.t);
            onboard_[x.taxi_id].erase(x.request_id);
            r->dropped = true;
            const Seconds detour = x.t - *r->pickup - r->direct;
            if (detour > c_.max_detour_delay) {
              flag(ViolationKind::kDetourDelay,
                   req(x.request_id) + " detoured " + std::to_string(detour) + " s");
            } else if (detour < 0) {
              flag(ViolationKind::kInconsistentRecord,
                   req(x.request_id) + " rode faster than its shortest path");
            }
          },
          [&](const UnmatchedEvent& x) {
            RequestTrack* r = track(x.request_id, "unmatched_final");
            if (!r) return;
            if (r->taxi || r->unmatched) {
              flag(ViolationKind::kLifecycle,
                   req(x.request_id) + " finalized as unmatched after a match or twice");
            }
            r->unmatched = true;
          }},
      e);
  ++index_;
  ++report_.events;
}

ValidationReport RunLogValidator::finish() && { return std::move(report_); }

ValidationReport validate_runlog(const RunLog& log, const RoadNetwork& net,
                                 const Constraints& constraints) {
  RunLogValidator v(net, constraints);
  for (const Event& e : log.events) v.accept(e);
  return std::move(v).finish();
}

}  // namespace fairride
