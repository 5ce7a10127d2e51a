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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fairride/fleet.hpp"
#include "fairride/road_network.hpp"
#include "fairride/runlog.hpp"

namespace fairride {

enum class ViolationKind {
  kCapacity,
  kPickupDelay,
  kDetourDelay,
  kDropoffWithoutPickup,
  kDuplicateMatch,
  kTeleport,
  kLifecycle,
  kOnboardMismatch,
  kOrdering,
  kInconsistentRecord,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t event_index;  // 0-based, header excluded
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t events = 0;

  bool clean() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

// Replays a log event by event. Usable on a stream: feed events in file
// order, then call finish().
class RunLogValidator {
 public:
  RunLogValidator(const RoadNetwork& net, const Constraints& constraints);

  void accept(const Event& e);
  ValidationReport finish() &&;

 private:
  struct RequestTrack {
    std::optional<Request> request;
    Seconds direct = 0;
    std::optional<TaxiId> taxi;
    std::optional<Seconds> pickup;
    bool dropped = false;
    bool unmatched = false;
  };
  // Last known place of a taxi and when it was there.
  struct Fix {
    TaxiPosition position;
    Seconds t = 0;
  };

  void flag(ViolationKind kind, std::string message);
  void check_move(TaxiId taxi, const TaxiPosition& to, Seconds t);
  std::optional<Seconds> min_travel(const TaxiPosition& from, const TaxiPosition& to) const;
  RequestTrack* track(RequestId id, const char* what);

  const RoadNetwork& net_;
  Constraints c_;
  OrderingChecker order_;
  std::map<RequestId, RequestTrack> requests_;
  std::map<TaxiId, std::set<RequestId>> onboard_;
  std::map<TaxiId, Fix> fixes_;
  ValidationReport report_;
  std::size_t index_ = 0;
};

ValidationReport validate_runlog(const RunLog& log, const RoadNetwork& net,
                                 const Constraints& constraints);

}  // namespace fairride
