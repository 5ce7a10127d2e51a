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

#include <gtest/gtest.h>

#include "fairride/simulator.hpp"
#include "testing.hpp"

namespace fairride {
namespace {

Constraints defaults() {
  Constraints c;
  c.capacity = 4;
  c.max_pickup_delay = 300;
  c.max_detour_delay = 600;
  c.epoch_length = 60;
  return c;
}

std::string describe(const ValidationReport& r) {
  std::string out;
  for (const auto& v : r.violations) out += std::string(to_string(v.kind)) + ": " + v.message + "\n";
  return out;
}

TEST(ValidateRunlog, EngineLogsAreClean) {
  int configs = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    for (const char* policy : {"rpd", "greedy"}) {
      const auto sr = testing::small_run(seed, policy);
      const RoadNetwork net = sr.graph.build();
      const RunLog log = run(sr.config, net, sr.demand);
      const ValidationReport report = validate_runlog(log, net, log.header.constraints);
      EXPECT_TRUE(report.clean()) << "seed " << seed << " " << policy << "\n" << describe(report);
      EXPECT_EQ(report.events, log.events.size());
      ++configs;
    }
  }
  EXPECT_GE(configs, 20);
}

TEST(ValidateRunlog, DropoffBeforePickup) {
  const RoadNetwork net = testing::line_graph().build();
  const std::vector<Event> events{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      ArrivalEvent{{1, 1, 3, 0, 0}, 180},
      MatchedEvent{0, 1, 1},
      DropoffEvent{2, 180, 1, 1},
  };
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, defaults());
  EXPECT_EQ(r.violations.size(), 1u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kDropoffWithoutPickup), 1u);
  EXPECT_EQ(r.violations[0].event_index, 3u);
}

TEST(ValidateRunlog, FiveOnboardAtCapacityFour) {
  const RoadNetwork net = testing::line_graph().build();
  std::vector<Event> events{PositionEvent{0, 1, {1, std::nullopt, 0}, 0}};
  for (RequestId id = 1; id <= 5; ++id) events.push_back(ArrivalEvent{{id, 1, 2, 0, 0}, 60});
  for (RequestId id = 1; id <= 5; ++id) events.push_back(MatchedEvent{0, id, 1});
  for (RequestId id = 1; id <= 5; ++id) events.push_back(PickupEvent{0, 0, id, 1});
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, defaults());
  EXPECT_EQ(r.violations.size(), 1u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kCapacity), 1u);
}

TEST(ValidateRunlog, TeleportingTaxi) {
  const RoadNetwork net = testing::line_graph().build();
  const std::vector<Event> events{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      PositionEvent{1, 1, {3, std::nullopt, 0}, 0},
  };
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, defaults());
  EXPECT_EQ(r.violations.size(), 1u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kTeleport), 1u);

  // Moving one edge per epoch, or along an edge, is fine.
  const std::vector<Event> ok{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      PositionEvent{1, 1, {2, std::nullopt, 0}, 0},
      PositionEvent{2, 1, {2, NodeId{3}, 60}, 0},
      PositionEvent{3, 1, {3, std::nullopt, 0}, 0},
  };
  EXPECT_TRUE(validate_runlog(RunLog{{}, ok}, net, defaults()).clean());

  // Progress past the end of an edge, or backwards along it, is not.
  const std::vector<Event> past{PositionEvent{0, 1, {2, NodeId{3}, 120}, 0}};
  EXPECT_EQ(validate_runlog(RunLog{{}, past}, net, defaults()).count(ViolationKind::kTeleport), 1u);
  const std::vector<Event> backwards{PositionEvent{0, 1, {2, NodeId{3}, 60}, 0},
                                     PositionEvent{1, 1, {2, NodeId{3}, 10}, 0}};
  EXPECT_EQ(validate_runlog(RunLog{{}, backwards}, net, defaults()).count(ViolationKind::kTeleport),
            1u);
}

TEST(ValidateRunlog, StopAwayFromTaxiIsTeleport) {
  const RoadNetwork net = testing::line_graph().build();
  const std::vector<Event> events{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      ArrivalEvent{{1, 3, 2, 0, 0}, 0},
  };
  // 3 -> 2 is unreachable; the arrival itself is inconsistent.
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, defaults());
  EXPECT_EQ(r.count(ViolationKind::kInconsistentRecord), 1u);

  const std::vector<Event> far{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      ArrivalEvent{{1, 3, 3, 0, 0}, 0},
      MatchedEvent{0, 1, 1},
      PickupEvent{0, 30, 1, 1},
  };
  EXPECT_EQ(validate_runlog(RunLog{{}, far}, net, defaults()).count(ViolationKind::kTeleport), 1u);
}

TEST(ValidateRunlog, DuplicateMatch) {
  const RoadNetwork net = testing::line_graph().build();
  const std::vector<Event> events{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      PositionEvent{0, 2, {1, std::nullopt, 0}, 0},
      ArrivalEvent{{1, 1, 3, 0, 0}, 180},
      MatchedEvent{0, 1, 1},
      MatchedEvent{0, 1, 2},
  };
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, defaults());
  EXPECT_EQ(r.violations.size(), 1u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kDuplicateMatch), 1u);
}

TEST(ValidateRunlog, DelayBounds) {
  const RoadNetwork net = testing::line_graph().build();
  Constraints c = defaults();
  c.max_pickup_delay = 100;
  c.max_detour_delay = 30;
  const std::vector<Event> events{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      ArrivalEvent{{1, 1, 2, 0, 0}, 60},
      MatchedEvent{0, 1, 1},
      PickupEvent{2, 120, 1, 1},   // waited 120 s
      DropoffEvent{3, 240, 1, 1},  // 120 s ride on a 60 s path
  };
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, c);
  EXPECT_EQ(r.count(ViolationKind::kPickupDelay), 1u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kDetourDelay), 1u) << describe(r);
  EXPECT_EQ(r.violations.size(), 2u) << describe(r);
}

TEST(ValidateRunlog, LifecycleAndBookkeeping) {
  const RoadNetwork net = testing::line_graph().build();
  const std::vector<Event> events{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 1},  // claims a rider it does not have
      MatchedEvent{0, 7, 1},                         // never arrived
      ArrivalEvent{{1, 1, 2, 0, 0}, 60},
      UnmatchedEvent{0, 1},
      MatchedEvent{1, 1, 1},  // after finalisation; also out of order
  };
  const ValidationReport r = validate_runlog(RunLog{{}, events}, net, defaults());
  EXPECT_EQ(r.count(ViolationKind::kOnboardMismatch), 1u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kLifecycle), 2u) << describe(r);
  EXPECT_EQ(r.count(ViolationKind::kOrdering), 1u) << describe(r);
}

TEST(ValidateRunlog, StreamingValidatorMatchesWholeLog) {
  const auto sr = testing::small_run(4, "greedy");
  const RoadNetwork net = sr.graph.build();
  RunLog log = run(sr.config, net, sr.demand);
  // Break it: drop the first pickup so its dropoff has none.
  for (auto it = log.events.begin(); it != log.events.end(); ++it) {
    if (std::holds_alternative<PickupEvent>(*it)) {
      log.events.erase(it);
      break;
    }
  }
  RunLogValidator v(net, log.header.constraints);
  for (const Event& e : log.events) v.accept(e);
  const ValidationReport streamed = std::move(v).finish();
  const ValidationReport whole = validate_runlog(log, net, log.header.constraints);
  EXPECT_FALSE(whole.clean());
  ASSERT_EQ(streamed.violations.size(), whole.violations.size());
  for (std::size_t i = 0; i < whole.violations.size(); ++i) {
    EXPECT_EQ(streamed.violations[i].message, whole.violations[i].message);
  }
}

}  // namespace
}  // namespace fairride
