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

#include "fairride/simulator.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "testing.hpp"

namespace fairride {
namespace {

std::string bytes_of(const RunLog& log) {
  std::ostringstream out;
  write_runlog(out, log);
  return out.str();
}

SimConfig line_config() {
  SimConfig c;
  c.horizon_epochs = 4;
  c.n_taxis = 1;
  c.initial_nodes = {1};
  c.constraints.epoch_length = 60;
  return c;
}

TEST(Simulate, ZeroRequestsOnlyPositions) {
  const RoadNetwork net = testing::grid_graph(3, 3, 60).build();
  SimConfig c;
  c.horizon_epochs = 10;
  c.n_taxis = 4;
  c.seed = 3;
  const RunLog log = run(c, net, RequestStream{});
  ASSERT_EQ(log.events.size(), 40u);
  for (const Event& e : log.events) ASSERT_TRUE(std::holds_alternative<PositionEvent>(e));
  EXPECT_EQ(log.header.placement, "uniform");
  EXPECT_EQ(log.header.policy, "rpd");
  EXPECT_EQ(log.header.horizon_epochs, 10);
}

TEST(Simulate, SingleTaxiLineTrace) {
  // 1 -> 2 takes 60 s, 2 -> 3 takes 120 s. Pickup at t=0 at node 1, node 2
  // at t=60, mid-edge at t=120, node 3 at t=180: the end of epoch 2.
  const RoadNetwork net = testing::line_graph().build();
  const Request r{1, 1, 3, 0, 1000};
  const RunLog log = run(line_config(), net, RequestStream({r}));
  const std::vector<Event> want{
      PositionEvent{0, 1, {1, std::nullopt, 0}, 0},
      ArrivalEvent{r, 180},
      MatchedEvent{0, 1, 1},
      PickupEvent{0, 0, 1, 1},
      PositionEvent{1, 1, {2, std::nullopt, 0}, 1},
      PositionEvent{2, 1, {2, NodeId{3}, 60}, 1},
      DropoffEvent{2, 180, 1, 1},
      PositionEvent{3, 1, {3, std::nullopt, 0}, 0},
  };
  EXPECT_EQ(log.events, want);
  EXPECT_EQ(log.header.placement, "explicit");
}

TEST(Simulate, Deterministic) {
  for (const char* policy : {"rpd", "greedy"}) {
    const auto sr = testing::small_run(5, policy);
    const RoadNetwork net = sr.graph.build();
    const RoadNetwork again = sr.graph.build();
    EXPECT_EQ(bytes_of(run(sr.config, net, sr.demand)), bytes_of(run(sr.config, again, sr.demand)))
        << policy;
  }
}

TEST(Simulate, UniformPlacementFollowsSeed) {
  const RoadNetwork net = testing::grid_graph(6, 6, 60).build();
  SimConfig c;
  c.horizon_epochs = 1;
  c.n_taxis = 20;
  auto nodes_for = [&](std::uint64_t seed) {
    c.seed = seed;
    std::vector<NodeId> out;
    for (const Event& e : run(c, net, {}).events) out.push_back(std::get<PositionEvent>(e).position.node);
    return out;
  };
  EXPECT_EQ(nodes_for(1), nodes_for(1));
  EXPECT_NE(nodes_for(1), nodes_for(2));
  for (NodeId n : nodes_for(9)) {
    EXPECT_GE(n, 1);
    EXPECT_LE(n, 36);
  }
}

TEST(AdvanceTaxi, EmptyPlanStaysPut) {
  const RoadNetwork net = testing::line_graph().build();
  TaxiState t;
  t.id = 1;
  t.position = {2, std::nullopt, 0};
  const AdvanceResult r = advance_taxi(t, 60, 0, net);
  EXPECT_EQ(r.taxi, t);
  EXPECT_TRUE(r.events.empty());
}

TEST(AdvanceTaxi, LongEdgesCarryProgress) {
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, {{1, 2, 90}, {2, 3, 90}});
  TaxiState t;
  t.id = 1;
  t.position = {1, std::nullopt, 0};
  t.rides.push_back(ActiveRide{{7, 3, 1, 0, 0}, 0, std::nullopt});
  t.plan.stops = {{3, StopKind::kPickup, 7}};
  const AdvanceResult e1 = advance_taxi(t, 60, 0, net);
  EXPECT_EQ(e1.taxi.position, (TaxiPosition{1, NodeId{2}, 60}));
  const AdvanceResult e2 = advance_taxi(e1.taxi, 60, 60, net);
  EXPECT_EQ(e2.taxi.position, (TaxiPosition{2, NodeId{3}, 30}));
  const AdvanceResult e3 = advance_taxi(e2.taxi, 60, 120, net);
  ASSERT_EQ(e3.events.size(), 1u);
  EXPECT_EQ(e3.events[0].t, 180);
  EXPECT_TRUE(e3.taxi.rides[0].onboard());
  EXPECT_EQ(e3.taxi.position, (TaxiPosition{3, std::nullopt, 0}));

  // The legacy mode never enters a 90 s edge with 60 s to spend.
  const AdvanceResult snap = advance_taxi(t, 60, 0, net, MovementMode::kSnapToNode);
  EXPECT_EQ(snap.taxi.position, t.position);
}

TEST(AdvanceTaxi, StopAtEpochEndIsClosedOnTheRight) {
  const RoadNetwork net = testing::line_graph().build();
  TaxiState t;
  t.id = 1;
  t.position = {1, std::nullopt, 0};
  t.rides.push_back(ActiveRide{{1, 2, 3, 0, 0}, 120, std::nullopt});
  t.plan.stops = {{2, StopKind::kPickup, 1}, {3, StopKind::kDropoff, 1}};
  t.plan.etas = {60, 180};
  const AdvanceResult r = advance_taxi(t, 60, 600, net);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].t, 660);
  EXPECT_EQ(r.taxi.plan.stops.size(), 1u);
  EXPECT_EQ(r.taxi.plan.etas, std::vector<Seconds>{120});

  // In a run the pickup at t=60 is logged in block 0.
  SimConfig c = line_config();
  const RunLog log = run(c, net, RequestStream({{1, 2, 3, 0, 0}}));
  bool found = false;
  for (const Event& e : log.events) {
    if (const auto* p = std::get_if<PickupEvent>(&e)) {
      EXPECT_EQ(p->t, 60);
      EXPECT_EQ(p->epoch, 0);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(AdvanceTaxi, SeveralStopsAtOneNode) {
  const RoadNetwork net = testing::line_graph().build();
  TaxiState t;
  t.id = 1;
  t.position = {1, std::nullopt, 0};
  t.rides.push_back(ActiveRide{{1, 1, 2, 0, 0}, 60, Seconds{0}});
  t.rides.push_back(ActiveRide{{2, 2, 3, 0, 0}, 120, std::nullopt});
  t.plan.stops = {{2, StopKind::kDropoff, 1}, {2, StopKind::kPickup, 2}, {3, StopKind::kDropoff, 2}};
  const AdvanceResult r = advance_taxi(t, 300, 0, net);
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_EQ(r.events[0].t, 60);
  EXPECT_EQ(r.events[0].kind, StopKind::kDropoff);
  EXPECT_EQ(r.events[1].t, 60);
  EXPECT_EQ(r.events[1].request_id, 2);
  EXPECT_EQ(r.events[2].t, 180);
  EXPECT_TRUE(r.taxi.rides.empty());
  EXPECT_TRUE(r.taxi.plan.empty());
}

SimConfig stuck_config(MovementMode mode) {
  SimConfig c;
  c.horizon_epochs = 40;
  c.n_taxis = 6;
  c.seed = 12;
  c.constraints.epoch_length = 60;
  c.constraints.max_pickup_delay = 600;
  c.constraints.max_detour_delay = 900;
  c.movement = mode;
  return c;
}

RequestStream stuck_demand(const RoadNetwork& net) {
  SyntheticDemand d;
  d.horizon_epochs = 40;
  d.rate_profile.assign(40, 1.0);
  d.seed = 99;
  return generate_synthetic(net, d);
}

TEST(StuckTaxi, ContinuousMovementAlwaysAdvances) {
  const RoadNetwork net = testing::grid_graph(5, 5, 90).build();
  const RunLog log = run(stuck_config(MovementMode::kContinuous), net, stuck_demand(net));
  std::size_t matched = 0;
  for (const Event& e : log.events) matched += std::holds_alternative<MatchedEvent>(e);
  ASSERT_GT(matched, 10u);
  EXPECT_TRUE(testing::stalled_taxis(log).empty());
}

TEST(StuckTaxi, SnapToNodeModeStalls) {
  const RoadNetwork net = testing::grid_graph(5, 5, 90).build();
  const RunLog log = run(stuck_config(MovementMode::kSnapToNode), net, stuck_demand(net));
  EXPECT_FALSE(testing::stalled_taxis(log).empty());
}

TEST(Simulate, ConservationAcrossRandomRuns) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    for (const char* policy : {"rpd", "greedy"}) {
      const auto sr = testing::small_run(seed, policy);
      const RoadNetwork net = sr.graph.build();
      auto pol = make_policy(policy);
      MemorySink sink;
      const RunStats stats = simulate(sr.config, net, sr.demand, *pol, sink);
      const RunLog log = sink.take();
      std::int64_t arrivals = 0, matched = 0, unmatched = 0, dropoffs = 0;
      for (const Event& e : log.events) {
        arrivals += std::holds_alternative<ArrivalEvent>(e);
        matched += std::holds_alternative<MatchedEvent>(e);
        unmatched += std::holds_alternative<UnmatchedEvent>(e);
        dropoffs += std::holds_alternative<DropoffEvent>(e);
      }
      EXPECT_EQ(stats.arrivals, static_cast<std::int64_t>(sr.demand.size()));
      EXPECT_EQ(stats.arrivals, arrivals);
      EXPECT_EQ(stats.matched, matched);
      EXPECT_EQ(stats.unmatched, unmatched);
      EXPECT_EQ(stats.completed, dropoffs);
      EXPECT_EQ(stats.arrivals, stats.matched + stats.unmatched + stats.pending_at_horizon)
          << seed << policy;
    }
  }
}

TEST(Simulate, UnreachableRequestExpires) {
  // Taxi stuck at the end of a one-way line can never reach node 1.
  const RoadNetwork net = testing::line_graph().build();
  SimConfig c = line_config();
  c.initial_nodes = {3};
  c.horizon_epochs = 10;
  const RunLog log = run(c, net, RequestStream({{4, 1, 2, 0, 0}}));
  std::vector<UnmatchedEvent> unmatched;
  for (const Event& e : log.events) {
    if (const auto* u = std::get_if<UnmatchedEvent>(&e)) unmatched.push_back(*u);
  }
  // Pickup deadline 300 s; the last matching instant that could still make
  // it is t=300, so the request is finalised at the end of epoch 5.
  ASSERT_EQ(unmatched.size(), 1u);
  EXPECT_EQ(unmatched[0], (UnmatchedEvent{5, 4}));
}

TEST(Simulate, RequestsLeftAtHorizonAreNotFinalised) {
  const RoadNetwork net = testing::line_graph().build();
  SimConfig c = line_config();
  c.initial_nodes = {3};
  c.horizon_epochs = 3;
  MemorySink sink;
  auto policy = make_policy("rpd");
  const RunStats stats = simulate(c, net, RequestStream({{4, 1, 2, 0, 0}}), *policy, sink);
  EXPECT_EQ(stats.pending_at_horizon, 1);
  EXPECT_EQ(stats.unmatched, 0);
}

TEST(Simulate, InputErrors) {
  const RoadNetwork net = testing::line_graph().build();
  SimConfig c = line_config();
  EXPECT_THROW(run(c, net, RequestStream({{1, 1, 3, 4, 0}})), InputError);  // beyond horizon
  EXPECT_THROW(run(c, net, RequestStream({{1, 1, 9, 0, 0}})), InputError);  // unknown node
  EXPECT_THROW(run(c, net, RequestStream({{1, 3, 1, 0, 0}})), InputError);  // unreachable
  c.initial_nodes = {1, 2};
  EXPECT_THROW(run(c, net, {}), InputError);
  c = line_config();
  c.initial_nodes = {8};
  EXPECT_THROW(run(c, net, {}), InputError);
  c = line_config();
  c.constraints.capacity = 0;
  EXPECT_THROW(run(c, net, {}), InputError);
  c = line_config();
  c.horizon_epochs = 0;
  EXPECT_THROW(run(c, net, {}), InputError);
  c = line_config();
  c.policy = "unknown";
  EXPECT_THROW(run(c, net, {}), InputError);
}

class OverCapacityPolicy final : public MatchingPolicy {
 public:
  std::string name() const override { return "broken"; }
  Assignment match(Epoch, std::span<const TaxiState> taxis, std::span<const Request> pool,
                   const Constraints&, const RoadNetwork&) override {
    Assignment a;
    TaxiAssignment entry;
    entry.taxi_id = taxis.front().id;
    for (const Request& r : pool) {
      entry.group.push_back(r.id);
      entry.plan.stops.push_back({r.pickup, StopKind::kPickup, r.id});
    }
    for (const Request& r : pool) entry.plan.stops.push_back({r.dropoff, StopKind::kDropoff, r.id});
    a.entries.push_back(entry);
    return a;
  }
};

class EmptyPolicy final : public MatchingPolicy {
 public:
  std::string name() const override { return "empty"; }
  Assignment match(Epoch, std::span<const TaxiState>, std::span<const Request>, const Constraints&,
                   const RoadNetwork&) override {
    return {};
  }
};

TEST(Policies, BrokenPolicyAbortsTheRun) {
  const RoadNetwork net = testing::grid_graph(3, 3, 60).build();
  SimConfig c;
  c.horizon_epochs = 5;
  c.n_taxis = 1;
  c.initial_nodes = {1};
  c.constraints.capacity = 2;
  std::vector<Request> reqs;
  for (RequestId id = 1; id <= 3; ++id) reqs.push_back({id, 1, 9, 0, 0});
  OverCapacityPolicy policy;
  MemorySink sink;
  try {
    simulate(c, net, RequestStream(reqs), policy, sink);
    FAIL();
  } catch (const FeasibilityError& e) {
    EXPECT_NE(std::string(e.what()).find("taxi 1"), std::string::npos);
  }
}

TEST(Policies, EmptyPolicyCompletesWithoutMatches) {
  const auto sr = testing::small_run(3, "rpd");
  const RoadNetwork net = sr.graph.build();
  EmptyPolicy policy;
  MemorySink sink;
  const RunStats stats = simulate(sr.config, net, sr.demand, policy, sink);
  EXPECT_EQ(stats.matched, 0);
  EXPECT_EQ(stats.arrivals, stats.unmatched + stats.pending_at_horizon);
  EXPECT_EQ(sink.log().header.policy, "empty");
}

TEST(Simulate, HeaderEchoesConfiguration) {
  const auto sr = testing::small_run(8, "greedy");
  const RoadNetwork net = sr.graph.build();
  RunHeader extra;
  extra.demand = "synthetic";
  const RunLog log = run(sr.config, net, sr.demand, extra);
  EXPECT_EQ(log.header.format, kLogFormat);
  EXPECT_EQ(log.header.policy, "greedy");
  EXPECT_EQ(log.header.seed, sr.config.seed);
  EXPECT_EQ(log.header.n_taxis, sr.config.n_taxis);
  EXPECT_EQ(log.header.constraints.capacity, sr.config.constraints.capacity);
  EXPECT_EQ(log.header.constraints.max_group_size, sr.config.constraints.max_group_size);
  EXPECT_EQ(log.header.weights.reward_per_match,
            MatchWeights::defaults_for(sr.config.constraints).reward_per_match);
  EXPECT_EQ(log.header.demand, "synthetic");
}

}  // namespace
}  // namespace fairride
