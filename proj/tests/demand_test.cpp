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

#include "fairride/demand.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "testing.hpp"

namespace fairride {
namespace {

RequestStream from_text(const std::string& text, const RoadNetwork& net) {
  std::istringstream in(text);
  return load_requests(in, net);
}

const char* kHeader = "request_id,pickup_node,dropoff_node,arrival_epoch,fare\n";

TEST(LoadRequests, EmptyFile) {
  const RoadNetwork net = testing::line_graph().build();
  EXPECT_TRUE(from_text(kHeader, net).empty());
}

TEST(LoadRequests, OneRow) {
  const RoadNetwork net = testing::line_graph().build();
  const RequestStream s = from_text(std::string(kHeader) + "1,1,3,0,10.5\n", net);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.requests()[0], (Request{1, 1, 3, 0, 1050}));
}

TEST(LoadRequests, FloorsArrivalAndSorts) {
  const RoadNetwork net = testing::line_graph().build();
  const RequestStream s =
      from_text(std::string(kHeader) + "5,1,2,3.9,1\n2,2,3,3,0\n9,1,3,0.2,2.25\n", net);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.requests()[0].id, 9);
  EXPECT_EQ(s.requests()[0].fare, 225);
  EXPECT_EQ(s.requests()[1].id, 2);
  EXPECT_EQ(s.requests()[2].id, 5);
  EXPECT_EQ(s.requests()[2].arrival_epoch, 3);
}

void expect_row_error(const std::string& rows, std::size_t line) {
  const RoadNetwork net = testing::line_graph().build();
  try {
    from_text(std::string(kHeader) + rows, net);
    FAIL() << rows;
  } catch (const RowError& e) {
    EXPECT_EQ(e.row(), line) << e.what();
  }
}

TEST(LoadRequests, RowErrors) {
  expect_row_error("1,1,1,0,1\n", 2);          // pickup == dropoff
  expect_row_error("1,1,2,0,1\n2,1,7,0,1\n", 3);  // unknown node
  expect_row_error("1,3,1,0,1\n", 2);          // unreachable
  expect_row_error("1,1,2,0,-1\n", 2);         // negative fare
  expect_row_error("1,1,2,0,1\n1,2,3,0,1\n", 3);  // duplicate id
  expect_row_error("1,1,2,x,1\n", 2);
}

TEST(WriteRequests, RoundTrips) {
  const RoadNetwork net = testing::line_graph().build();
  const RequestStream s = from_text(std::string(kHeader) + "1,1,3,0,10.05\n2,2,3,4,0\n", net);
  std::ostringstream out;
  write_requests(out, s);
  EXPECT_EQ(from_text(out.str(), net), s);
}

TEST(BatchAt, ExactEpochInIdOrder) {
  const RequestStream s({{3, 1, 2, 6, 0}, {2, 1, 2, 5, 0}, {1, 1, 2, 5, 0}});
  const auto b5 = s.batch_at(5);
  ASSERT_EQ(b5.size(), 2u);
  EXPECT_EQ(b5[0].id, 1);
  EXPECT_EQ(b5[1].id, 2);
  EXPECT_TRUE(s.batch_at(4).empty());
  EXPECT_EQ(s.batch_at(6).size(), 1u);
  EXPECT_EQ(s.last_epoch(), 6);
}

TEST(BatchAt, DuplicateIdsRejected) {
  EXPECT_THROW(RequestStream({{1, 1, 2, 0, 0}, {1, 2, 1, 3, 0}}), InputError);
}

TEST(BatchAt, BatchesPartitionTheStream) {
  const RoadNetwork net = testing::grid_graph(4, 4, 60).build();
  SyntheticDemand d;
  d.horizon_epochs = 50;
  d.rate_profile.assign(50, 2.0);
  d.seed = 4;
  const RequestStream s = generate_synthetic(net, d);
  std::vector<Request> joined;
  for (Epoch e = 0; e < d.horizon_epochs; ++e) {
    for (const auto& r : s.batch_at(e)) joined.push_back(r);
  }
  EXPECT_EQ(joined, std::vector<Request>(s.requests().begin(), s.requests().end()));
}

TEST(Synthetic, ZeroRateIsEmpty) {
  const RoadNetwork net = testing::grid_graph(3, 3, 60).build();
  SyntheticDemand d;
  d.horizon_epochs = 10;
  d.rate_profile.assign(10, 0.0);
  EXPECT_TRUE(generate_synthetic(net, d).empty());
}

TEST(Synthetic, Deterministic) {
  const RoadNetwork net = testing::grid_graph(5, 5, 60).build();
  SyntheticDemand d;
  d.horizon_epochs = 100;
  d.rate_profile.assign(100, 3.0);
  d.seed = 42;
  EXPECT_EQ(generate_synthetic(net, d), generate_synthetic(net, d));
  SyntheticDemand other = d;
  other.seed = 43;
  EXPECT_NE(generate_synthetic(net, d), generate_synthetic(net, other));
}

TEST(Synthetic, RequestsAreValid) {
  // One-way ring plus an isolated node: only reachable pairs may be drawn.
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}},
                                             {{1, 2, 10}, {2, 3, 20}, {3, 1, 30}});
  SyntheticDemand d;
  d.horizon_epochs = 30;
  d.rate_profile.assign(30, 4.0);
  d.seed = 1;
  d.fares = FareModel{2.5, 0.008};
  const RequestStream s = generate_synthetic(net, d);
  ASSERT_FALSE(s.empty());
  for (const auto& r : s.requests()) {
    ASSERT_NE(r.pickup, r.dropoff);
    ASSERT_NE(r.pickup, 4);
    ASSERT_NE(r.dropoff, 4);
    const Seconds tt = *net.travel_time(r.pickup, r.dropoff);
    ASSERT_EQ(r.fare, std::llround((2.5 + 0.008 * static_cast<double>(tt)) * 100));
    ASSERT_GE(r.arrival_epoch, 0);
    ASSERT_LT(r.arrival_epoch, 30);
  }
}

TEST(Synthetic, Errors) {
  const RoadNetwork one = RoadNetwork::build({{1, 0, 0}}, {});
  SyntheticDemand d;
  d.horizon_epochs = 5;
  d.rate_profile.assign(5, 1.0);
  EXPECT_THROW(generate_synthetic(one, d), InputError);
  const RoadNetwork none = RoadNetwork::build({{1, 0, 0}, {2, 0, 0}}, {});
  EXPECT_THROW(generate_synthetic(none, d), InputError);
  const RoadNetwork net = testing::line_graph().build();
  d.rate_profile.assign(4, 1.0);
  EXPECT_THROW(generate_synthetic(net, d), InputError);
  d.rate_profile.assign(5, -1.0);
  EXPECT_THROW(generate_synthetic(net, d), InputError);
}

TEST(Synthetic, DayAtTenPerEpochGolden) {
  const RoadNetwork net = testing::grid_graph(10, 10, 60).build();
  SyntheticDemand d;
  d.horizon_epochs = 1440;
  d.rate_profile.assign(1440, 10.0);
  d.seed = 7;
  const RequestStream s = generate_synthetic(net, d);
  // Poisson(14400) total; mean +- 4 sigma is [13920, 14880], inside [13000, 15800].
  EXPECT_GE(s.size(), 13000u);
  EXPECT_LE(s.size(), 15800u);
  EXPECT_EQ(s.size(), 14450u);
}

}  // namespace
}  // namespace fairride
