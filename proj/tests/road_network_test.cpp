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

#include "fairride/road_network.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "testing.hpp"

namespace fairride {
namespace {

using testing::DistanceOracle;
using testing::Graph;

RoadNetwork from_text(const std::string& nodes, const std::string& edges) {
  std::istringstream n(nodes);
  std::istringstream e(edges);
  return load_network(n, e);
}

TEST(RoadNetwork, LoadsMinimalNetwork) {
  const RoadNetwork net = from_text("node_id,lat,lon\n1,0,0\n2,0,1\n", "from,to,cost_seconds\n1,2,60\n");
  EXPECT_EQ(net.node_count(), 2u);
  EXPECT_EQ(net.edge_count(), 1u);
  EXPECT_EQ(net.edge_cost(1, 2), 60);
  EXPECT_EQ(net.edge_cost(2, 1), std::nullopt);
}

TEST(RoadNetwork, DanglingEdgeReportsRow) {
  try {
    from_text("node_id,lat,lon\n1,0,0\n2,0,1\n", "from,to,cost_seconds\n1,2,60\n1,99,30\n");
    FAIL();
  } catch (const RowError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_NE(std::string(e.what()).find("99"), std::string::npos);
  }
}

TEST(RoadNetwork, NonPositiveCostReportsRow) {
  try {
    from_text("node_id,lat,lon\n1,0,0\n2,0,1\n", "from,to,cost_seconds\n1,2,0\n");
    FAIL();
  } catch (const RowError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(from_text("node_id,lat,lon\n1,0,0\n2,0,1\n", "from,to,cost_seconds\n1,2,-5\n"),
               RowError);
}

TEST(RoadNetwork, DuplicateAndMalformedNodes) {
  try {
    from_text("node_id,lat,lon\n1,0,0\n1,0,1\n", "from,to,cost_seconds\n");
    FAIL();
  } catch (const RowError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
  EXPECT_THROW(from_text("node_id,lat,lon\n1,zero,0\n", "from,to,cost_seconds\n"), RowError);
  EXPECT_THROW(load_network("/nonexistent/nodes.csv", "/nonexistent/edges.csv"), InputError);
}

TEST(RoadNetwork, BuildValidates) {
  EXPECT_THROW(RoadNetwork::build({{1, 0, 0}}, {{1, 2, 5}}), InputError);
  EXPECT_THROW(RoadNetwork::build({{1, 0, 0}, {2, 0, 0}}, {{1, 2, 0}}), InputError);
  EXPECT_THROW(RoadNetwork::build({{1, 0, 0}, {1, 0, 0}}, {}), InputError);
}

TEST(RoadNetwork, LineGraphTravelTimes) {
  const Graph g = testing::line_graph();
  const RoadNetwork net = g.build();
  EXPECT_EQ(net.travel_time(2, 2), 0);
  EXPECT_EQ(net.travel_time(1, 3), 180);
  EXPECT_EQ(net.travel_time(3, 1), std::nullopt);
  EXPECT_THROW(net.travel_time(1, 42), InputError);

  // Exhaustive enumeration agrees.
  const auto paths = testing::enumerate_paths(g, 1, 3);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].second, 180);
  EXPECT_EQ(net.shortest_path(1, 3), paths[0].first);
  EXPECT_EQ(net.shortest_path(1, 1), std::vector<NodeId>{1});
  EXPECT_EQ(net.next_hop(1, 3), 2);
  EXPECT_EQ(net.next_hop(3, 3), std::nullopt);
}

TEST(RoadNetwork, IsolatedNodesAreUnreachable) {
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 1, 1}}, {});
  EXPECT_EQ(net.travel_time(1, 2), std::nullopt);
  EXPECT_THROW(net.shortest_path(1, 2), UnreachableError);
  EXPECT_EQ(net.next_hop(1, 2), std::nullopt);
}

TEST(RoadNetwork, DiamondTieBreaksLexicographically) {
  // Inserted in reverse so input order cannot explain the result.
  const RoadNetwork net = RoadNetwork::build(
      {{4, 0, 0}, {3, 0, 0}, {2, 0, 0}, {1, 0, 0}},
      {{3, 4, 60}, {1, 3, 60}, {2, 4, 60}, {1, 2, 60}});
  EXPECT_EQ(net.shortest_path(1, 4), (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(net.next_hop(1, 4), 2);
}

TEST(RoadNetwork, TieBreakComparesWholeSequence) {
  // Two 100 s paths: 1-5-2-9 and 1-5-3-9... plus 1-4-9; smallest sequence is 1-4-9.
  const RoadNetwork net = RoadNetwork::build(
      {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}, {5, 0, 0}, {9, 0, 0}},
      {{1, 5, 20}, {5, 2, 30}, {2, 9, 50}, {5, 3, 40}, {3, 9, 40}, {1, 4, 60}, {4, 9, 40}});
  EXPECT_EQ(net.travel_time(1, 9), 100);
  EXPECT_EQ(net.shortest_path(1, 9), (std::vector<NodeId>{1, 4, 9}));
}

TEST(RoadNetwork, ParallelEdgesCollapseToCheapest) {
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 0, 0}}, {{1, 2, 90}, {1, 2, 30}});
  EXPECT_EQ(net.edge_cost(1, 2), 30);
  EXPECT_EQ(net.travel_time(1, 2), 30);
}

TEST(RoadNetwork, RandomGraphsMatchBellmanFord) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    const Graph g = testing::random_graph(rng, n, 0.08 + 0.02 * (trial % 5), 200);
    const RoadNetwork net = g.build();
    const DistanceOracle oracle(g);
    for (const auto& a : g.nodes) {
      for (const auto& b : g.nodes) {
        ASSERT_EQ(net.travel_time(a.id, b.id), oracle(a.id, b.id))
            << "trial " << trial << " " << a.id << "->" << b.id;
      }
    }
  }
}

TEST(RoadNetwork, PathsAreConsistentWithTravelTime) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testing::random_graph(rng, 20, 0.15, 100);
    const RoadNetwork net = g.build();
    for (const auto& a : g.nodes) {
      for (const auto& b : g.nodes) {
        const auto tt = net.travel_time(a.id, b.id);
        if (!tt) continue;
        const auto path = net.shortest_path(a.id, b.id);
        ASSERT_EQ(path.front(), a.id);
        ASSERT_EQ(path.back(), b.id);
        Seconds cost = 0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          const auto c = net.edge_cost(path[i], path[i + 1]);
          ASSERT_TRUE(c.has_value());
          cost += *c;
        }
        ASSERT_EQ(cost, *tt);
        if (a.id != b.id) ASSERT_EQ(net.next_hop(a.id, b.id), path[1]);
      }
    }
  }
}

TEST(RoadNetwork, SmallGraphPathsMatchEnumeration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(rng, 7, 0.35, 5);  // small costs force ties
    const RoadNetwork net = g.build();
    for (const auto& a : g.nodes) {
      for (const auto& b : g.nodes) {
        if (a.id == b.id) continue;
        auto paths = testing::enumerate_paths(g, a.id, b.id);
        if (paths.empty()) {
          ASSERT_FALSE(net.travel_time(a.id, b.id));
          continue;
        }
        std::sort(paths.begin(), paths.end(), [](const auto& x, const auto& y) {
          return x.second != y.second ? x.second < y.second : x.first < y.first;
        });
        ASSERT_EQ(net.shortest_path(a.id, b.id), paths.front().first);
      }
    }
  }
}

TEST(RoadNetwork, TriangleInequality) {
  std::mt19937_64 rng(99);
  const Graph g = testing::random_graph(rng, 30, 0.1, 300);
  const RoadNetwork net = g.build();
  for (const auto& a : g.nodes) {
    for (const auto& b : g.nodes) {
      const auto ab = net.travel_time(a.id, b.id);
      if (!ab) continue;
      for (const auto& c : g.nodes) {
        const auto bc = net.travel_time(b.id, c.id);
        if (!bc) continue;
        const auto ac = net.travel_time(a.id, c.id);
        ASSERT_TRUE(ac.has_value());
        ASSERT_LE(*ac, *ab + *bc);
      }
    }
  }
}

TEST(RoadNetwork, ConcurrentQueriesAgree) {
  std::mt19937_64 rng(3);
  const Graph g = testing::random_graph(rng, 40, 0.1, 100);
  const RoadNetwork net = g.build();
  const DistanceOracle oracle(g);
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int rep = 0; rep < 3; ++rep) {
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          const auto& a = g.nodes[(i + static_cast<std::size_t>(t) * 7) % g.nodes.size()];
          for (const auto& b : g.nodes) {
            if (net.travel_time(a.id, b.id) != oracle(a.id, b.id)) ++mismatches;
          }
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(Zones, SingleZoneCentroidIsMean) {
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 2, 2}, {3, 4, 8}}, {});
  std::istringstream in("node_id,zone_id,zone_name\n1,7,Z\n2,7,Z\n3,7,Z\n");
  const ZonePartition zones = load_zones(net, in);
  ASSERT_EQ(zones.zones().size(), 1u);
  EXPECT_DOUBLE_EQ(zones.zones()[0].lat, 2.0);
  EXPECT_DOUBLE_EQ(zones.zones()[0].lon, 10.0 / 3.0);
  EXPECT_EQ(zones.zones()[0].name, "Z");
  EXPECT_EQ(zones.zone_of(3), 7);
}

TEST(Zones, TwoNodeCentroid) {
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 2, 2}, {3, 5, 5}}, {});
  std::istringstream in("node_id,zone_id,zone_name\n1,1,A\n2,1,A\n3,2,B\n");
  const ZonePartition zones = load_zones(net, in);
  const Zone* a = zones.find(1);
  ASSERT_NE(a, nullptr);
  EXPECT_DOUBLE_EQ(a->lat, 1.0);
  EXPECT_DOUBLE_EQ(a->lon, 1.0);
  EXPECT_EQ(a->members, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(zones.find(3), nullptr);
}

TEST(Zones, MissingAndUnknownNodes) {
  const RoadNetwork net = RoadNetwork::build({{1, 0, 0}, {2, 2, 2}}, {});
  std::istringstream missing("node_id,zone_id,zone_name\n1,1,A\n");
  EXPECT_THROW(load_zones(net, missing), InputError);
  std::istringstream unknown("node_id,zone_id,zone_name\n1,1,A\n2,1,A\n5,1,A\n");
  try {
    load_zones(net, unknown);
    FAIL();
  } catch (const RowError& e) {
    EXPECT_EQ(e.row(), 4u);
  }
  std::istringstream twice("node_id,zone_id,zone_name\n1,1,A\n1,2,B\n2,1,A\n");
  EXPECT_THROW(load_zones(net, twice), RowError);
}

TEST(Zones, CentroidsArePermutationInvariant) {
  std::mt19937_64 rng(8);
  std::vector<RoadNetwork::Node> nodes;
  for (int i = 1; i <= 30; ++i) {
    nodes.push_back({i, std::uniform_real_distribution<double>(40, 41)(rng),
                     std::uniform_real_distribution<double>(-74, -73)(rng)});
  }
  std::vector<std::pair<NodeId, ZoneId>> assignment;
  for (const auto& n : nodes) assignment.emplace_back(n.id, n.id % 4 + 1);
  const std::vector<std::pair<ZoneId, std::string>> names{{1, "a"}, {2, "b"}, {3, "c"}, {4, "d"}};

  const RoadNetwork net = RoadNetwork::build(nodes, {});
  const ZonePartition base(net, assignment, names);
  for (int trial = 0; trial < 5; ++trial) {
    auto shuffled_nodes = nodes;
    auto shuffled_assignment = assignment;
    std::shuffle(shuffled_nodes.begin(), shuffled_nodes.end(), rng);
    std::shuffle(shuffled_assignment.begin(), shuffled_assignment.end(), rng);
    const RoadNetwork other = RoadNetwork::build(shuffled_nodes, {});
    const ZonePartition z(other, shuffled_assignment, names);
    ASSERT_EQ(z.zones().size(), base.zones().size());
    for (std::size_t i = 0; i < z.zones().size(); ++i) {
      EXPECT_EQ(z.zones()[i].lat, base.zones()[i].lat);
      EXPECT_EQ(z.zones()[i].lon, base.zones()[i].lon);
      EXPECT_EQ(z.zones()[i].members, base.zones()[i].members);
    }
  }
}

TEST(Zones, LoadsFromFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "fairride_zone_files";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "nodes.csv") << "node_id,lat,lon\n1,0,0\n2,0,1\n";
  std::ofstream(dir / "edges.csv") << "from,to,cost_seconds\n1,2,60\n2,1,60\n";
  std::ofstream(dir / "zones.csv") << "node_id,zone_id,zone_name\n1,1,\"Lower, East\"\n2,2,West\n";
  const RoadNetwork net = load_network((dir / "nodes.csv").string(), (dir / "edges.csv").string());
  const ZonePartition zones = load_zones(net, (dir / "zones.csv").string());
  EXPECT_EQ(zones.find(1)->name, "Lower, East");
  EXPECT_EQ(net.travel_time(2, 1), 60);
}

}  // namespace
}  // namespace fairride
