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

#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairride/types.hpp"

namespace fairride {

class UnreachableError : public Error {
 public:
  using Error::Error;
};

// Directed road graph with integer-second edge costs. Immutable once built;
// shortest-path queries are answered by single-source (or single-target)
// Dijkstra searches whose results are cached per node. The caches are
// guarded internally, so a const RoadNetwork may be queried concurrently.
class RoadNetwork {
 public:
  struct Node {
    NodeId id = 0;
    double lat = 0;
    double lon = 0;
  };
  struct Edge {
    NodeId from = 0;
    NodeId to = 0;
    Seconds cost = 0;
  };
  struct Arc {
    std::size_t target = 0;  // dense node index
    Seconds cost = 0;
  };

  static constexpr Seconds kUnreachable = std::numeric_limits<Seconds>::max();

  // Travel-time table indexed by dense node index; kUnreachable marks
  // nodes with no connecting path.
  using DistanceTable = std::vector<Seconds>;

  // Validates and builds. Throws InputError on duplicate ids, dangling
  // edges or non-positive costs.
  static RoadNetwork build(std::vector<Node> nodes, std::vector<Edge> edges);

  RoadNetwork(RoadNetwork&&) noexcept;
  RoadNetwork& operator=(RoadNetwork&&) noexcept;
  RoadNetwork(const RoadNetwork&) = delete;
  RoadNetwork& operator=(const RoadNetwork&) = delete;
  ~RoadNetwork();

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  // Sorted by id.
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node_at(std::size_t index) const { return nodes_[index]; }
  bool contains(NodeId id) const { return index_.count(id) != 0; }
  // Throws InputError for unknown ids.
  std::size_t index_of(NodeId id) const;
  const Node& node(NodeId id) const { return nodes_[index_of(id)]; }

  // Outgoing arcs sorted by target id; parallel edges are collapsed to the
  // cheapest.
  std::span<const Arc> out_arcs(std::size_t index) const;
  std::optional<Seconds> edge_cost(NodeId from, NodeId to) const;

  // Minimum travel time, nullopt when `to` is unreachable from `from`.
  std::optional<Seconds> travel_time(NodeId from, NodeId to) const;

  // Minimum-cost path from `from` to `to`, inclusive of both ends. Among
  // equal-cost paths the lexicographically smallest node sequence wins.
  // Throws UnreachableError when no path exists.
  std::vector<NodeId> shortest_path(NodeId from, NodeId to) const;

  // First node after `from` on shortest_path(from, to); nullopt when
  // from == to or `to` is unreachable.
  std::optional<NodeId> next_hop(NodeId from, NodeId to) const;

  std::shared_ptr<const DistanceTable> distances_from(NodeId source) const;
  std::shared_ptr<const DistanceTable> distances_to(NodeId target) const;

 private:
  RoadNetwork() = default;
  struct Cache;

  std::shared_ptr<const DistanceTable> search(std::size_t root, bool reverse) const;

  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::size_t> out_offsets_;
  std::vector<Arc> out_arcs_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Arc> in_arcs_;  // Arc::target holds the source node here
  std::size_t edge_count_ = 0;
  std::unique_ptr<Cache> cache_;
};

// Reads `node_id,lat,lon` and `from,to,cost_seconds` tables.
RoadNetwork load_network(std::istream& nodes, std::istream& edges,
                         const std::string& nodes_name = "nodes",
                         const std::string& edges_name = "edges");
RoadNetwork load_network(const std::string& nodes_path, const std::string& edges_path);

struct Zone {
  ZoneId id = 0;
  std::string name;
  double lat = 0;  // centroid: mean of member node coordinates
  double lon = 0;
  std::vector<NodeId> members;  // sorted
};

// Total assignment of network nodes to zones.
class ZonePartition {
 public:
  ZonePartition() = default;
  ZonePartition(const RoadNetwork& net, const std::vector<std::pair<NodeId, ZoneId>>& assignment,
                const std::vector<std::pair<ZoneId, std::string>>& names);

  ZoneId zone_of(NodeId node) const;
  // Sorted by zone id.
  const std::vector<Zone>& zones() const { return zones_; }
  const Zone* find(ZoneId id) const;

 private:
  std::unordered_map<NodeId, ZoneId> zone_of_;
  std::vector<Zone> zones_;
};

// Reads `node_id,zone_id,zone_name`. Every network node must appear
// exactly once.
ZonePartition load_zones(const RoadNetwork& net, std::istream& zones,
                         const std::string& source_name = "zones");
ZonePartition load_zones(const RoadNetwork& net, const std::string& path);

}  // namespace fairride
