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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <shared_mutex>

#include "fairride/csv.hpp"

namespace fairride {

struct RoadNetwork::Cache {
  mutable std::shared_mutex mu;
  std::vector<std::shared_ptr<const DistanceTable>> forward;
  std::vector<std::shared_ptr<const DistanceTable>> reverse;
};

RoadNetwork::RoadNetwork(RoadNetwork&&) noexcept = default;
RoadNetwork& RoadNetwork::operator=(RoadNetwork&&) noexcept = default;
RoadNetwork::~RoadNetwork() = default;

RoadNetwork RoadNetwork::build(std::vector<Node> nodes, std::vector<Edge> edges) {
  RoadNetwork net;
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i].lat) || !std::isfinite(nodes[i].lon)) {
      throw InputError("node " + std::to_string(nodes[i].id) + ": non-finite coordinate");
    }
    if (!net.index_.emplace(nodes[i].id, i).second) {
      throw InputError("duplicate node_id " + std::to_string(nodes[i].id));
    }
  }
  net.nodes_ = std::move(nodes);
  const std::size_t n = net.nodes_.size();

  // Collapse parallel edges to the cheapest, keyed by dense (from, to).
  std::map<std::pair<std::size_t, std::size_t>, Seconds> best;
  for (const Edge& e : edges) {
    auto from = net.index_.find(e.from);
    auto to = net.index_.find(e.to);
    if (from == net.index_.end() || to == net.index_.end()) {
      throw InputError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                       " references an unknown node");
    }
    if (e.cost <= 0) {
      throw InputError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                       " has non-positive cost");
    }
    auto key = std::make_pair(from->second, to->second);
    auto [it, inserted] = best.emplace(key, e.cost);
    if (!inserted) it->second = std::min(it->second, e.cost);
  }
  net.edge_count_ = edges.size();

  // std::map iteration yields (from, to) ascending, so arcs come out sorted
  // by target index (== sorted by target id).
  net.out_offsets_.assign(n + 1, 0);
  net.in_offsets_.assign(n + 1, 0);
  for (const auto& [key, cost] : best) {
    ++net.out_offsets_[key.first + 1];
    ++net.in_offsets_[key.second + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    net.out_offsets_[i + 1] += net.out_offsets_[i];
    net.in_offsets_[i + 1] += net.in_offsets_[i];
  }
  net.out_arcs_.resize(best.size());
  net.in_arcs_.resize(best.size());
  std::vector<std::size_t> out_fill(net.out_offsets_.begin(), net.out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(net.in_offsets_.begin(), net.in_offsets_.end() - 1);
  for (const auto& [key, cost] : best) {
    net.out_arcs_[out_fill[key.first]++] = Arc{key.second, cost};
    net.in_arcs_[in_fill[key.second]++] = Arc{key.first, cost};
  }

  net.cache_ = std::make_unique<Cache>();
  net.cache_->forward.resize(n);
  net.cache_->reverse.resize(n);
  return net;
}

std::size_t RoadNetwork::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown node " + std::to_string(id));
  return it->second;
}

std::span<const RoadNetwork::Arc> RoadNetwork::out_arcs(std::size_t index) const {
  return {out_arcs_.data() + out_offsets_[index], out_offsets_[index + 1] - out_offsets_[index]};
}

std::optional<Seconds> RoadNetwork::edge_cost(NodeId from, NodeId to) const {
  const std::size_t target = index_of(to);
  for (const Arc& a : out_arcs(index_of(from))) {
    if (a.target == target) return a.cost;
  }
  return std::nullopt;
}

std::shared_ptr<const RoadNetwork::DistanceTable> RoadNetwork::search(std::size_t root,
                                                                      bool reverse) const {
  {
    std::shared_lock lock(cache_->mu);
    const auto& slot = reverse ? cache_->reverse[root] : cache_->forward[root];
    if (slot) return slot;
  }
  const auto& offsets = reverse ? in_offsets_ : out_offsets_;
  const auto& arcs = reverse ? in_arcs_ : out_arcs_;

  auto dist = std::make_shared<DistanceTable>(nodes_.size(), kUnreachable);
  using Item = std::pair<Seconds, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  (*dist)[root] = 0;
  heap.emplace(0, root);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != (*dist)[u]) continue;
    for (std::size_t k = offsets[u]; k < offsets[u + 1]; ++k) {
      const Arc& a = arcs[k];
      const Seconds nd = d + a.cost;
      if (nd < (*dist)[a.target]) {
        (*dist)[a.target] = nd;
        heap.emplace(nd, a.target);
      }
    }
  }

  std::unique_lock lock(cache_->mu);
  auto& slot = reverse ? cache_->reverse[root] : cache_->forward[root];
  if (!slot) slot = std::move(dist);
  return slot;
}

std::shared_ptr<const RoadNetwork::DistanceTable> RoadNetwork::distances_from(NodeId source) const {
  return search(index_of(source), false);
}

std::shared_ptr<const RoadNetwork::DistanceTable> RoadNetwork::distances_to(NodeId target) const {
  return search(index_of(target), true);
}

std::optional<Seconds> RoadNetwork::travel_time(NodeId from, NodeId to) const {
  const std::size_t to_index = index_of(to);
  const Seconds d = (*distances_from(from))[to_index];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

std::optional<NodeId> RoadNetwork::next_hop(NodeId from, NodeId to) const {
  if (from == to) return std::nullopt;
  const std::size_t u = index_of(from);
  auto to_target = distances_to(to);
  const Seconds remaining = (*to_target)[u];
  if (remaining == kUnreachable) return std::nullopt;
  // Arcs are sorted by target id: the first tight arc is the smallest id.
  for (const Arc& a : out_arcs(u)) {
    const Seconds rest = (*to_target)[a.target];
    if (rest != kUnreachable && a.cost + rest == remaining) return nodes_[a.target].id;
  }
  return std::nullopt;  // unreachable in a consistent table
}

std::vector<NodeId> RoadNetwork::shortest_path(NodeId from, NodeId to) const {
  index_of(to);
  if (!travel_time(from, to)) {
    throw UnreachableError("node " + std::to_string(to) + " is unreachable from node " +
                           std::to_string(from));
  }
  // Greedy smallest-id tight successor yields the lexicographically
  // smallest minimum-cost sequence; positive costs rule out cycles.
  std::vector<NodeId> path{from};
  NodeId at = from;
  while (at != to) {
    at = *next_hop(at, to);
    path.push_back(at);
  }
  return path;
}

RoadNetwork load_network(std::istream& nodes_in, std::istream& edges_in,
                         const std::string& nodes_name, const std::string& edges_name) {
  const auto node_table = csv::Table::parse(nodes_in, nodes_name, {"node_id", "lat", "lon"});
  std::vector<RoadNetwork::Node> nodes;
  std::unordered_map<NodeId, std::size_t> seen;
  for (const auto& row : node_table.rows()) {
    RoadNetwork::Node n;
    n.id = csv::to_int(node_table, row, 0, "node_id");
    n.lat = csv::to_double(node_table, row, 1, "lat");
    n.lon = csv::to_double(node_table, row, 2, "lon");
    if (n.lat < -90 || n.lat > 90 || n.lon < -180 || n.lon > 180) {
      throw RowError(node_table.source(), row.line, "coordinate out of range");
    }
    if (!seen.emplace(n.id, row.line).second) {
      throw RowError(node_table.source(), row.line, "duplicate node_id " + std::to_string(n.id));
    }
    nodes.push_back(n);
  }

  const auto edge_table = csv::Table::parse(edges_in, edges_name, {"from", "to", "cost_seconds"});
  std::vector<RoadNetwork::Edge> edges;
  for (const auto& row : edge_table.rows()) {
    RoadNetwork::Edge e;
    e.from = csv::to_int(edge_table, row, 0, "from");
    e.to = csv::to_int(edge_table, row, 1, "to");
    e.cost = csv::to_int(edge_table, row, 2, "cost_seconds");
    if (e.cost <= 0) {
      throw RowError(edge_table.source(), row.line, "non-positive cost " + std::to_string(e.cost));
    }
    if (!seen.count(e.from) || !seen.count(e.to)) {
      throw RowError(edge_table.source(), row.line,
                     "dangling edge: node " + std::to_string(seen.count(e.from) ? e.to : e.from) +
                         " does not exist");
    }
    edges.push_back(e);
  }
  return RoadNetwork::build(std::move(nodes), std::move(edges));
}

RoadNetwork load_network(const std::string& nodes_path, const std::string& edges_path) {
  std::ifstream nodes(nodes_path);
  if (!nodes) throw InputError("cannot open '" + nodes_path + "'");
  std::ifstream edges(edges_path);
  if (!edges) throw InputError("cannot open '" + edges_path + "'");
  return load_network(nodes, edges, nodes_path, edges_path);
}

ZonePartition::ZonePartition(const RoadNetwork& net,
                             const std::vector<std::pair<NodeId, ZoneId>>& assignment,
                             const std::vector<std::pair<ZoneId, std::string>>& names) {
  std::map<ZoneId, Zone> zones;
  for (const auto& [node, zone] : assignment) {
    if (!net.contains(node)) throw InputError("zone mapping names unknown node " + std::to_string(node));
    if (!zone_of_.emplace(node, zone).second) {
      throw InputError("node " + std::to_string(node) + " is assigned to more than one zone");
    }
    zones[zone].id = zone;
    zones[zone].members.push_back(node);
  }
  for (const auto& n : net.nodes()) {
    if (!zone_of_.count(n.id)) throw InputError("node " + std::to_string(n.id) + " has no zone");
  }
  for (const auto& [id, name] : names) {
    auto it = zones.find(id);
    if (it != zones.end()) it->second.name = name;
  }
  for (auto& [id, z] : zones) {
    std::sort(z.members.begin(), z.members.end());
    double lat = 0, lon = 0;
    for (NodeId m : z.members) {
      lat += net.node(m).lat;
      lon += net.node(m).lon;
    }
    z.lat = lat / static_cast<double>(z.members.size());
    z.lon = lon / static_cast<double>(z.members.size());
    zones_.push_back(std::move(z));
  }
}

ZoneId ZonePartition::zone_of(NodeId node) const {
  auto it = zone_of_.find(node);
  if (it == zone_of_.end()) throw InputError("node " + std::to_string(node) + " has no zone");
  return it->second;
}

const Zone* ZonePartition::find(ZoneId id) const {
  auto it = std::lower_bound(zones_.begin(), zones_.end(), id,
                             [](const Zone& z, ZoneId v) { return z.id < v; });
  return (it != zones_.end() && it->id == id) ? &*it : nullptr;
}

ZonePartition load_zones(const RoadNetwork& net, std::istream& in, const std::string& source_name) {
  const auto table = csv::Table::parse(in, source_name, {"node_id", "zone_id", "zone_name"});
  std::vector<std::pair<NodeId, ZoneId>> assignment;
  std::map<ZoneId, std::string> names;
  std::unordered_map<NodeId, std::size_t> seen;
  for (const auto& row : table.rows()) {
    const NodeId node = csv::to_int(table, row, 0, "node_id");
    const ZoneId zone = csv::to_int(table, row, 1, "zone_id");
    const std::string& name = row.fields[2];
    if (!net.contains(node)) {
      throw RowError(table.source(), row.line, "unknown node " + std::to_string(node));
    }
    if (!seen.emplace(node, row.line).second) {
      throw RowError(table.source(), row.line, "node " + std::to_string(node) + " mapped twice");
    }
    auto [it, inserted] = names.emplace(zone, name);
    if (!inserted && it->second != name) {
      throw RowError(table.source(), row.line,
                     "zone " + std::to_string(zone) + " has conflicting names '" + it->second +
                         "' and '" + name + "'");
    }
    assignment.emplace_back(node, zone);
  }
  for (const auto& n : net.nodes()) {
    if (!seen.count(n.id)) {
      throw InputError(table.source() + ": missing zone assignment for node " + std::to_string(n.id));
    }
  }
  return ZonePartition(net, assignment, {names.begin(), names.end()});
}

ZonePartition load_zones(const RoadNetwork& net, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_zones(net, in, path);
}

}  // namespace fairride
