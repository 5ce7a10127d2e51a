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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <unordered_set>

#include "fairride/csv.hpp"

namespace fairride {

RequestStream::RequestStream(std::vector<Request> requests) : requests_(std::move(requests)) {
  std::sort(requests_.begin(), requests_.end(), [](const Request& a, const Request& b) {
    return a.arrival_epoch != b.arrival_epoch ? a.arrival_epoch < b.arrival_epoch : a.id < b.id;
  });
  std::unordered_set<RequestId> ids;
  for (const auto& r : requests_) {
    if (!ids.insert(r.id).second) throw InputError("duplicate request_id " + std::to_string(r.id));
  }
}

std::span<const Request> RequestStream::batch_at(Epoch epoch) const {
  auto lo = std::lower_bound(requests_.begin(), requests_.end(), epoch,
                             [](const Request& r, Epoch e) { return r.arrival_epoch < e; });
  auto hi = std::upper_bound(lo, requests_.end(), epoch,
                             [](Epoch e, const Request& r) { return e < r.arrival_epoch; });
  return {lo, hi};
}

RequestStream load_requests(std::istream& in, const RoadNetwork& net,
                            const std::string& source_name) {
  const auto table = csv::Table::parse(
      in, source_name, {"request_id", "pickup_node", "dropoff_node", "arrival_epoch", "fare"});
  std::vector<Request> out;
  std::unordered_set<RequestId> ids;
  for (const auto& row : table.rows()) {
    Request r;
    r.id = csv::to_int(table, row, 0, "request_id");
    r.pickup = csv::to_int(table, row, 1, "pickup_node");
    r.dropoff = csv::to_int(table, row, 2, "dropoff_node");
    const double arrival = csv::to_double(table, row, 3, "arrival_epoch");
    const double fare = csv::to_double(table, row, 4, "fare");
    auto fail = [&](const std::string& what) { throw RowError(table.source(), row.line, what); };
    if (!ids.insert(r.id).second) fail("duplicate request_id " + std::to_string(r.id));
    if (!net.contains(r.pickup)) fail("unknown pickup node " + std::to_string(r.pickup));
    if (!net.contains(r.dropoff)) fail("unknown dropoff node " + std::to_string(r.dropoff));
    if (r.pickup == r.dropoff) fail("pickup equals dropoff");
    if (!net.travel_time(r.pickup, r.dropoff)) fail("dropoff unreachable from pickup");
    if (arrival < 0) fail("negative arrival_epoch");
    if (fare < 0) fail("negative fare");
    r.arrival_epoch = static_cast<Epoch>(std::floor(arrival));
    r.fare = std::llround(fare * 100.0);
    out.push_back(r);
  }
  return RequestStream(std::move(out));
}

RequestStream load_requests(const std::string& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return load_requests(in, net, path);
}

void write_requests(std::ostream& out, const RequestStream& stream) {
  out << "request_id,pickup_node,dropoff_node,arrival_epoch,fare\n";
  for (const auto& r : stream.requests()) {
    out << r.id << ',' << r.pickup << ',' << r.dropoff << ',' << r.arrival_epoch << ','
        << r.fare / 100 << '.' << std::setw(2) << std::setfill('0') << r.fare % 100
        << std::setfill(' ') << '\n';
  }
}

Cents FareModel::fare_for(Seconds direct_time) const {
  return std::llround((base + per_second * static_cast<double>(direct_time)) * 100.0);
}

namespace {

bool any_valid_pair(const RoadNetwork& net) {
  for (const auto& n : net.nodes()) {
    const auto& dist = *net.distances_from(n.id);
    for (std::size_t j = 0; j < dist.size(); ++j) {
      if (net.node_at(j).id != n.id && dist[j] != RoadNetwork::kUnreachable) return true;
    }
  }
  return false;
}

}  // namespace

RequestStream generate_synthetic(const RoadNetwork& net, const SyntheticDemand& params) {
  if (static_cast<Epoch>(params.rate_profile.size()) != params.horizon_epochs) {
    throw InputError("rate profile length " + std::to_string(params.rate_profile.size()) +
                     " does not match horizon " + std::to_string(params.horizon_epochs));
  }
  for (double rate : params.rate_profile) {
    if (!(rate >= 0) || !std::isfinite(rate)) throw InputError("rate profile entries must be >= 0");
  }
  const bool any_demand =
      std::any_of(params.rate_profile.begin(), params.rate_profile.end(), [](double r) { return r > 0; });
  if (!any_demand) return {};
  if (net.node_count() < 2) throw InputError("synthetic demand needs a network with at least 2 nodes");

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::size_t> pick_node(0, net.node_count() - 1);
  std::vector<Request> out;
  RequestId next_id = 1;
  bool pairs_checked = false;
  for (Epoch e = 0; e < params.horizon_epochs; ++e) {
    const double rate = params.rate_profile[static_cast<std::size_t>(e)];
    if (rate <= 0) continue;
    std::poisson_distribution<std::int64_t> arrivals(rate);
    const std::int64_t count = arrivals(rng);
    for (std::int64_t k = 0; k < count; ++k) {
      // Rejection sampling keeps the draw uniform over valid pairs.
      int rejected = 0;
      while (true) {
        const auto& p = net.node_at(pick_node(rng));
        const auto& d = net.node_at(pick_node(rng));
        if (p.id != d.id) {
          if (auto tt = net.travel_time(p.id, d.id)) {
            out.push_back(Request{next_id++, p.id, d.id, e, params.fares.fare_for(*tt)});
            break;
          }
        }
        if (++rejected == 1000 && !pairs_checked) {
          if (!any_valid_pair(net)) throw InputError("network has no reachable node pair");
          pairs_checked = true;
        }
      }
    }
  }
  return RequestStream(std::move(out));
}

}  // namespace fairride
