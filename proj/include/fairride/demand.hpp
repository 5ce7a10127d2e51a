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

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "fairride/road_network.hpp"
#include "fairride/types.hpp"

namespace fairride {

// A passenger request: pickup, dropoff, arrival epoch and fare.
struct Request {
  RequestId id = 0;
  NodeId pickup = 0;
  NodeId dropoff = 0;
  Epoch arrival_epoch = 0;
  Cents fare = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

// Requests ordered by (arrival_epoch, id) with unique ids.
class RequestStream {
 public:
  RequestStream() = default;
  // Sorts; throws InputError on duplicate ids.
  explicit RequestStream(std::vector<Request> requests);

  std::span<const Request> requests() const { return requests_; }
  std::size_t size() const { return requests_.size(); }
  bool empty() const { return requests_.empty(); }

  // Requests arriving exactly at `epoch`, in id order.
  std::span<const Request> batch_at(Epoch epoch) const;

  Epoch last_epoch() const { return requests_.empty() ? -1 : requests_.back().arrival_epoch; }

  friend bool operator==(const RequestStream&, const RequestStream&) = default;

 private:
  std::vector<Request> requests_;
};

// Reads `request_id,pickup_node,dropoff_node,arrival_epoch,fare`. Fractional
// arrival epochs are floored; fares are rounded to cents.
RequestStream load_requests(std::istream& in, const RoadNetwork& net,
                            const std::string& source_name = "requests");
RequestStream load_requests(const std::string& path, const RoadNetwork& net);

void write_requests(std::ostream& out, const RequestStream& stream);

struct FareModel {
  double base = 2.5;
  double per_second = 0.008;

  // base + per_second * direct_time, rounded to cents.
  Cents fare_for(Seconds direct_time) const;
};

struct SyntheticDemand {
  Epoch horizon_epochs = 1440;
  // Expected arrivals per epoch; size must equal horizon_epochs.
  std::vector<double> rate_profile;
  FareModel fares;
  std::uint64_t seed = 0;
};

// Poisson arrivals per epoch with the profile's mean; pickup/dropoff drawn
// uniformly over ordered node pairs (p != d) with d reachable from p.
// Reproducible for a fixed (seed, profile, network).
RequestStream generate_synthetic(const RoadNetwork& net, const SyntheticDemand& params);

}  // namespace fairride
