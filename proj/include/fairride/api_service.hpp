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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairride/metrics.hpp"
#include "fairride/road_network.hpp"
#include "fairride/runlog.hpp"

namespace fairride {

inline constexpr std::string_view kApiFormat = "fairride-api/1";

// Request-level payloads above this many records are paged.
inline constexpr std::size_t kPageSize = 10000;

// A registered run with everything queries need already computed.
struct RegisteredRun {
  struct StopRecord {
    Seconds t = 0;
    NodeId node = 0;
    StopKind kind = StopKind::kPickup;
    RequestId request_id = 0;
  };

  std::string id;
  std::shared_ptr<const RoadNetwork> net;
  std::shared_ptr<const ZonePartition> zones;
  LogIndex index;
  std::vector<EpochAggregate> per_epoch;
  // match_prefix[i][e] = matches of taxi index i in epochs [0, e).
  std::vector<std::vector<std::int32_t>> match_prefix;
  // Per taxi index, stops in log order.
  std::vector<std::vector<StopRecord>> stops;
  std::map<RequestId, std::size_t> request_slot;
  std::vector<std::string> warnings;

  // Bodies that do not depend on the query.
  std::string header_json;
  std::string dashboard;
  std::string request_series;
  std::string delay_series;
  std::string boxplots_hour;
  std::string boxplots_day;
  std::string fairness_day;
};

struct RunInputs {
  // Empty fields fall back to the paths recorded in the log header.
  std::string nodes;
  std::string edges;
  std::string zones;
};

// Run id -> precomputed run. Registration validates the log, builds the
// aggregates outside the lock and then publishes the run in one step.
class RunRegistry {
 public:
  // Throws InputError on a duplicate id or a log that fails validation.
  void add(std::string id, RunLog log, std::shared_ptr<const RoadNetwork> net,
           std::shared_ptr<const ZonePartition> zones);
  // Reads a log file; its id is the file name without extension. Networks
  // and zone files shared by several runs are loaded once.
  std::string add_file(const std::string& path, const RunInputs& inputs = {});

  std::shared_ptr<const RegisteredRun> find(const std::string& id) const;
  std::vector<std::shared_ptr<const RegisteredRun>> runs() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const RegisteredRun>> runs_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<const RoadNetwork>> nets_;
  std::map<std::string, std::shared_ptr<const ZonePartition>> zone_files_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

// Transport-independent request handling; serve() is a thin HTTP shell
// around it.
class ApiService {
 public:
  explicit ApiService(const RunRegistry& registry) : registry_(registry) {}

  HttpResponse handle(std::string_view path, const QueryParams& query) const;

 private:
  const RunRegistry& registry_;
};

// Blocks serving GET requests. Throws Error when the address cannot be
// bound.
void serve(const ApiService& api, const std::string& host, int port);

}  // namespace fairride
