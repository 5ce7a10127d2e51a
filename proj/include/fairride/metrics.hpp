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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairride/road_network.hpp"
#include "fairride/runlog.hpp"

namespace fairride {

// Everything the metrics need about one request, collected from its events.
struct RequestRecord {
  Request request;
  Seconds direct_time = 0;
  std::optional<Epoch> matched_epoch;
  TaxiId taxi_id = 0;
  std::optional<Seconds> pickup_t;
  std::optional<Seconds> dropoff_t;
  Epoch dropoff_epoch = 0;  // block the dropoff was logged in
  std::optional<Epoch> unmatched_epoch;

  bool matched() const { return matched_epoch.has_value(); }
  bool completed() const { return dropoff_t.has_value() && pickup_t.has_value(); }
  bool unmatched() const { return unmatched_epoch.has_value(); }
  bool pending() const { return !matched() && !unmatched(); }
};

struct PositionRecord {
  TaxiId taxi_id = 0;
  TaxiPosition position;
  int n_onboard = 0;
};

// Per-request and per-taxi view of a run log. Built in one pass, either from
// an in-memory log or by feeding a stream of events.
class LogIndex {
 public:
  class Builder {
   public:
    explicit Builder(RunHeader header, bool keep_positions = false);
    void accept(const Event& e);
    LogIndex finish() &&;

   private:
    RequestRecord* find(RequestId id);
    std::unique_ptr<LogIndex> index_;
    std::map<RequestId, std::size_t> slot_;
    std::set<TaxiId> taxis_;
    bool keep_positions_;
  };

  static LogIndex from(const RunLog& log, bool keep_positions = false);

  const RunHeader& header() const { return header_; }
  Seconds epoch_length() const { return header_.constraints.epoch_length; }
  Epoch horizon() const { return horizon_; }
  // In arrival order: (arrival_epoch, id).
  const std::vector<RequestRecord>& requests() const { return requests_; }
  // Taxi ids seen in the log or implied by the header, ascending.
  const std::vector<TaxiId>& taxis() const { return taxis_; }
  // Per epoch, positions ordered by taxi id. Empty unless kept.
  const std::vector<std::vector<PositionRecord>>& positions() const { return positions_; }

 private:
  RunHeader header_;
  Epoch horizon_ = 0;
  std::vector<RequestRecord> requests_;
  std::vector<TaxiId> taxis_;
  std::vector<std::vector<PositionRecord>> positions_;
};

// Trailing window covering epochs (end - length, end].
struct Window {
  Epoch end = 0;
  Epoch length = 1;

  bool contains(Epoch e) const { return e <= end && e > end - length; }
  static Window whole_day(Epoch horizon) { return Window{horizon - 1, horizon}; }
};

// Exact non-negative fraction.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator<(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }
};

using ZonePair = std::pair<ZoneId, ZoneId>;

struct PairCounts {
  std::int64_t incoming = 0;
  std::int64_t matched = 0;
  std::int64_t completed = 0;
  Seconds detour_sum = 0;  // over completed

  std::optional<double> mean_detour() const;
  Ratio acceptance() const { return Ratio{matched, incoming}; }
  PairCounts& operator+=(const PairCounts& o);
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

struct MeanAccumulator {
  std::int64_t count = 0;
  std::int64_t sum = 0;

  void add(std::int64_t v) {
    ++count;
    sum += v;
  }
  std::optional<double> mean() const;
  MeanAccumulator& operator+=(const MeanAccumulator& o);
  friend bool operator==(const MeanAccumulator&, const MeanAccumulator&) = default;
};

struct RequestCounts {
  std::int64_t total = 0;
  std::int64_t matched = 0;
  std::int64_t unmatched = 0;
  std::int64_t pending = 0;  // neither matched nor finalized at horizon end

  RequestCounts& operator+=(const RequestCounts& o);
  friend bool operator==(const RequestCounts&, const RequestCounts&) = default;
};

// Summed statistics of the requests arriving in a set of epochs. Merging is
// plain addition, so any grouping or order of merges gives the same result.
struct EpochAggregate {
  std::map<ZonePair, PairCounts> pairs;
  std::map<ZoneId, MeanAccumulator> pickup_delay;  // by pickup zone, picked-up requests
  RequestCounts requests;
  MeanAccumulator completed_pickup_delay;
  MeanAccumulator completed_detour;

  EpochAggregate& operator+=(const EpochAggregate& o);
  friend bool operator==(const EpochAggregate&, const EpochAggregate&) = default;
};

// One aggregate per arrival epoch, indexed by epoch.
std::vector<EpochAggregate> aggregate_by_epoch(const LogIndex& index, const ZonePartition& zones);

// Sum of per-epoch aggregates over the window.
EpochAggregate combine(const std::vector<EpochAggregate>& per_epoch, const Window& w);

std::map<ZonePair, PairCounts> zone_pair_stats(const LogIndex& index, const ZonePartition& zones,
                                               const Window& w);

struct FairnessValue {
  Ratio ratio;
  ZonePair pair;  // smallest pair attaining the minimum
};

// Minimum acceptance ratio over zone pairs with arrivals; nullopt when no
// pair has any.
std::optional<FairnessValue> zonal_fairness(const std::map<ZonePair, PairCounts>& pairs);
std::optional<FairnessValue> zonal_fairness(const LogIndex& index, const ZonePartition& zones,
                                            const Window& w);

// Mean pickup delay by pickup zone; zones without pickups are absent.
std::map<ZoneId, MeanAccumulator> zone_pickup_delay(const LogIndex& index,
                                                    const ZonePartition& zones, const Window& w);

// Indexed by arrival epoch over the whole horizon.
std::vector<RequestCounts> request_timeseries(const LogIndex& index);

struct DelaySeries {
  // Per arrival epoch over completed requests; nullopt where none completed.
  std::vector<std::optional<std::pair<double, double>>> points;  // (pickup, detour)
  MeanAccumulator day_pickup;
  MeanAccumulator day_detour;
};

DelaySeries delay_timeseries(const LogIndex& index);

struct DistributionSummary {
  std::int64_t count = 0;
  // Absent when count == 0.
  struct Values {
    double min, p10, p25, median, p75, p90, max, mean;
    friend bool operator==(const Values&, const Values&) = default;
  };
  std::optional<Values> values;
  friend bool operator==(const DistributionSummary&, const DistributionSummary&) = default;
};

// Quantiles interpolate linearly between closest ranks: for sorted x[0..n-1]
// and probability p, h = (n-1)p and q = x[floor h] + (h - floor h) *
// (x[floor h + 1] - x[floor h]).
double quantile_sorted(const std::vector<double>& sorted, double p);
DistributionSummary summarize(std::vector<double> values);

enum class TimeBin { kHour, kDay };

struct BinnedSummary {
  std::int64_t bin = 0;  // hour or day index
  DistributionSummary summary;
};

// Per bin, completed-request counts of every taxi (zeros included),
// binned by the epoch block the dropoff was logged in.
std::vector<BinnedSummary> completed_boxplots(const LogIndex& index, TimeBin bin);

// Per-taxi sum of completed fares in currency units.
DistributionSummary driver_revenue(const LogIndex& index);

struct Dashboard {
  DistributionSummary completed_per_driver;
  std::int64_t total_completed = 0;
  DistributionSummary acceptance_per_epoch;
  DistributionSummary interzone_acceptance;
  DistributionSummary pickup_delay;
  DistributionSummary detour_delay;
  RequestCounts requests;
  std::optional<FairnessValue> zonal_fairness_day;
};

Dashboard numeric_dashboard(const LogIndex& index, const ZonePartition& zones);

inline constexpr std::string_view kReportFormat = "fairride-report/1";

// Serialized report; the API's /dashboard serves the same bytes.
std::string render_report(const LogIndex& index, const Dashboard& d);

}  // namespace fairride
