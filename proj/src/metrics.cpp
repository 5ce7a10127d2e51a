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

#include "fairride/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairride {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ZonePair pair_of(const Request& r, const ZonePartition& zones) {
  return {zones.zone_of(r.pickup), zones.zone_of(r.dropoff)};
}

Seconds pickup_delay(const RequestRecord& r, Seconds epoch_length) {
  return *r.pickup_t - r.request.arrival_epoch * epoch_length;
}

Seconds detour_delay(const RequestRecord& r) {
  return *r.dropoff_t - *r.pickup_t - r.direct_time;
}

}  // namespace

LogIndex::Builder::Builder(RunHeader header, bool keep_positions)
    : index_(std::make_unique<LogIndex>()), keep_positions_(keep_positions) {
  index_->horizon_ = header.horizon_epochs;
  for (TaxiId t = 1; t <= header.n_taxis; ++t) taxis_.insert(t);
  index_->header_ = std::move(header);
}

RequestRecord* LogIndex::Builder::find(RequestId id) {
  auto it = slot_.find(id);
  return it == slot_.end() ? nullptr : &index_->requests_[it->second];
}

void LogIndex::Builder::accept(const Event& e) {
  LogIndex& x = *index_;
  x.horizon_ = std::max(x.horizon_, epoch_of(e) + 1);
  std::visit(Overloaded{
                 [&](const PositionEvent& p) {
                   taxis_.insert(p.taxi_id);
                   if (!keep_positions_) return;
                   if (x.positions_.size() <= static_cast<std::size_t>(p.epoch)) {
                     x.positions_.resize(static_cast<std::size_t>(p.epoch) + 1);
                   }
                   x.positions_[static_cast<std::size_t>(p.epoch)].push_back(
                       PositionRecord{p.taxi_id, p.position, p.n_onboard});
                 },
                 [&](const ArrivalEvent& a) {
                   if (slot_.count(a.request.id)) return;
                   slot_[a.request.id] = x.requests_.size();
                   RequestRecord r;
                   r.request = a.request;
                   r.direct_time = a.direct_time;
                   x.requests_.push_back(r);
                 },
                 [&](const MatchedEvent& m) {
                   taxis_.insert(m.taxi_id);
                   if (RequestRecord* r = find(m.request_id); r && !r->matched_epoch) {
                     r->matched_epoch = m.epoch;
                     r->taxi_id = m.taxi_id;
                   }
                 },
                 [&](const PickupEvent& p) {
                   if (RequestRecord* r = find(p.request_id)) r->pickup_t = p.t;
                 },
                 [&](const DropoffEvent& d) {
                   if (RequestRecord* r = find(d.request_id)) {
                     r->dropoff_t = d.t;
                     r->dropoff_epoch = d.epoch;
                   }
                 },
                 [&](const UnmatchedEvent& u) {
                   if (RequestRecord* r = find(u.request_id)) r->unmatched_epoch = u.epoch;
                 }},
             e);
}

LogIndex LogIndex::Builder::finish() && {
  LogIndex& x = *index_;
  // Arrival events already come in (epoch, id) order in a canonical log;
  // sorting keeps hand-built logs on the same footing.
  std::stable_sort(x.requests_.begin(), x.requests_.end(),
                   [](const RequestRecord& a, const RequestRecord& b) {
                     return std::tie(a.request.arrival_epoch, a.request.id) <
                            std::tie(b.request.arrival_epoch, b.request.id);
                   });
  x.taxis_.assign(taxis_.begin(), taxis_.end());
  if (keep_positions_) x.positions_.resize(static_cast<std::size_t>(x.horizon_));
  return std::move(x);
}

LogIndex LogIndex::from(const RunLog& log, bool keep_positions) {
  Builder b(log.header, keep_positions);
  for (const Event& e : log.events) b.accept(e);
  return std::move(b).finish();
}

std::optional<double> PairCounts::mean_detour() const {
  if (completed == 0) return std::nullopt;
  return static_cast<double>(detour_sum) / static_cast<double>(completed);
}

PairCounts& PairCounts::operator+=(const PairCounts& o) {
  incoming += o.incoming;
  matched += o.matched;
  completed += o.completed;
  detour_sum += o.detour_sum;
  return *this;
}

std::optional<double> MeanAccumulator::mean() const {
  if (count == 0) return std::nullopt;
  return static_cast<double>(sum) / static_cast<double>(count);
}

MeanAccumulator& MeanAccumulator::operator+=(const MeanAccumulator& o) {
  count += o.count;
  sum += o.sum;
  return *this;
}

RequestCounts& RequestCounts::operator+=(const RequestCounts& o) {
  total += o.total;
  matched += o.matched;
  unmatched += o.unmatched;
  pending += o.pending;
  return *this;
}

EpochAggregate& EpochAggregate::operator+=(const EpochAggregate& o) {
  for (const auto& [k, v] : o.pairs) pairs[k] += v;
  for (const auto& [k, v] : o.pickup_delay) pickup_delay[k] += v;
  requests += o.requests;
  completed_pickup_delay += o.completed_pickup_delay;
  completed_detour += o.completed_detour;
  return *this;
}

std::vector<EpochAggregate> aggregate_by_epoch(const LogIndex& index, const ZonePartition& zones) {
  std::vector<EpochAggregate> out(static_cast<std::size_t>(std::max<Epoch>(index.horizon(), 0)));
  const Seconds dt = index.epoch_length();
  for (const RequestRecord& r : index.requests()) {
    const Epoch e = r.request.arrival_epoch;
    if (e < 0) continue;
    if (static_cast<std::size_t>(e) >= out.size()) out.resize(static_cast<std::size_t>(e) + 1);
    EpochAggregate& a = out[static_cast<std::size_t>(e)];
    PairCounts& pc = a.pairs[pair_of(r.request, zones)];
    ++pc.incoming;
    ++a.requests.total;
    if (r.matched()) {
      ++pc.matched;
      ++a.requests.matched;
    } else if (r.unmatched()) {
      ++a.requests.unmatched;
    } else {
      ++a.requests.pending;
    }
    if (r.pickup_t) a.pickup_delay[zones.zone_of(r.request.pickup)].add(pickup_delay(r, dt));
    if (r.completed()) {
      ++pc.completed;
      pc.detour_sum += detour_delay(r);
      a.completed_pickup_delay.add(pickup_delay(r, dt));
      a.completed_detour.add(detour_delay(r));
    }
  }
  return out;
}

EpochAggregate combine(const std::vector<EpochAggregate>& per_epoch, const Window& w) {
  EpochAggregate out;
  const Epoch lo = std::max<Epoch>(0, w.end - w.length + 1);
  const Epoch hi = std::min<Epoch>(w.end, static_cast<Epoch>(per_epoch.size()) - 1);
  for (Epoch e = lo; e <= hi; ++e) out += per_epoch[static_cast<std::size_t>(e)];
  return out;
}

std::map<ZonePair, PairCounts> zone_pair_stats(const LogIndex& index, const ZonePartition& zones,
                                               const Window& w) {
  std::map<ZonePair, PairCounts> out;
  for (const RequestRecord& r : index.requests()) {
    if (!w.contains(r.request.arrival_epoch)) continue;
    PairCounts& pc = out[pair_of(r.request, zones)];
    ++pc.incoming;
    if (r.matched()) ++pc.matched;
    if (r.completed()) {
      ++pc.completed;
      pc.detour_sum += detour_delay(r);
    }
  }
  return out;
}

std::optional<FairnessValue> zonal_fairness(const std::map<ZonePair, PairCounts>& pairs) {
  std::optional<FairnessValue> best;
  for (const auto& [pair, pc] : pairs) {
    if (pc.incoming == 0) continue;
    const Ratio r = pc.acceptance();
    if (!best || r < best->ratio) best = FairnessValue{r, pair};
  }
  return best;
}

std::optional<FairnessValue> zonal_fairness(const LogIndex& index, const ZonePartition& zones,
                                            const Window& w) {
  return zonal_fairness(zone_pair_stats(index, zones, w));
}

std::map<ZoneId, MeanAccumulator> zone_pickup_delay(const LogIndex& index,
                                                    const ZonePartition& zones, const Window& w) {
  std::map<ZoneId, MeanAccumulator> out;
  for (const RequestRecord& r : index.requests()) {
    if (!w.contains(r.request.arrival_epoch) || !r.pickup_t) continue;
    out[zones.zone_of(r.request.pickup)].add(pickup_delay(r, index.epoch_length()));
  }
  return out;
}

std::vector<RequestCounts> request_timeseries(const LogIndex& index) {
  std::vector<RequestCounts> out(static_cast<std::size_t>(std::max<Epoch>(index.horizon(), 0)));
  for (const RequestRecord& r : index.requests()) {
    const auto e = static_cast<std::size_t>(r.request.arrival_epoch);
    if (e >= out.size()) out.resize(e + 1);
    RequestCounts& c = out[e];
    ++c.total;
    if (r.matched()) {
      ++c.matched;
    } else if (r.unmatched()) {
      ++c.unmatched;
    } else {
      ++c.pending;
    }
  }
  return out;
}

DelaySeries delay_timeseries(const LogIndex& index) {
  DelaySeries out;
  std::vector<MeanAccumulator> pick(static_cast<std::size_t>(std::max<Epoch>(index.horizon(), 0)));
  std::vector<MeanAccumulator> det(pick.size());
  for (const RequestRecord& r : index.requests()) {
    if (!r.completed()) continue;
    const auto e = static_cast<std::size_t>(r.request.arrival_epoch);
    if (e >= pick.size()) {
      pick.resize(e + 1);
      det.resize(e + 1);
    }
    pick[e].add(pickup_delay(r, index.epoch_length()));
    det[e].add(detour_delay(r));
    out.day_pickup.add(pickup_delay(r, index.epoch_length()));
    out.day_detour.add(detour_delay(r));
  }
  out.points.resize(pick.size());
  for (std::size_t e = 0; e < pick.size(); ++e) {
    if (pick[e].count > 0) out.points[e] = std::make_pair(*pick[e].mean(), *det[e].mean());
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

DistributionSummary summarize(std::vector<double> values) {
  DistributionSummary out;
  out.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  out.values = DistributionSummary::Values{values.front(),
                                           quantile_sorted(values, 0.10),
                                           quantile_sorted(values, 0.25),
                                           quantile_sorted(values, 0.50),
                                           quantile_sorted(values, 0.75),
                                           quantile_sorted(values, 0.90),
                                           values.back(),
                                           sum / static_cast<double>(values.size())};
  return out;
}

std::vector<BinnedSummary> completed_boxplots(const LogIndex& index, TimeBin bin) {
  const Seconds span = bin == TimeBin::kHour ? 3600 : 86400;
  const Seconds dt = index.epoch_length();
  const Epoch horizon = std::max<Epoch>(index.horizon(), 1);
  const auto bins = static_cast<std::size_t>((horizon * dt + span - 1) / span);
  const auto& taxis = index.taxis();
  std::vector<std::vector<double>> counts(bins, std::vector<double>(taxis.size(), 0.0));
  for (const RequestRecord& r : index.requests()) {
    if (!r.completed()) continue;
    const auto b = static_cast<std::size_t>(r.dropoff_epoch * dt / span);
    auto t = std::lower_bound(taxis.begin(), taxis.end(), r.taxi_id);
    if (b >= bins || t == taxis.end() || *t != r.taxi_id) continue;
    counts[b][static_cast<std::size_t>(t - taxis.begin())] += 1.0;
  }
  std::vector<BinnedSummary> out;
  for (std::size_t b = 0; b < bins; ++b) {
    out.push_back(BinnedSummary{static_cast<std::int64_t>(b), summarize(std::move(counts[b]))});
  }
  return out;
}

DistributionSummary driver_revenue(const LogIndex& index) {
  const auto& taxis = index.taxis();
  std::vector<Cents> cents(taxis.size(), 0);
  for (const RequestRecord& r : index.requests()) {
    if (!r.completed()) continue;
    auto t = std::lower_bound(taxis.begin(), taxis.end(), r.taxi_id);
    if (t == taxis.end() || *t != r.taxi_id) continue;
    cents[static_cast<std::size_t>(t - taxis.begin())] += r.request.fare;
  }
  std::vector<double> values;
  for (Cents c : cents) values.push_back(static_cast<double>(c) / 100.0);
  return summarize(std::move(values));
}

Dashboard numeric_dashboard(const LogIndex& index, const ZonePartition& zones) {
  Dashboard d;
  const auto& taxis = index.taxis();
  std::vector<double> per_driver(taxis.size(), 0.0);
  std::vector<double> pickups;
  std::vector<double> detours;
  for (const RequestRecord& r : index.requests()) {
    if (!r.completed()) continue;
    ++d.total_completed;
    auto t = std::lower_bound(taxis.begin(), taxis.end(), r.taxi_id);
    if (t != taxis.end() && *t == r.taxi_id) {
      per_driver[static_cast<std::size_t>(t - taxis.begin())] += 1.0;
    }
    pickups.push_back(static_cast<double>(pickup_delay(r, index.epoch_length())));
    detours.push_back(static_cast<double>(detour_delay(r)));
  }
  d.completed_per_driver = summarize(std::move(per_driver));
  d.pickup_delay = summarize(std::move(pickups));
  d.detour_delay = summarize(std::move(detours));

  std::vector<double> per_epoch;
  for (const RequestCounts& c : request_timeseries(index)) {
    d.requests += c;
    if (c.total > 0) {
      per_epoch.push_back(static_cast<double>(c.matched) / static_cast<double>(c.total));
    }
  }
  d.acceptance_per_epoch = summarize(std::move(per_epoch));

  const auto pairs = zone_pair_stats(index, zones, Window::whole_day(index.horizon()));
  std::vector<double> ratios;
  for (const auto& [pair, pc] : pairs) {
    if (pc.incoming > 0) ratios.push_back(pc.acceptance().value());
  }
  d.interzone_acceptance = summarize(std::move(ratios));
  d.zonal_fairness_day = zonal_fairness(pairs);
  return d;
}

}  // namespace fairride
