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

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

namespace fairride {

namespace {

void apply_stop(TaxiState& taxi, const Stop& stop, Seconds t) {
  auto it = std::lower_bound(
      taxi.rides.begin(), taxi.rides.end(), stop.request_id,
      [](const ActiveRide& r, RequestId v) { return r.request.id < v; });
  if (it == taxi.rides.end() || it->request.id != stop.request_id) return;
  if (stop.kind == StopKind::kPickup) {
    it->picked_up_at = t;
  } else {
    taxi.rides.erase(it);
  }
}

std::vector<TaxiState> place_taxis(const SimConfig& config, const RoadNetwork& net) {
  std::vector<TaxiState> taxis;
  if (!config.initial_nodes.empty()) {
    if (static_cast<std::int64_t>(config.initial_nodes.size()) != config.n_taxis) {
      throw InputError("initial placement lists " + std::to_string(config.initial_nodes.size()) +
                       " nodes for " + std::to_string(config.n_taxis) + " taxis");
    }
    for (std::int64_t i = 0; i < config.n_taxis; ++i) {
      const NodeId node = config.initial_nodes[static_cast<std::size_t>(i)];
      if (!net.contains(node)) {
        throw InputError("initial placement names unknown node " + std::to_string(node));
      }
      taxis.push_back(TaxiState{i + 1, TaxiPosition{node, std::nullopt, 0}, {}, {}});
    }
    return taxis;
  }
  const auto& nodes = net.nodes();
  if (nodes.empty()) throw InputError("cannot place taxis on an empty network");
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0x7a3du};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  for (std::int64_t i = 0; i < config.n_taxis; ++i) {
    taxis.push_back(TaxiState{i + 1, TaxiPosition{nodes[pick(rng)].id, std::nullopt, 0}, {}, {}});
  }
  return taxis;
}

}  // namespace

AdvanceResult advance_taxi(const TaxiState& taxi, Seconds duration, Seconds start,
                           const RoadNetwork& net, MovementMode mode) {
  AdvanceResult out{taxi, {}};
  TaxiState& s = out.taxi;
  TaxiPosition& pos = s.position;
  Seconds t = start;
  Seconds budget = duration;
  std::size_t done = 0;

  while (true) {
    if (pos.edge_to) {
      const Seconds remaining = *net.edge_cost(pos.node, *pos.edge_to) - pos.progress;
      if (remaining > budget) {
        pos.progress += budget;
        t += budget;
        budget = 0;
        break;
      }
      budget -= remaining;
      t += remaining;
      pos = TaxiPosition{*pos.edge_to, std::nullopt, 0};
    }
    while (done < s.plan.stops.size() && s.plan.stops[done].node == pos.node) {
      const Stop& stop = s.plan.stops[done];
      apply_stop(s, stop, t);
      out.events.push_back(StopEvent{t, stop.kind, stop.request_id});
      ++done;
    }
    if (done == s.plan.stops.size() || budget == 0) break;
    const auto next = net.next_hop(pos.node, s.plan.stops[done].node);
    if (!next) break;  // unreachable stop; plans are checked, so this is defensive
    if (mode == MovementMode::kSnapToNode && *net.edge_cost(pos.node, *next) > budget) break;
    pos = TaxiPosition{pos.node, *next, 0};
  }

  s.plan.stops.erase(s.plan.stops.begin(), s.plan.stops.begin() + static_cast<std::ptrdiff_t>(done));
  if (s.plan.etas.size() >= done) {
    s.plan.etas.erase(s.plan.etas.begin(), s.plan.etas.begin() + static_cast<std::ptrdiff_t>(done));
    for (Seconds& eta : s.plan.etas) eta = std::max<Seconds>(0, eta - duration);
  }
  return out;
}

RunStats simulate(const SimConfig& config, const RoadNetwork& net, const RequestStream& demand,
                  MatchingPolicy& policy, EventSink& sink, RunHeader header) {
  const Constraints& c = config.constraints;
  c.validate();
  if (config.horizon_epochs <= 0) throw InputError("horizon must be positive");
  if (config.n_taxis < 0) throw InputError("taxi count must not be negative");
  if (demand.last_epoch() >= config.horizon_epochs) {
    throw InputError("demand arrives at epoch " + std::to_string(demand.last_epoch()) +
                     ", beyond the horizon of " + std::to_string(config.horizon_epochs) +
                     " epochs");
  }

  std::map<RequestId, Seconds> direct;
  for (const Request& r : demand.requests()) {
    if (!net.contains(r.pickup) || !net.contains(r.dropoff)) {
      throw InputError("request " + std::to_string(r.id) + " names a node outside the network");
    }
    if (r.arrival_epoch < 0) {
      throw InputError("request " + std::to_string(r.id) + " has a negative arrival epoch");
    }
    const auto tt = net.travel_time(r.pickup, r.dropoff);
    if (!tt) throw InputError("request " + std::to_string(r.id) + ": dropoff unreachable");
    direct[r.id] = *tt;
  }

  header.format = std::string(kLogFormat);
  header.policy = policy.name();
  header.seed = config.seed;
  header.horizon_epochs = config.horizon_epochs;
  header.n_taxis = config.n_taxis;
  header.placement = config.initial_nodes.empty() ? "uniform" : "explicit";
  header.constraints = c;
  header.weights = config.weights.value_or(MatchWeights::defaults_for(c));
  sink.write_header(header);

  std::vector<TaxiState> taxis = place_taxis(config, net);
  std::vector<Request> pool;  // sorted by (arrival_epoch, id)
  RunStats stats;

  for (Epoch e = 0; e < config.horizon_epochs; ++e) {
    const Seconds now = e * c.epoch_length;
    for (const TaxiState& taxi : taxis) {
      sink.append(PositionEvent{e, taxi.id, taxi.position, taxi.onboard_count()});
    }
    for (const Request& r : demand.batch_at(e)) {
      sink.append(ArrivalEvent{r, direct.at(r.id)});
      pool.push_back(r);
      ++stats.arrivals;
    }

    if (!pool.empty() && !taxis.empty()) {
      const Assignment assignment = policy.match(e, taxis, pool, c, net);
      validate_assignment(taxis, pool, assignment, c, net, now);
      std::map<RequestId, const Request*> pending;
      for (const Request& r : pool) pending[r.id] = &r;
      std::vector<RequestId> taken;
      for (const TaxiAssignment& entry : assignment.entries) {
        auto taxi = std::lower_bound(taxis.begin(), taxis.end(), entry.taxi_id,
                                     [](const TaxiState& t, TaxiId v) { return t.id < v; });
        for (RequestId id : entry.group) {
          sink.append(MatchedEvent{e, id, entry.taxi_id});
          const Request& r = *pending.at(id);
          auto at = std::lower_bound(
              taxi->rides.begin(), taxi->rides.end(), id,
              [](const ActiveRide& ride, RequestId v) { return ride.request.id < v; });
          taxi->rides.insert(at, ActiveRide{r, direct.at(id), std::nullopt});
          taken.push_back(id);
          ++stats.matched;
        }
        taxi->plan = entry.plan;
      }
      std::sort(taken.begin(), taken.end());
      std::erase_if(pool, [&](const Request& r) {
        return std::binary_search(taken.begin(), taken.end(), r.id);
      });
    }

    struct Pending {
      Seconds t;
      TaxiId taxi;
      std::size_t seq;
      StopEvent stop;
    };
    std::vector<Pending> stops;
    for (TaxiState& taxi : taxis) {
      AdvanceResult adv = advance_taxi(taxi, c.epoch_length, now, net, config.movement);
      for (std::size_t i = 0; i < adv.events.size(); ++i) {
        stops.push_back({adv.events[i].t, taxi.id, i, adv.events[i]});
      }
      taxi = std::move(adv.taxi);
    }
    std::sort(stops.begin(), stops.end(), [](const Pending& a, const Pending& b) {
      return std::tie(a.t, a.taxi, a.seq) < std::tie(b.t, b.taxi, b.seq);
    });
    for (const Pending& p : stops) {
      if (p.stop.kind == StopKind::kPickup) {
        sink.append(PickupEvent{e, p.t, p.stop.request_id, p.taxi});
      } else {
        sink.append(DropoffEvent{e, p.t, p.stop.request_id, p.taxi});
        ++stats.completed;
      }
    }

    // No pickup can happen before the next matching instant.
    const Seconds next_match = now + c.epoch_length;
    std::vector<RequestId> expired;
    std::erase_if(pool, [&](const Request& r) {
      if (next_match <= arrival_time(r, c) + c.max_pickup_delay) return false;
      expired.push_back(r.id);
      return true;
    });
    std::sort(expired.begin(), expired.end());
    for (RequestId id : expired) sink.append(UnmatchedEvent{e, id});
    stats.unmatched += static_cast<std::int64_t>(expired.size());
    sink.end_epoch();
  }
  stats.pending_at_horizon = static_cast<std::int64_t>(pool.size());
  return stats;
}

RunLog run(const SimConfig& config, const RoadNetwork& net, const RequestStream& demand,
           RunHeader header) {
  auto policy = make_policy(config.policy, config.weights);
  MemorySink sink;
  simulate(config, net, demand, *policy, sink, std::move(header));
  return sink.take();
}

}  // namespace fairride
