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

#include "fairride/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace fairride {

MatchWeights MatchWeights::defaults_for(const Constraints& c) {
  MatchWeights w;
  w.detour_penalty = 1;
  w.reward_per_match = 10 * c.max_detour_delay * w.detour_penalty;
  return w;
}

namespace {

constexpr Seconds kInf = std::numeric_limits<Seconds>::max();

ActiveRide make_ride(const Request& r, const RoadNetwork& net) {
  const auto direct = net.travel_time(r.pickup, r.dropoff);
  if (!direct) throw InputError("request " + std::to_string(r.id) + ": dropoff unreachable");
  return ActiveRide{r, *direct, std::nullopt};
}

// Detour total of the taxi's current plan; zero when the plan does not
// replay cleanly (e.g. hand-built states without a plan).
Seconds baseline_detour(const TaxiState& taxi, const Constraints& c, const RoadNetwork& net,
                        Seconds now) {
  if (taxi.plan.empty()) return 0;
  const PlanCheck check = check_plan(taxi, {}, taxi.plan.stops, c, net, now);
  return check.feasible ? check.total_detour : 0;
}

// Depth-first enumeration of precedence-respecting stop orders. Stops are
// visited in ascending (node, kind, request) order so the first optimum
// found is the lexicographically smallest.
class OrderingSearch {
 public:
  struct Slot {
    NodeId pickup = 0;
    NodeId dropoff = 0;
    bool onboard = false;
    Seconds pickup_deadline = 0;  // absolute
    Seconds picked_at = 0;        // absolute, onboard rides only
    Seconds direct = 0;
  };

  OrderingSearch(std::vector<Slot> slots, Anchor anchor, const Constraints& c,
                 const RoadNetwork& net, Seconds now, std::vector<RequestId> ids)
      : slots_(std::move(slots)), ids_(std::move(ids)), c_(c), now_(now) {
    for (std::size_t r = 0; r < slots_.size(); ++r) {
      if (!slots_[r].onboard) stops_.push_back({Stop{slots_[r].pickup, StopKind::kPickup, ids_[r]}, r});
      stops_.push_back({Stop{slots_[r].dropoff, StopKind::kDropoff, ids_[r]}, r});
    }
    std::sort(stops_.begin(), stops_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Travel times among the anchor and all stop nodes.
    nodes_.push_back(anchor.node);
    for (const auto& [stop, r] : stops_) {
      if (std::find(nodes_.begin(), nodes_.end(), stop.node) == nodes_.end()) nodes_.push_back(stop.node);
    }
    node_of_stop_.resize(stops_.size());
    for (std::size_t s = 0; s < stops_.size(); ++s) {
      node_of_stop_[s] = static_cast<std::size_t>(
          std::find(nodes_.begin(), nodes_.end(), stops_[s].first.node) - nodes_.begin());
    }
    const std::size_t k = nodes_.size();
    dist_.assign(k * k, kInf);
    std::vector<std::size_t> dense(k);
    for (std::size_t j = 0; j < k; ++j) dense[j] = net.index_of(nodes_[j]);
    for (std::size_t i = 0; i < k; ++i) {
      const auto table = net.distances_from(nodes_[i]);
      for (std::size_t j = 0; j < k; ++j) {
        const Seconds d = (*table)[dense[j]];
        dist_[i * k + j] = d == RoadNetwork::kUnreachable ? kInf : d;
      }
    }
    start_time_ = anchor.delay;
  }

  // Returns false when no ordering is feasible.
  bool run() {
    used_.assign(stops_.size(), false);
    picked_.assign(slots_.size(), false);
    pickup_eta_.assign(slots_.size(), 0);
    int occupancy = 0;
    for (const auto& s : slots_) occupancy += s.onboard ? 1 : 0;
    current_.clear();
    current_etas_.clear();
    best_detour_ = kInf;
    dfs(0, start_time_, occupancy, 0);
    return best_detour_ != kInf;
  }

  Seconds best_detour() const { return best_detour_; }
  StopPlan best_plan() const {
    StopPlan plan;
    for (std::size_t s : best_) plan.stops.push_back(stops_[s].first);
    plan.etas = best_etas_;
    return plan;
  }

 private:
  void dfs(std::size_t at, Seconds t, int occupancy, Seconds detour) {
    if (current_.size() == stops_.size()) {
      if (detour < best_detour_) {
        best_detour_ = detour;
        best_ = current_;
        best_etas_ = current_etas_;
      }
      return;
    }
    const std::size_t k = nodes_.size();
    for (std::size_t s = 0; s < stops_.size(); ++s) {
      if (used_[s]) continue;
      const auto& [stop, r] = stops_[s];
      const Slot& slot = slots_[r];
      const bool is_pickup = stop.kind == StopKind::kPickup;
      if (!is_pickup && !slot.onboard && !picked_[r]) continue;  // precedence
      const Seconds leg = dist_[at * k + node_of_stop_[s]];
      if (leg == kInf) continue;
      const Seconds t2 = t + leg;
      Seconds added = 0;
      if (is_pickup) {
        if (occupancy + 1 > c_.capacity) continue;
        if (now_ + t2 > slot.pickup_deadline) continue;
      } else {
        const Seconds pickup_abs = slot.onboard ? slot.picked_at : now_ + pickup_eta_[r];
        added = now_ + t2 - pickup_abs - slot.direct;
        if (added > c_.max_detour_delay) continue;
        // Equal totals found later are lexicographically larger.
        if (detour + added >= best_detour_) continue;
      }
      used_[s] = true;
      current_.push_back(s);
      current_etas_.push_back(t2);
      if (is_pickup) {
        picked_[r] = true;
        pickup_eta_[r] = t2;
        dfs(node_of_stop_[s], t2, occupancy + 1, detour);
        picked_[r] = false;
      } else {
        dfs(node_of_stop_[s], t2, occupancy - 1, detour + added);
      }
      current_.pop_back();
      current_etas_.pop_back();
      used_[s] = false;
    }
  }

  std::vector<Slot> slots_;
  std::vector<RequestId> ids_;
  const Constraints& c_;
  Seconds now_;
  std::vector<std::pair<Stop, std::size_t>> stops_;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> node_of_stop_;
  std::vector<Seconds> dist_;
  Seconds start_time_ = 0;

  std::vector<bool> used_;
  std::vector<bool> picked_;
  std::vector<Seconds> pickup_eta_;
  std::vector<std::size_t> current_;
  std::vector<Seconds> current_etas_;
  std::vector<std::size_t> best_;
  std::vector<Seconds> best_etas_;
  Seconds best_detour_ = kInf;
};

std::optional<Insertion> insert_rides(const TaxiState& taxi, const std::vector<ActiveRide>& extra,
                                      const Constraints& c, const RoadNetwork& net, Seconds now,
                                      Seconds baseline) {
  if (static_cast<int>(taxi.rides.size() + extra.size()) > c.capacity) return std::nullopt;
  std::vector<OrderingSearch::Slot> slots;
  std::vector<RequestId> ids;
  auto add = [&](const ActiveRide& ride) {
    OrderingSearch::Slot s;
    s.pickup = ride.request.pickup;
    s.dropoff = ride.request.dropoff;
    s.onboard = ride.onboard();
    s.pickup_deadline = arrival_time(ride.request, c) + c.max_pickup_delay;
    s.picked_at = ride.picked_up_at.value_or(0);
    s.direct = ride.direct_time;
    slots.push_back(s);
    ids.push_back(ride.request.id);
  };
  for (const auto& r : taxi.rides) add(r);
  for (const auto& r : extra) {
    if (taxi.find_ride(r.request.id)) return std::nullopt;
    add(r);
  }
  OrderingSearch search(std::move(slots), anchor_of(taxi.position, net), c, net, now, std::move(ids));
  if (!search.run()) return std::nullopt;
  return Insertion{search.best_plan(), search.best_detour() - baseline};
}

// Cheap necessary condition: the taxi can reach the pickup before its
// deadline.
bool pickup_reachable(const Anchor& anchor, const Request& r, const Constraints& c,
                      const RoadNetwork& net, Seconds now) {
  const auto to_pickup = net.distances_to(r.pickup);
  const Seconds d = (*to_pickup)[net.index_of(anchor.node)];
  if (d == RoadNetwork::kUnreachable) return false;
  return now + anchor.delay + d <= arrival_time(r, c) + c.max_pickup_delay;
}

void insert_sorted(std::vector<ActiveRide>& rides, ActiveRide ride) {
  auto pos = std::lower_bound(rides.begin(), rides.end(), ride.request.id,
                              [](const ActiveRide& r, RequestId v) { return r.request.id < v; });
  rides.insert(pos, std::move(ride));
}

}  // namespace

std::optional<Insertion> feasible_insertion(const TaxiState& taxi,
                                            std::span<const Request> new_requests,
                                            const Constraints& constraints,
                                            const RoadNetwork& net, Seconds now) {
  std::vector<ActiveRide> extra;
  for (const Request& r : new_requests) extra.push_back(make_ride(r, net));
  return insert_rides(taxi, extra, constraints, net, now,
                      baseline_detour(taxi, constraints, net, now));
}

std::vector<Candidate> generate_candidates(std::span<const TaxiState> taxis,
                                           std::span<const Request> batch,
                                           const Constraints& constraints,
                                           const RoadNetwork& net, Seconds now) {
  std::vector<Candidate> out;
  if (batch.empty()) return out;

  std::vector<ActiveRide> rides;
  std::map<RequestId, std::size_t> by_id;
  for (const Request& r : batch) {
    by_id[r.id] = rides.size();
    rides.push_back(make_ride(r, net));
  }

  std::vector<const TaxiState*> order;
  for (const auto& t : taxis) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

  for (const TaxiState* taxi : order) {
    const int cap = std::min(constraints.capacity - static_cast<int>(taxi->rides.size()),
                             constraints.max_group_size);
    if (cap <= 0) continue;
    const Anchor anchor = anchor_of(taxi->position, net);
    const Seconds baseline = baseline_detour(*taxi, constraints, net, now);

    // level[k] holds feasible groups of size k+1 (sorted id vectors).
    std::vector<std::map<std::vector<RequestId>, Insertion>> levels(1);
    for (const auto& [id, idx] : by_id) {
      if (taxi->find_ride(id)) continue;
      if (!pickup_reachable(anchor, rides[idx].request, constraints, net, now)) continue;
      if (auto ins = insert_rides(*taxi, {rides[idx]}, constraints, net, now, baseline)) {
        levels[0].emplace(std::vector<RequestId>{id}, std::move(*ins));
      }
    }
    for (int size = 2; size <= cap && !levels.back().empty(); ++size) {
      const auto& prev = levels.back();
      std::map<std::vector<RequestId>, Insertion> next;
      // Join groups that share all but their last element.
      for (auto a = prev.begin(); a != prev.end(); ++a) {
        for (auto b = std::next(a); b != prev.end(); ++b) {
          if (!std::equal(a->first.begin(), a->first.end() - 1, b->first.begin())) break;
          std::vector<RequestId> group = a->first;
          group.push_back(b->first.back());
          bool subsets_ok = true;
          for (std::size_t drop = 0; drop + 2 < group.size() && subsets_ok; ++drop) {
            std::vector<RequestId> sub;
            for (std::size_t i = 0; i < group.size(); ++i) {
              if (i != drop) sub.push_back(group[i]);
            }
            subsets_ok = prev.count(sub) != 0;
          }
          if (!subsets_ok) continue;
          std::vector<ActiveRide> extra;
          for (RequestId id : group) extra.push_back(rides[by_id[id]]);
          if (auto ins = insert_rides(*taxi, extra, constraints, net, now, baseline)) {
            next.emplace(std::move(group), std::move(*ins));
          }
        }
      }
      levels.push_back(std::move(next));
    }
    for (auto& level : levels) {
      for (auto& [group, ins] : level) {
        out.push_back(Candidate{taxi->id, group, std::move(ins.plan), ins.added_detour});
      }
    }
  }
  return out;
}

std::size_t Assignment::matched_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.group.size();
  return n;
}

std::vector<std::pair<RequestId, TaxiId>> Assignment::matches() const {
  std::vector<std::pair<RequestId, TaxiId>> out;
  for (const auto& e : entries) {
    for (RequestId r : e.group) out.emplace_back(r, e.taxi_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t Assignment::objective(const MatchWeights& w) const {
  std::int64_t total = 0;
  for (const auto& e : entries) {
    total += w.reward_per_match * static_cast<std::int64_t>(e.group.size()) -
             w.detour_penalty * e.added_detour;
  }
  return total;
}

std::int64_t candidate_value(const Candidate& c, const MatchWeights& w) {
  return w.reward_per_match * static_cast<std::int64_t>(c.group.size()) -
         w.detour_penalty * c.added_detour;
}

namespace {

// Branch and bound over one connected component of the conflict graph.
// Taxis are branched in ascending order, each choosing one of its
// candidates (ascending id) or none; with every value positive this visit
// order meets optimal selections in lexicographic order of their id sets,
// so keeping only strict improvements yields the smallest one.
class ComponentSolver {
 public:
  ComponentSolver(std::span<const Candidate> all, const std::vector<std::int64_t>& values,
                  const std::vector<std::size_t>& members)
      : all_(all), values_(values) {
    std::map<RequestId, std::size_t> requests;
    for (std::size_t id : members) {
      if (taxis_.empty() || all_[taxis_.back().front()].taxi_id != all_[id].taxi_id) taxis_.emplace_back();
      taxis_.back().push_back(id);
      for (RequestId r : all_[id].group) requests.emplace(r, requests.size());
    }
    request_slot_ = std::move(requests);
    for (std::size_t id : members) {
      std::vector<std::size_t> g;
      for (RequestId r : all_[id].group) g.push_back(request_slot_[r]);
      group_of_[id] = std::move(g);
    }
  }

  std::vector<std::size_t> solve() {
    used_.assign(request_slot_.size(), false);
    best_value_ = 0;
    best_.clear();
    chosen_.clear();
    dfs(0, 0);
    return best_;
  }

 private:
  bool compatible(std::size_t id) const {
    for (std::size_t r : group_of_.at(id)) {
      if (used_[r]) return false;
    }
    return true;
  }

  // Two relaxations: best candidate per remaining taxi, and best per-request
  // share of candidate value.
  std::int64_t bound(std::size_t level) {
    std::int64_t by_taxi = 0;
    share_.assign(request_slot_.size(), 0.0);
    for (std::size_t t = level; t < taxis_.size(); ++t) {
      std::int64_t best = 0;
      for (std::size_t id : taxis_[t]) {
        if (!compatible(id)) continue;
        best = std::max(best, values_[id]);
        const auto& g = group_of_.at(id);
        const double share = static_cast<double>(values_[id]) / static_cast<double>(g.size());
        for (std::size_t r : g) share_[r] = std::max(share_[r], share);
      }
      by_taxi += best;
    }
    const double by_request = std::accumulate(share_.begin(), share_.end(), 0.0);
    const auto request_bound = static_cast<std::int64_t>(std::floor(by_request + 1e-6));
    return std::min(by_taxi, request_bound);
  }

  void dfs(std::size_t level, std::int64_t value) {
    if (level == taxis_.size()) {
      if (value > best_value_) {
        best_value_ = value;
        best_ = chosen_;
      }
      return;
    }
    if (value + bound(level) <= best_value_) return;
    for (std::size_t id : taxis_[level]) {
      if (!compatible(id)) continue;
      for (std::size_t r : group_of_.at(id)) used_[r] = true;
      chosen_.push_back(id);
      dfs(level + 1, value + values_[id]);
      chosen_.pop_back();
      for (std::size_t r : group_of_.at(id)) used_[r] = false;
    }
    dfs(level + 1, value);
  }

  std::span<const Candidate> all_;
  const std::vector<std::int64_t>& values_;
  std::vector<std::vector<std::size_t>> taxis_;
  std::map<RequestId, std::size_t> request_slot_;
  std::map<std::size_t, std::vector<std::size_t>> group_of_;
  std::vector<bool> used_;
  std::vector<double> share_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  std::int64_t best_value_ = 0;
};

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<std::size_t> select_candidates(std::span<const Candidate> candidates,
                                           const MatchWeights& weights) {
  std::vector<std::int64_t> values(candidates.size());
  std::vector<std::size_t> useful;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    values[i] = candidate_value(candidates[i], weights);
    // A non-positive candidate never improves the objective and only makes
    // the id set larger.
    if (values[i] > 0) useful.push_back(i);
  }
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].taxi_id < candidates[i - 1].taxi_id) {
      throw std::invalid_argument("candidates must be grouped by ascending taxi id");
    }
  }

  // Components linked by shared taxis or shared requests solve independently;
  // per-component lexicographic minima compose into the global minimum.
  DisjointSets sets(candidates.size());
  std::map<RequestId, std::size_t> first_with_request;
  std::map<TaxiId, std::size_t> first_with_taxi;
  for (std::size_t i : useful) {
    auto [t, t_new] = first_with_taxi.emplace(candidates[i].taxi_id, i);
    if (!t_new) sets.unite(i, t->second);
    for (RequestId r : candidates[i].group) {
      auto [it, inserted] = first_with_request.emplace(r, i);
      if (!inserted) sets.unite(i, it->second);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i : useful) components[sets.find(i)].push_back(i);

  std::vector<std::size_t> chosen;
  for (const auto& [root, members] : components) {
    ComponentSolver solver(candidates, values, members);
    auto part = solver.solve();
    chosen.insert(chosen.end(), part.begin(), part.end());
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Assignment solve_batch_ilp(std::span<const Candidate> candidates, std::span<const Request> batch,
                           const MatchWeights& weights) {
  std::set<RequestId> in_batch;
  for (const auto& r : batch) in_batch.insert(r.id);
  for (const auto& c : candidates) {
    for (RequestId r : c.group) {
      if (!in_batch.count(r)) {
        throw std::invalid_argument("candidate references request " + std::to_string(r) +
                                    " outside the batch");
      }
    }
  }
  Assignment out;
  for (std::size_t id : select_candidates(candidates, weights)) {
    const Candidate& c = candidates[id];
    out.entries.push_back(TaxiAssignment{c.taxi_id, c.group, c.plan, c.added_detour});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.taxi_id < b.taxi_id; });
  return out;
}

Assignment greedy_sequential_match(std::span<const TaxiState> taxis,
                                   std::span<const Request> batch,
                                   const Constraints& constraints, const RoadNetwork& net,
                                   Seconds now) {
  std::vector<TaxiState> work(taxis.begin(), taxis.end());
  std::sort(work.begin(), work.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::vector<Anchor> anchors;
  std::vector<Seconds> baselines;
  for (const auto& t : work) {
    anchors.push_back(anchor_of(t.position, net));
    baselines.push_back(baseline_detour(t, constraints, net, now));
  }
  const std::vector<Seconds> original = baselines;
  std::vector<TaxiAssignment> given(work.size());

  std::vector<Request> order(batch.begin(), batch.end());
  std::sort(order.begin(), order.end(), [](const Request& a, const Request& b) {
    return a.arrival_epoch != b.arrival_epoch ? a.arrival_epoch < b.arrival_epoch : a.id < b.id;
  });
  for (const Request& req : order) {
    const ActiveRide ride = make_ride(req, net);
    std::optional<std::size_t> best_taxi;
    std::optional<Insertion> best;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (static_cast<int>(work[i].rides.size()) >= constraints.capacity) continue;
      if (static_cast<int>(given[i].group.size()) >= constraints.max_group_size) continue;
      if (!pickup_reachable(anchors[i], req, constraints, net, now)) continue;
      auto ins = insert_rides(work[i], {ride}, constraints, net, now, baselines[i]);
      if (!ins) continue;
      if (!best || ins->added_detour < best->added_detour) {
        best = std::move(ins);
        best_taxi = i;
      }
    }
    if (!best_taxi) continue;
    const std::size_t i = *best_taxi;
    insert_sorted(work[i].rides, ride);
    work[i].plan = best->plan;
    baselines[i] += best->added_detour;
    given[i].taxi_id = work[i].id;
    given[i].group.push_back(req.id);
    given[i].plan = std::move(best->plan);
    given[i].added_detour = baselines[i] - original[i];
  }

  Assignment out;
  for (auto& g : given) {
    if (!g.group.empty()) {
      std::sort(g.group.begin(), g.group.end());
      out.entries.push_back(std::move(g));
    }
  }
  return out;
}

Assignment RewardPlusDelayPolicy::match(Epoch epoch, std::span<const TaxiState> taxis,
                                        std::span<const Request> pool,
                                        const Constraints& constraints, const RoadNetwork& net) {
  const Seconds now = epoch * constraints.epoch_length;
  const auto candidates = generate_candidates(taxis, pool, constraints, net, now);
  return solve_batch_ilp(candidates, pool, weights_.value_or(MatchWeights::defaults_for(constraints)));
}

Assignment GreedyPolicy::match(Epoch epoch, std::span<const TaxiState> taxis,
                               std::span<const Request> pool, const Constraints& constraints,
                               const RoadNetwork& net) {
  return greedy_sequential_match(taxis, pool, constraints, net, epoch * constraints.epoch_length);
}

std::unique_ptr<MatchingPolicy> make_policy(const std::string& name,
                                            std::optional<MatchWeights> weights) {
  if (name == "rpd") return std::make_unique<RewardPlusDelayPolicy>(weights);
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  throw InputError("unknown policy '" + name + "' (expected rpd|greedy)");
}

void validate_assignment(std::span<const TaxiState> taxis, std::span<const Request> pool,
                         const Assignment& assignment, const Constraints& constraints,
                         const RoadNetwork& net, Seconds now) {
  std::map<TaxiId, const TaxiState*> by_taxi;
  for (const auto& t : taxis) by_taxi[t.id] = &t;
  std::map<RequestId, const Request*> pending;
  for (const auto& r : pool) pending[r.id] = &r;

  std::set<TaxiId> seen_taxis;
  std::set<RequestId> seen_requests;
  for (const auto& e : assignment.entries) {
    const std::string who = "taxi " + std::to_string(e.taxi_id);
    auto taxi = by_taxi.find(e.taxi_id);
    if (taxi == by_taxi.end()) throw FeasibilityError("assignment names unknown " + who);
    if (!seen_taxis.insert(e.taxi_id).second) {
      throw FeasibilityError(who + " receives more than one group");
    }
    if (e.group.empty()) throw FeasibilityError(who + " receives an empty group");
    std::vector<ActiveRide> extra;
    for (RequestId r : e.group) {
      auto it = pending.find(r);
      if (it == pending.end()) {
        throw FeasibilityError(who + ": request " + std::to_string(r) + " is not pending");
      }
      if (!seen_requests.insert(r).second) {
        throw FeasibilityError("request " + std::to_string(r) + " matched more than once");
      }
      extra.push_back(make_ride(*it->second, net));
    }
    const PlanCheck check = check_plan(*taxi->second, extra, e.plan.stops, constraints, net, now);
    if (!check.feasible) throw FeasibilityError(who + ": infeasible plan: " + check.violation);
  }
}

}  // namespace fairride
