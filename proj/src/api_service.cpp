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

#include "fairride/api_service.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "fairride/validate.hpp"
#include "httplib.h"
#include "report_json.hpp"

namespace fairride {

namespace {

class BadRequest : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t taxi_slot(const LogIndex& index, TaxiId id) {
  const auto& taxis = index.taxis();
  auto it = std::lower_bound(taxis.begin(), taxis.end(), id);
  if (it == taxis.end() || *it != id) throw NotFound("unknown taxi " + std::to_string(id));
  return static_cast<std::size_t>(it - taxis.begin());
}

json envelope(const RegisteredRun& run) {
  json j;
  j["format"] = std::string(kApiFormat);
  j["run"] = run.id;
  return j;
}

std::string dump(const json& j) { return j.dump() + "\n"; }

json point_json(const RoadNetwork& net, NodeId node) {
  const auto& n = net.node(node);
  return json{{"node", node}, {"lat", n.lat}, {"lon", n.lon}};
}

std::shared_ptr<RegisteredRun> build_run(std::string id, const RunLog& log,
                                         std::shared_ptr<const RoadNetwork> net,
                                         std::shared_ptr<const ZonePartition> zones) {
  RunLogValidator validator(*net, log.header.constraints);
  LogIndex::Builder builder(log.header, true);
  std::map<TaxiId, std::vector<RegisteredRun::StopRecord>> stops;
  std::map<TaxiId, std::map<Epoch, std::int32_t>> matches;
  std::map<RequestId, std::pair<NodeId, NodeId>> nodes;
  for (const Event& e : log.events) {
    validator.accept(e);
    builder.accept(e);
    std::visit(Overloaded{[&](const ArrivalEvent& a) {
                            nodes[a.request.id] = {a.request.pickup, a.request.dropoff};
                          },
                          [&](const MatchedEvent& m) { ++matches[m.taxi_id][m.epoch]; },
                          [&](const PickupEvent& p) {
                            stops[p.taxi_id].push_back({p.t, nodes[p.request_id].first,
                                                        StopKind::kPickup, p.request_id});
                          },
                          [&](const DropoffEvent& d) {
                            stops[d.taxi_id].push_back({d.t, nodes[d.request_id].second,
                                                        StopKind::kDropoff, d.request_id});
                          },
                          [](const auto&) {}},
               e);
  }
  const ValidationReport report = std::move(validator).finish();
  if (!report.clean()) {
    const Violation& v = report.violations.front();
    throw InputError("run '" + id + "' fails validation with " +
                     std::to_string(report.violations.size()) + " violation(s); first at event " +
                     std::to_string(v.event_index) + ": " + to_string(v.kind) + ": " + v.message);
  }

  auto run = std::make_shared<RegisteredRun>();
  run->id = std::move(id);
  run->net = std::move(net);
  run->zones = std::move(zones);
  run->index = std::move(builder).finish();
  const LogIndex& index = run->index;
  run->per_epoch = aggregate_by_epoch(index, *run->zones);
  const auto horizon = static_cast<std::size_t>(index.horizon());
  const auto& taxis = index.taxis();
  run->match_prefix.assign(taxis.size(), std::vector<std::int32_t>(horizon + 1, 0));
  run->stops.resize(taxis.size());
  for (std::size_t i = 0; i < taxis.size(); ++i) {
    auto& prefix = run->match_prefix[i];
    const auto m = matches.find(taxis[i]);
    for (std::size_t e = 0; e < horizon; ++e) {
      std::int32_t here = 0;
      if (m != matches.end()) {
        auto it = m->second.find(static_cast<Epoch>(e));
        if (it != m->second.end()) here = it->second;
      }
      prefix[e + 1] = prefix[e] + here;
    }
    if (auto s = stops.find(taxis[i]); s != stops.end()) run->stops[i] = std::move(s->second);
  }
  for (std::size_t i = 0; i < index.requests().size(); ++i) {
    run->request_slot[index.requests()[i].request.id] = i;
  }

  run->header_json = encode_header(index.header());
  run->dashboard = render_report(index, numeric_dashboard(index, *run->zones));

  json req = envelope(*run);
  json epochs = json::array();
  const auto series = request_timeseries(index);
  for (std::size_t e = 0; e < series.size(); ++e) {
    epochs.push_back(json{{"epoch", e},
                          {"total", series[e].total},
                          {"matched", series[e].matched},
                          {"unmatched", series[e].unmatched},
                          {"pending", series[e].pending}});
  }
  req["epochs"] = std::move(epochs);
  run->request_series = dump(req);

  json del = envelope(*run);
  const DelaySeries delays = delay_timeseries(index);
  json points = json::array();
  for (std::size_t e = 0; e < delays.points.size(); ++e) {
    if (!delays.points[e]) continue;
    points.push_back(json{{"epoch", e},
                          {"pickup_s", number_json(delays.points[e]->first)},
                          {"detour_s", number_json(delays.points[e]->second)}});
  }
  del["points"] = std::move(points);
  json day = json::object();
  if (auto m = delays.day_pickup.mean()) day["pickup_s"] = number_json(*m);
  if (auto m = delays.day_detour.mean()) day["detour_s"] = number_json(*m);
  del["day_mean"] = std::move(day);
  run->delay_series = dump(del);

  for (TimeBin bin : {TimeBin::kHour, TimeBin::kDay}) {
    json b = envelope(*run);
    b["bin"] = bin == TimeBin::kHour ? "hour" : "day";
    json bins = json::array();
    for (const BinnedSummary& s : completed_boxplots(index, bin)) {
      json entry = json{{"index", s.bin}};
      entry.update(summary_json(s.summary));
      bins.push_back(std::move(entry));
    }
    b["bins"] = std::move(bins);
    (bin == TimeBin::kHour ? run->boxplots_hour : run->boxplots_day) = dump(b);
  }

  json fair = envelope(*run);
  fair["window"] = "day";
  fair.update(fairness_json(zonal_fairness(combine(run->per_epoch, Window::whole_day(index.horizon())).pairs)));
  run->fairness_day = dump(fair);
  return run;
}

std::optional<std::string> param(const QueryParams& q, const std::string& name) {
  auto it = q.find(name);
  if (it == q.end()) return std::nullopt;
  return it->second;
}

std::int64_t parse_int(const std::string& name, const std::string& text) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw BadRequest("parameter '" + name + "' is not an integer: '" + text + "'");
  }
  return v;
}

Epoch epoch_param(const QueryParams& q, const LogIndex& index) {
  const auto text = param(q, "epoch");
  if (!text) throw BadRequest("missing parameter 'epoch'");
  const Epoch e = parse_int("epoch", *text);
  if (e < 0 || e >= index.horizon()) {
    throw BadRequest("epoch " + std::to_string(e) + " outside [0, " +
                     std::to_string(index.horizon()) + ")");
  }
  return e;
}

Epoch window_param(const QueryParams& q, const LogIndex& index) {
  const auto text = param(q, "window");
  if (!text) return 1;
  const Epoch w = parse_int("window", *text);
  if (w < 1 || w > index.horizon()) {
    throw BadRequest("window " + std::to_string(w) + " outside [1, " +
                     std::to_string(index.horizon()) + "]");
  }
  return w;
}

std::string choice_param(const QueryParams& q, const std::string& name,
                         const std::vector<std::string>& allowed) {
  const auto text = param(q, name);
  if (!text) return allowed.front();
  if (std::find(allowed.begin(), allowed.end(), *text) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw BadRequest("parameter '" + name + "' must be " + list);
  }
  return *text;
}

json taxi_path(const RegisteredRun& run, std::size_t slot, Epoch epoch) {
  const RoadNetwork& net = *run.net;
  const LogIndex& index = run.index;
  const Seconds now = epoch * index.epoch_length();
  const TaxiId taxi = index.taxis()[slot];

  json stops = json::array();
  std::vector<NodeId> targets;
  for (const auto& s : run.stops[slot]) {
    if (s.t <= now) continue;
    const RequestRecord& r = index.requests()[run.request_slot.at(s.request_id)];
    if (!r.matched_epoch || *r.matched_epoch >= epoch) continue;
    stops.push_back(json{{"request_id", s.request_id},
                         {"kind", to_string(s.kind)},
                         {"node", s.node},
                         {"t", s.t}});
    targets.push_back(s.node);
  }

  std::vector<NodeId> path;
  const auto& at = index.positions()[static_cast<std::size_t>(epoch)];
  auto pos = std::lower_bound(at.begin(), at.end(), taxi,
                              [](const PositionRecord& p, TaxiId v) { return p.taxi_id < v; });
  if (pos != at.end() && pos->taxi_id == taxi) {
    path.push_back(pos->position.node);
    if (pos->position.edge_to) path.push_back(*pos->position.edge_to);
    for (NodeId target : targets) {
      const auto leg = net.shortest_path(path.back(), target);
      path.insert(path.end(), leg.begin() + 1, leg.end());
    }
  }
  json j;
  j["taxi_id"] = taxi;
  j["nodes"] = path;
  j["stops"] = std::move(stops);
  return j;
}

std::string taxis_body(const RegisteredRun& run, const QueryParams& q) {
  const LogIndex& index = run.index;
  const Epoch epoch = epoch_param(q, index);
  const Epoch w = window_param(q, index);
  std::optional<std::size_t> selected;
  if (auto t = param(q, "taxi")) selected = taxi_slot(index, parse_int("taxi", *t));

  // Matches in the W epochs before the snapshot instant epoch * length.
  const auto lo = static_cast<std::size_t>(std::max<Epoch>(0, epoch - w));
  const auto hi = static_cast<std::size_t>(epoch);
  json j = envelope(run);
  j["epoch"] = epoch;
  j["window"] = w;
  json taxis = json::array();
  std::int64_t total_matches = 0;
  for (const PositionRecord& p : index.positions()[static_cast<std::size_t>(epoch)]) {
    const std::size_t slot = taxi_slot(index, p.taxi_id);
    const auto& prefix = run.match_prefix[slot];
    const std::int64_t m = prefix[hi] - prefix[lo];
    total_matches += m;
    const auto& node = run.net->node(p.position.node);
    json t;
    t["taxi_id"] = p.taxi_id;
    t["node"] = p.position.node;
    if (p.position.edge_to) t["edge_to"] = *p.position.edge_to;
    t["progress_s"] = p.position.progress;
    t["lat"] = node.lat;
    t["lon"] = node.lon;
    t["n_onboard"] = p.n_onboard;
    t["matches_in_window"] = m;
    taxis.push_back(std::move(t));
  }
  if (!taxis.empty()) {
    j["mean_matches_in_window"] =
        number_json(static_cast<double>(total_matches) / static_cast<double>(taxis.size()));
  }
  j["taxis"] = std::move(taxis);
  if (selected) j["path"] = taxi_path(run, *selected, epoch);
  return dump(j);
}

std::string requests_body(const RegisteredRun& run, const QueryParams& q) {
  const LogIndex& index = run.index;
  const Epoch epoch = epoch_param(q, index);
  const std::string filter = choice_param(q, "filter", {"all", "matched", "unmatched"});
  const std::string dropoff = choice_param(q, "dropoff", {"false", "true"});
  std::size_t cursor = 0;
  if (auto c = param(q, "cursor")) {
    const auto v = parse_int("cursor", *c);
    if (v < 0) throw BadRequest("cursor must not be negative");
    cursor = static_cast<std::size_t>(v);
  }

  const auto& all = index.requests();
  auto first = std::lower_bound(all.begin(), all.end(), epoch, [](const RequestRecord& r, Epoch e) {
    return r.request.arrival_epoch < e;
  });
  std::vector<const RequestRecord*> chosen;
  for (auto it = first; it != all.end() && it->request.arrival_epoch == epoch; ++it) {
    const bool matched = it->matched();
    if (filter == "matched" && !matched) continue;
    if (filter == "unmatched" && matched) continue;
    chosen.push_back(&*it);
  }
  if (cursor > chosen.size()) throw BadRequest("cursor past the end of the result");

  json j = envelope(run);
  j["epoch"] = epoch;
  j["filter"] = filter;
  j["total"] = chosen.size();
  json out = json::array();
  const std::size_t end = std::min(chosen.size(), cursor + kPageSize);
  for (std::size_t i = cursor; i < end; ++i) {
    const RequestRecord& r = *chosen[i];
    json e;
    e["request_id"] = r.request.id;
    e["status"] = r.matched() ? "matched" : r.unmatched() ? "unmatched" : "pending";
    e["pickup"] = point_json(*run.net, r.request.pickup);
    if (dropoff == "true") e["dropoff"] = point_json(*run.net, r.request.dropoff);
    out.push_back(std::move(e));
  }
  j["requests"] = std::move(out);
  if (end < chosen.size()) j["next_cursor"] = end;
  return dump(j);
}

json centroid(const ZonePartition& zones, ZoneId id) {
  const Zone* z = zones.find(id);
  return json{{"lat", z->lat}, {"lon", z->lon}};
}

std::string flows_body(const RegisteredRun& run, const QueryParams& q) {
  const Epoch epoch = epoch_param(q, run.index);
  const Epoch w = window_param(q, run.index);
  const std::string metric = choice_param(q, "metric", {"acceptance", "detour"});
  const EpochAggregate agg = combine(run.per_epoch, Window{epoch, w});
  json j = envelope(run);
  j["epoch"] = epoch;
  j["window"] = w;
  j["metric"] = metric;
  json pairs = json::array();
  for (const auto& [pair, pc] : agg.pairs) {
    json p;
    p["from_zone"] = pair.first;
    p["to_zone"] = pair.second;
    p["incoming"] = pc.incoming;
    p["matched"] = pc.matched;
    if (metric == "acceptance") {
      p["value"] = number_json(pc.acceptance().value());
    } else if (auto d = pc.mean_detour()) {
      p["value"] = number_json(*d);
    }
    p["from"] = centroid(*run.zones, pair.first);
    p["to"] = centroid(*run.zones, pair.second);
    pairs.push_back(std::move(p));
  }
  j["pairs"] = std::move(pairs);
  return dump(j);
}

std::string choropleth_body(const RegisteredRun& run, const QueryParams& q) {
  const Epoch epoch = epoch_param(q, run.index);
  const Epoch w = window_param(q, run.index);
  const EpochAggregate agg = combine(run.per_epoch, Window{epoch, w});
  json j = envelope(run);
  j["epoch"] = epoch;
  j["window"] = w;
  json zones = json::array();
  for (const Zone& z : run.zones->zones()) {
    json e;
    e["zone_id"] = z.id;
    e["name"] = z.name;
    e["lat"] = z.lat;
    e["lon"] = z.lon;
    auto it = agg.pickup_delay.find(z.id);
    e["pickups"] = it == agg.pickup_delay.end() ? 0 : it->second.count;
    if (it != agg.pickup_delay.end()) {
      if (auto m = it->second.mean()) e["mean_pickup_delay_s"] = number_json(*m);
    }
    zones.push_back(std::move(e));
  }
  j["zones"] = std::move(zones);
  return dump(j);
}

std::string fairness_body(const RegisteredRun& run, const QueryParams& q) {
  const auto window = param(q, "window");
  if (!window || *window == "day") return run.fairness_day;
  const Epoch w = window_param(q, run.index);
  const Epoch epoch = epoch_param(q, run.index);
  json j = envelope(run);
  j["window"] = w;
  j["epoch"] = epoch;
  j.update(fairness_json(zonal_fairness(combine(run.per_epoch, Window{epoch, w}).pairs)));
  return dump(j);
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

std::string error_body(std::string_view message) {
  json j;
  j["format"] = std::string(kApiFormat);
  j["error"] = std::string(message);
  return dump(j);
}

}  // namespace

void RunRegistry::add(std::string id, RunLog log, std::shared_ptr<const RoadNetwork> net,
                      std::shared_ptr<const ZonePartition> zones) {
  {
    std::lock_guard lock(mu_);
    if (runs_.count(id)) throw InputError("run id '" + id + "' registered twice");
  }
  auto run = build_run(id, log, std::move(net), std::move(zones));
  std::lock_guard lock(mu_);
  if (!runs_.emplace(id, std::move(run)).second) {
    throw InputError("run id '" + id + "' registered twice");
  }
}

std::string RunRegistry::add_file(const std::string& path, const RunInputs& inputs) {
  RunLog log = read_runlog(path);
  auto pick = [&](const std::string& given, const char* role) {
    if (!given.empty()) return given;
    auto it = log.header.inputs.find(role);
    if (it == log.header.inputs.end() || it->second.path.empty()) {
      throw InputError("run log '" + path + "' does not record a " + role +
                       " file; pass it explicitly");
    }
    return it->second.path;
  };
  const std::string nodes = pick(inputs.nodes, "nodes");
  const std::string edges = pick(inputs.edges, "edges");
  const std::string zones = pick(inputs.zones, "zones");
  const auto warnings =
      check_input_digests(log.header, {{"nodes", nodes}, {"edges", edges}, {"zones", zones}});

  std::shared_ptr<const RoadNetwork> net;
  std::shared_ptr<const ZonePartition> partition;
  {
    std::lock_guard lock(mu_);
    if (auto it = nets_.find({nodes, edges}); it != nets_.end()) net = it->second;
    if (auto it = zone_files_.find(zones); it != zone_files_.end()) partition = it->second;
  }
  if (!net) net = std::make_shared<const RoadNetwork>(load_network(nodes, edges));
  if (!partition) partition = std::make_shared<const ZonePartition>(load_zones(*net, zones));
  {
    std::lock_guard lock(mu_);
    nets_.emplace(std::make_pair(nodes, edges), net);
    zone_files_.emplace(zones, partition);
  }

  std::string id = std::filesystem::path(path).stem().string();
  {
    std::lock_guard lock(mu_);
    if (runs_.count(id)) throw InputError("run id '" + id + "' registered twice");
  }
  auto run = build_run(id, log, net, partition);
  run->warnings = warnings;
  std::lock_guard lock(mu_);
  if (!runs_.emplace(id, std::move(run)).second) {
    throw InputError("run id '" + id + "' registered twice");
  }
  return id;
}

std::shared_ptr<const RegisteredRun> RunRegistry::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = runs_.find(id);
  return it == runs_.end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<const RegisteredRun>> RunRegistry::runs() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<const RegisteredRun>> out;
  for (const auto& [id, run] : runs_) out.push_back(run);
  return out;
}

HttpResponse ApiService::handle(std::string_view path, const QueryParams& query) const {
  try {
    const auto parts = split_path(path);
    if (parts.empty() || parts[0] != "runs") throw NotFound("no such resource");
    if (parts.size() == 1) {
      json j;
      j["format"] = std::string(kApiFormat);
      json runs = json::array();
      for (const auto& run : registry_.runs()) {
        json r;
        r["id"] = run->id;
        r["header"] = json::parse(run->header_json);
        if (!run->warnings.empty()) r["warnings"] = run->warnings;
        runs.push_back(std::move(r));
      }
      j["runs"] = std::move(runs);
      return {200, dump(j)};
    }
    const auto run = registry_.find(std::string(parts[1]));
    if (!run) throw NotFound("unknown run '" + std::string(parts[1]) + "'");
    const std::vector<std::string_view> rest(parts.begin() + 2, parts.end());
    auto is = [&](std::initializer_list<std::string_view> want) {
      return std::equal(rest.begin(), rest.end(), want.begin(), want.end());
    };
    if (is({})) {
      json j = envelope(*run);
      j["header"] = json::parse(run->header_json);
      return {200, dump(j)};
    }
    if (is({"taxis"})) return {200, taxis_body(*run, query)};
    if (is({"requests"})) return {200, requests_body(*run, query)};
    if (is({"zones", "flows"})) return {200, flows_body(*run, query)};
    if (is({"zones", "choropleth"})) return {200, choropleth_body(*run, query)};
    if (is({"timeseries", "requests"})) return {200, run->request_series};
    if (is({"timeseries", "delays"})) return {200, run->delay_series};
    if (is({"timeseries", "boxplots"})) {
      const std::string bin = choice_param(query, "bin", {"hour", "day"});
      return {200, bin == "hour" ? run->boxplots_hour : run->boxplots_day};
    }
    if (is({"fairness", "zonal"})) return {200, fairness_body(*run, query)};
    if (is({"dashboard"})) return {200, run->dashboard};
    throw NotFound("no such resource");
  } catch (const NotFound& e) {
    return {404, error_body(e.what())};
  } catch (const BadRequest& e) {
    return {400, error_body(e.what())};
  }
}

void serve(const ApiService& api, const std::string& host, int port) {
  httplib::Server server;
  server.Get(R"(/.*)", [&api](const httplib::Request& req, httplib::Response& res) {
    QueryParams query(req.params.begin(), req.params.end());
    HttpResponse out = api.handle(req.path, query);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  });
  if (!server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  server.listen_after_bind();
}

}  // namespace fairride
