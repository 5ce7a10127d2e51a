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

#include "fairride/runlog.hpp"

#include <cmath>
#include <fstream>

#include "fairride/digest.hpp"
#include "json.hpp"

namespace fairride {

using json = nlohmann::ordered_json;

namespace {

enum Rank { kPositionRank = 0, kArrivalRank, kMatchedRank, kStopRank, kUnmatchedRank };

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double fare_to_json(Cents c) { return static_cast<double>(c) / 100.0; }

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw LogFormatError(std::string("missing field '") + name + "'");
  return *it;
}

template <class T>
T get(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw LogFormatError(std::string("field '") + name + "': " + e.what());
  }
}

json parse_line(std::string_view line) {
  try {
    return json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw LogFormatError(std::string("malformed record: ") + e.what());
  }
}

}  // namespace

Epoch epoch_of(const Event& e) {
  return std::visit(Overloaded{[](const ArrivalEvent& a) { return a.request.arrival_epoch; },
                               [](const auto& x) { return x.epoch; }},
                    e);
}

Seconds time_of(const Event& e, Seconds epoch_length) {
  return std::visit(
      Overloaded{[&](const PickupEvent& x) { return x.t; },
                 [&](const DropoffEvent& x) { return x.t; },
                 [&](const UnmatchedEvent& x) { return (x.epoch + 1) * epoch_length; },
                 [&](const ArrivalEvent& x) { return x.request.arrival_epoch * epoch_length; },
                 [&](const auto& x) { return x.epoch * epoch_length; }},
      e);
}

const char* type_name(const Event& e) {
  static constexpr const char* kNames[] = {"position", "request_arrived", "matched",
                                           "pickup",   "dropoff",         "unmatched_final"};
  return kNames[e.index()];
}

std::string encode_header(const RunHeader& h) {
  json j;
  j["format"] = h.format;
  j["policy"] = h.policy;
  j["seed"] = h.seed;
  json cfg;
  cfg["horizon_epochs"] = h.horizon_epochs;
  cfg["epoch_length_s"] = h.constraints.epoch_length;
  cfg["n_taxis"] = h.n_taxis;
  cfg["placement"] = h.placement;
  cfg["capacity"] = h.constraints.capacity;
  cfg["max_pickup_delay_s"] = h.constraints.max_pickup_delay;
  cfg["max_detour_delay_s"] = h.constraints.max_detour_delay;
  cfg["max_group_size"] = h.constraints.max_group_size;
  cfg["reward_per_match"] = h.weights.reward_per_match;
  cfg["detour_penalty"] = h.weights.detour_penalty;
  j["config"] = std::move(cfg);
  j["demand"] = h.demand;
  json inputs = json::object();
  for (const auto& [role, file] : h.inputs) {
    inputs[role] = json{{"path", file.path}, {"sha256", file.sha256}};
  }
  j["inputs"] = std::move(inputs);
  return j.dump();
}

RunHeader decode_header(std::string_view line) {
  const json j = parse_line(line);
  if (!j.is_object()) throw LogFormatError("header is not an object");
  RunHeader h;
  h.format = get<std::string>(j, "format");
  if (h.format != kLogFormat) {
    throw VersionError("unsupported log format '" + h.format + "' (expected " +
                       std::string(kLogFormat) + ")");
  }
  h.policy = get<std::string>(j, "policy");
  h.seed = get<std::uint64_t>(j, "seed");
  const json& cfg = field(j, "config");
  h.horizon_epochs = get<Epoch>(cfg, "horizon_epochs");
  h.constraints.epoch_length = get<Seconds>(cfg, "epoch_length_s");
  h.n_taxis = get<std::int64_t>(cfg, "n_taxis");
  h.placement = get<std::string>(cfg, "placement");
  h.constraints.capacity = get<int>(cfg, "capacity");
  h.constraints.max_pickup_delay = get<Seconds>(cfg, "max_pickup_delay_s");
  h.constraints.max_detour_delay = get<Seconds>(cfg, "max_detour_delay_s");
  h.constraints.max_group_size = get<int>(cfg, "max_group_size");
  h.weights.reward_per_match = get<std::int64_t>(cfg, "reward_per_match");
  h.weights.detour_penalty = get<std::int64_t>(cfg, "detour_penalty");
  h.demand = get<std::string>(j, "demand");
  for (const auto& [role, file] : field(j, "inputs").items()) {
    h.inputs[role] = InputFile{get<std::string>(file, "path"), get<std::string>(file, "sha256")};
  }
  if (h.constraints.epoch_length <= 0) throw LogFormatError("epoch_length_s must be positive");
  return h;
}

std::string encode_event(const Event& e) {
  json j;
  j["type"] = type_name(e);
  std::visit(Overloaded{
                 [&](const PositionEvent& x) {
                   j["epoch"] = x.epoch;
                   j["taxi_id"] = x.taxi_id;
                   j["node"] = x.position.node;
                   if (x.position.edge_to) j["edge_to"] = *x.position.edge_to;
                   j["progress_s"] = x.position.progress;
                   j["n_onboard"] = x.n_onboard;
                 },
                 [&](const ArrivalEvent& x) {
                   j["epoch"] = x.request.arrival_epoch;
                   j["request_id"] = x.request.id;
                   j["pickup"] = x.request.pickup;
                   j["dropoff"] = x.request.dropoff;
                   j["fare"] = fare_to_json(x.request.fare);
                   j["direct_s"] = x.direct_time;
                 },
                 [&](const MatchedEvent& x) {
                   j["epoch"] = x.epoch;
                   j["request_id"] = x.request_id;
                   j["taxi_id"] = x.taxi_id;
                 },
                 [&](const PickupEvent& x) {
                   j["epoch"] = x.epoch;
                   j["t"] = x.t;
                   j["request_id"] = x.request_id;
                   j["taxi_id"] = x.taxi_id;
                 },
                 [&](const DropoffEvent& x) {
                   j["epoch"] = x.epoch;
                   j["t"] = x.t;
                   j["request_id"] = x.request_id;
                   j["taxi_id"] = x.taxi_id;
                 },
                 [&](const UnmatchedEvent& x) {
                   j["epoch"] = x.epoch;
                   j["request_id"] = x.request_id;
                 }},
             e);
  return j.dump();
}

Event decode_event(std::string_view line) {
  const json j = parse_line(line);
  if (!j.is_object()) throw LogFormatError("event is not an object");
  const auto type = get<std::string>(j, "type");
  if (type == "position") {
    PositionEvent x;
    x.epoch = get<Epoch>(j, "epoch");
    x.taxi_id = get<TaxiId>(j, "taxi_id");
    x.position.node = get<NodeId>(j, "node");
    if (j.contains("edge_to")) x.position.edge_to = get<NodeId>(j, "edge_to");
    x.position.progress = get<Seconds>(j, "progress_s");
    x.n_onboard = get<int>(j, "n_onboard");
    return x;
  }
  if (type == "request_arrived") {
    ArrivalEvent x;
    x.request.arrival_epoch = get<Epoch>(j, "epoch");
    x.request.id = get<RequestId>(j, "request_id");
    x.request.pickup = get<NodeId>(j, "pickup");
    x.request.dropoff = get<NodeId>(j, "dropoff");
    x.request.fare = std::llround(get<double>(j, "fare") * 100.0);
    x.direct_time = get<Seconds>(j, "direct_s");
    return x;
  }
  if (type == "matched") {
    return MatchedEvent{get<Epoch>(j, "epoch"), get<RequestId>(j, "request_id"),
                        get<TaxiId>(j, "taxi_id")};
  }
  if (type == "pickup") {
    return PickupEvent{get<Epoch>(j, "epoch"), get<Seconds>(j, "t"),
                       get<RequestId>(j, "request_id"), get<TaxiId>(j, "taxi_id")};
  }
  if (type == "dropoff") {
    return DropoffEvent{get<Epoch>(j, "epoch"), get<Seconds>(j, "t"),
                        get<RequestId>(j, "request_id"), get<TaxiId>(j, "taxi_id")};
  }
  if (type == "unmatched_final") {
    return UnmatchedEvent{get<Epoch>(j, "epoch"), get<RequestId>(j, "request_id")};
  }
  throw LogFormatError("unknown event type '" + type + "'");
}

OrderingChecker::Key OrderingChecker::key_of(const Event& e) const {
  const Seconds t = time_of(e, epoch_length_);
  return std::visit(
      Overloaded{
          [&](const PositionEvent& x) { return Key{x.epoch, kPositionRank, t, x.taxi_id, 0}; },
          [&](const ArrivalEvent& x) {
            return Key{x.request.arrival_epoch, kArrivalRank, t, x.request.id, 0};
          },
          [&](const MatchedEvent& x) {
            return Key{x.epoch, kMatchedRank, t, x.taxi_id, x.request_id};
          },
          [&](const PickupEvent& x) { return Key{x.epoch, kStopRank, t, x.taxi_id, 0}; },
          [&](const DropoffEvent& x) { return Key{x.epoch, kStopRank, t, x.taxi_id, 0}; },
          [&](const UnmatchedEvent& x) {
            return Key{x.epoch, kUnmatchedRank, t, x.request_id, 0};
          }},
      e);
}

void OrderingChecker::accept(const Event& e) {
  const Key key = key_of(e);
  if (last_) {
    const bool stop_tie = std::get<1>(key) == kStopRank && key == *last_;
    if (!(key > *last_) && !stop_tie) {
      throw OrderingError(std::string(type_name(e)) + " event at epoch " +
                          std::to_string(std::get<0>(key)) + " violates the canonical order");
    }
  }
  last_ = key;
}

void RunLogWriter::write_header(const RunHeader& h) {
  if (order_) throw OrderingError("header written twice");
  order_.emplace(h.constraints.epoch_length);
  out_ << encode_header(h) << '\n';
  if (!out_) throw Error("run log: write failed");
}

void RunLogWriter::append(const Event& e) {
  if (!order_) throw OrderingError("event appended before header");
  order_->accept(e);
  out_ << encode_event(e) << '\n';
  if (!out_) throw Error("run log: write failed");
}

void RunLogWriter::end_epoch() {
  out_.flush();
  if (!out_) throw Error("run log: flush failed");
}

void MemorySink::write_header(const RunHeader& h) {
  if (have_header_) throw OrderingError("header written twice");
  have_header_ = true;
  order_.emplace(h.constraints.epoch_length);
  log_.header = h;
}

void MemorySink::append(const Event& e) {
  if (!have_header_) throw OrderingError("event appended before header");
  order_->accept(e);
  log_.events.push_back(e);
}

RunLogReader::RunLogReader(std::istream& in) : in_(in) {
  std::string line;
  if (!std::getline(in_, line)) throw LogFormatError("empty run log");
  if (in_.eof()) throw RecordError(0, "truncated header", nullptr);
  header_ = decode_header(line);
  offset_ = line.size() + 1;
}

std::optional<Event> RunLogReader::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  const std::size_t at = offset_;
  if (in_.eof()) throw RecordError(at, "truncated record (no line terminator)", nullptr);
  offset_ += line.size() + 1;
  try {
    return decode_event(line);
  } catch (const LogFormatError& e) {
    throw RecordError(at, e.what(), nullptr);
  }
}

RunLog read_runlog(std::istream& in) {
  RunLogReader reader(in);
  RunLog log;
  log.header = reader.header();
  try {
    while (auto e = reader.next()) log.events.push_back(std::move(*e));
  } catch (const RecordError& e) {
    throw RecordError(e.offset(), e.detail(), std::make_shared<RunLog>(std::move(log)));
  }
  return log;
}

RunLog read_runlog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_runlog(in);
}

void write_runlog(std::ostream& out, const RunLog& log) {
  RunLogWriter writer(out);
  writer.write_header(log.header);
  for (const auto& e : log.events) writer.append(e);
  writer.end_epoch();
}

void write_runlog(const std::string& path, const RunLog& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_runlog(out, log);
}

std::vector<std::string> check_input_digests(const RunHeader& h,
                                             const std::map<std::string, std::string>& paths) {
  std::vector<std::string> warnings;
  for (const auto& [role, path] : paths) {
    auto it = h.inputs.find(role);
    if (it == h.inputs.end()) continue;
    const std::string now = sha256_file(path);
    if (now != it->second.sha256) {
      warnings.push_back(role + " file '" + path + "' differs from the one used for this run (sha256 " +
                         now + " vs " + it->second.sha256 + ")");
    }
  }
  return warnings;
}

}  // namespace fairride
