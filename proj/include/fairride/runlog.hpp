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
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "fairride/demand.hpp"
#include "fairride/fleet.hpp"
#include "fairride/matching.hpp"
#include "fairride/types.hpp"

namespace fairride {

inline constexpr std::string_view kLogFormat = "fairride-log/1";

// Line-delimited JSON event log of one simulated day. The first line is the
// header; every following line is one event. Events are grouped in epoch
// blocks; inside block e the order is
//   position (by taxi) < request_arrived (by request) < matched (by taxi,
//   request) < pickup/dropoff (by time, taxi, plan order) < unmatched_final
// so timestamps never decrease across the file. Stops reached exactly at the
// end of epoch e carry t = (e+1)*epoch_length but belong to block e.

struct PositionEvent {
  Epoch epoch = 0;
  TaxiId taxi_id = 0;
  TaxiPosition position;
  int n_onboard = 0;
  friend bool operator==(const PositionEvent&, const PositionEvent&) = default;
};

struct ArrivalEvent {
  Request request;  // epoch is request.arrival_epoch
  Seconds direct_time = 0;
  friend bool operator==(const ArrivalEvent&, const ArrivalEvent&) = default;
};

struct MatchedEvent {
  Epoch epoch = 0;
  RequestId request_id = 0;
  TaxiId taxi_id = 0;
  friend bool operator==(const MatchedEvent&, const MatchedEvent&) = default;
};

struct PickupEvent {
  Epoch epoch = 0;
  Seconds t = 0;
  RequestId request_id = 0;
  TaxiId taxi_id = 0;
  friend bool operator==(const PickupEvent&, const PickupEvent&) = default;
};

struct DropoffEvent {
  Epoch epoch = 0;
  Seconds t = 0;
  RequestId request_id = 0;
  TaxiId taxi_id = 0;
  friend bool operator==(const DropoffEvent&, const DropoffEvent&) = default;
};

struct UnmatchedEvent {
  Epoch epoch = 0;
  RequestId request_id = 0;
  friend bool operator==(const UnmatchedEvent&, const UnmatchedEvent&) = default;
};

using Event = std::variant<PositionEvent, ArrivalEvent, MatchedEvent, PickupEvent, DropoffEvent,
                           UnmatchedEvent>;

Epoch epoch_of(const Event& e);
// Absolute timestamp in seconds.
Seconds time_of(const Event& e, Seconds epoch_length);
const char* type_name(const Event& e);

struct InputFile {
  std::string path;
  std::string sha256;
  friend bool operator==(const InputFile&, const InputFile&) = default;
};

struct RunHeader {
  std::string format{kLogFormat};
  std::string policy;
  std::uint64_t seed = 0;
  Epoch horizon_epochs = 0;
  std::int64_t n_taxis = 0;
  std::string placement;  // "uniform" or "explicit"
  Constraints constraints;
  MatchWeights weights;
  std::string demand;  // free-form description of the demand source
  // Keyed by role: nodes, edges, zones, requests.
  std::map<std::string, InputFile> inputs;

  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

struct RunLog {
  RunHeader header;
  std::vector<Event> events;
};

// Errors raised while reading or writing logs.
class LogFormatError : public InputError {
 public:
  using InputError::InputError;
};

class VersionError : public LogFormatError {
 public:
  using LogFormatError::LogFormatError;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

// A record that is cut short or does not parse. Events decoded before it
// remain available through partial().
class RecordError : public LogFormatError {
 public:
  RecordError(std::size_t offset, std::string detail, std::shared_ptr<const RunLog> partial)
      : LogFormatError("byte offset " + std::to_string(offset) + ": " + detail),
        offset_(offset),
        detail_(std::move(detail)),
        partial_(std::move(partial)) {}
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }
  const RunLog* partial() const { return partial_.get(); }

 private:
  std::size_t offset_;
  std::string detail_;
  std::shared_ptr<const RunLog> partial_;
};

std::string encode_header(const RunHeader& h);
std::string encode_event(const Event& e);
RunHeader decode_header(std::string_view line);
Event decode_event(std::string_view line);

// Enforces the canonical event order. Stop events with equal (t, taxi) are
// accepted in arrival order, which the writer takes as plan order.
class OrderingChecker {
 public:
  explicit OrderingChecker(Seconds epoch_length) : epoch_length_(epoch_length) {}
  // Throws OrderingError if `e` may not follow the previously accepted event.
  void accept(const Event& e);

 private:
  using Key = std::tuple<Epoch, int, Seconds, std::int64_t, std::int64_t>;
  Key key_of(const Event& e) const;

  Seconds epoch_length_;
  std::optional<Key> last_;
};

// Receives a run's header followed by its events.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void write_header(const RunHeader& h) = 0;
  virtual void append(const Event& e) = 0;
  // Called after each completed epoch block.
  virtual void end_epoch() {}
};

// Appends to a text stream, flushing at every epoch boundary so readers can
// tail a running simulation.
class RunLogWriter final : public EventSink {
 public:
  explicit RunLogWriter(std::ostream& out) : out_(out) {}
  void write_header(const RunHeader& h) override;
  void append(const Event& e) override;
  void end_epoch() override;

 private:
  std::ostream& out_;
  std::optional<OrderingChecker> order_;
};

class MemorySink final : public EventSink {
 public:
  void write_header(const RunHeader& h) override;
  void append(const Event& e) override;
  const RunLog& log() const { return log_; }
  RunLog take() { return std::move(log_); }

 private:
  RunLog log_;
  std::optional<OrderingChecker> order_;
  bool have_header_ = false;
};

// Streaming reader: the header is decoded on construction, events on demand.
class RunLogReader {
 public:
  explicit RunLogReader(std::istream& in);
  const RunHeader& header() const { return header_; }
  // nullopt at a clean end of input; RecordError on a damaged record.
  std::optional<Event> next();

 private:
  std::istream& in_;
  RunHeader header_;
  std::size_t offset_ = 0;
};

RunLog read_runlog(std::istream& in);
RunLog read_runlog(const std::string& path);
void write_runlog(std::ostream& out, const RunLog& log);
void write_runlog(const std::string& path, const RunLog& log);

// Warnings for inputs whose current file digest differs from the header.
std::vector<std::string> check_input_digests(const RunHeader& h,
                                             const std::map<std::string, std::string>& paths);

}  // namespace fairride
