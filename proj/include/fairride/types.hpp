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
#include <stdexcept>
#include <string>

namespace fairride {

using NodeId = std::int64_t;
using ZoneId = std::int64_t;
using RequestId = std::int64_t;
using TaxiId = std::int64_t;
using Epoch = std::int64_t;
// All clock values and travel costs are whole seconds.
using Seconds = std::int64_t;
// Fares are held in integer cents so revenue sums are exact.
using Cents = std::int64_t;

// Base of every error the library raises. The category maps onto the CLI
// exit-code contract (see tools/fairride_main.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

// A parse/validation error tied to a row of a tabular source.
class RowError : public InputError {
 public:
  RowError(std::string source, std::size_t row, const std::string& what)
      : InputError(source + ":" + std::to_string(row) + ": " + what),
        source_(std::move(source)),
        row_(row) {}

  const std::string& source() const { return source_; }
  // 1-based line number, the header being line 1.
  std::size_t row() const { return row_; }

 private:
  std::string source_;
  std::size_t row_;
};

// A matching policy produced an assignment that violates the constraints.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairride
