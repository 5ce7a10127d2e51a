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

#include "fairride/metrics.hpp"
#include "json.hpp"

namespace fairride {

using json = nlohmann::ordered_json;

json summary_json(const DistributionSummary& s);
json fairness_json(const std::optional<FairnessValue>& f);
json run_json(const RunHeader& h);
// Number rendered as an integer when it has no fractional part.
json number_json(double v);

}  // namespace fairride
