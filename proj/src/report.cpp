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

#include <cmath>

#include "fairride/metrics.hpp"
#include "report_json.hpp"

namespace fairride {

json number_json(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

json summary_json(const DistributionSummary& s) {
  json j;
  j["count"] = s.count;
  if (s.values) {
    const auto& v = *s.values;
    j["min"] = number_json(v.min);
    j["p10"] = number_json(v.p10);
    j["p25"] = number_json(v.p25);
    j["median"] = number_json(v.median);
    j["p75"] = number_json(v.p75);
    j["p90"] = number_json(v.p90);
    j["max"] = number_json(v.max);
    j["mean"] = number_json(v.mean);
  }
  return j;
}

json fairness_json(const std::optional<FairnessValue>& f) {
  json j = json::object();
  if (f) {
    j["value"] = number_json(f->ratio.value());
    j["matched"] = f->ratio.num;
    j["incoming"] = f->ratio.den;
    j["pickup_zone"] = f->pair.first;
    j["dropoff_zone"] = f->pair.second;
  }
  return j;
}

json run_json(const RunHeader& h) {
  json j;
  j["policy"] = h.policy;
  j["seed"] = h.seed;
  j["horizon_epochs"] = h.horizon_epochs;
  j["epoch_length_s"] = h.constraints.epoch_length;
  j["n_taxis"] = h.n_taxis;
  return j;
}

std::string render_report(const LogIndex& index, const Dashboard& d) {
  json j;
  j["format"] = std::string(kReportFormat);
  j["run"] = run_json(index.header());
  json req;
  req["arrived"] = d.requests.total;
  req["matched"] = d.requests.matched;
  req["unmatched"] = d.requests.unmatched;
  req["pending_at_horizon"] = d.requests.pending;
  req["completed"] = d.total_completed;
  j["requests"] = req;
  j["completed_per_driver"] = summary_json(d.completed_per_driver);
  j["total_completed"] = d.total_completed;
  j["acceptance_ratio_per_epoch"] = summary_json(d.acceptance_per_epoch);
  j["interzone_acceptance_ratio"] = summary_json(d.interzone_acceptance);
  j["pickup_delay_s"] = summary_json(d.pickup_delay);
  j["detour_delay_s"] = summary_json(d.detour_delay);
  j["zonal_fairness_day"] = fairness_json(d.zonal_fairness_day);
  return j.dump(2) + "\n";
}

}  // namespace fairride
