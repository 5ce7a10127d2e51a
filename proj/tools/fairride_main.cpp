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

// Command-line front end: simulate, report, validate, serve, compare and a
// grid generator for trying things out.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "fairride/api_service.hpp"
#include "fairride/demand.hpp"
#include "fairride/digest.hpp"
#include "fairride/metrics.hpp"
#include "fairride/road_network.hpp"
#include "fairride/runlog.hpp"
#include "fairride/simulator.hpp"
#include "fairride/validate.hpp"

namespace fr = fairride;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitRuntime = 4;

struct NetworkArgs {
  std::string nodes;
  std::string edges;
  std::string zones;
};

struct SimulateArgs {
  NetworkArgs net;
  std::string requests;
  double synthetic_rate = -1;
  std::optional<std::uint64_t> demand_seed;
  double fare_base = 2.5;
  double fare_per_second = 0.008;
  std::string policy = "rpd";
  std::uint64_t seed = 1;
  std::int64_t taxis = 1000;
  std::int64_t horizon = 1440;
  std::int64_t epoch_length = 60;
  int capacity = 4;
  std::int64_t max_pickup_delay = 300;
  std::int64_t max_detour_delay = 600;
  int max_group_size = 3;
  std::optional<std::int64_t> reward;
  std::int64_t penalty = 1;
};

void add_network_options(CLI::App* cmd, NetworkArgs& a, bool required) {
  auto* n = cmd->add_option("--nodes", a.nodes, "Nodes table (node_id,lat,lon)");
  auto* e = cmd->add_option("--edges", a.edges, "Edges table (from,to,cost_seconds)");
  auto* z = cmd->add_option("--zones", a.zones, "Zones table (node_id,zone_id,zone_name)");
  if (required) {
    n->required();
    e->required();
    z->required();
  }
}

void add_simulation_options(CLI::App* cmd, SimulateArgs& a) {
  add_network_options(cmd, a.net, true);
  auto* req = cmd->add_option("--requests", a.requests,
                              "Requests table (request_id,pickup_node,dropoff_node,arrival_epoch,fare)");
  auto* syn = cmd->add_option("--synthetic-rate", a.synthetic_rate,
                              "Generate Poisson demand with this mean per epoch instead");
  req->excludes(syn);
  cmd->add_option("--demand-seed", a.demand_seed, "Seed of the synthetic demand (default: --seed)");
  cmd->add_option("--fare-base", a.fare_base, "Synthetic fare base")->capture_default_str();
  cmd->add_option("--fare-per-second", a.fare_per_second, "Synthetic fare per direct second")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Run seed (taxi placement)")->capture_default_str();
  cmd->add_option("--taxis", a.taxis, "Fleet size")->capture_default_str();
  cmd->add_option("--horizon", a.horizon, "Epochs to simulate")->capture_default_str();
  cmd->add_option("--epoch-length", a.epoch_length, "Seconds per epoch")->capture_default_str();
  cmd->add_option("--capacity", a.capacity, "Seats per taxi")->capture_default_str();
  cmd->add_option("--max-pickup-delay", a.max_pickup_delay, "Seconds")->capture_default_str();
  cmd->add_option("--max-detour-delay", a.max_detour_delay, "Seconds")->capture_default_str();
  cmd->add_option("--max-group-size", a.max_group_size, "New requests per taxi per epoch")
      ->capture_default_str();
  cmd->add_option("--reward", a.reward, "Reward per match (default: 10 x max detour x penalty)");
  cmd->add_option("--penalty", a.penalty, "Penalty per second of added detour")
      ->capture_default_str();
}

fr::InputFile describe(const std::string& path) { return fr::InputFile{path, fr::sha256_file(path)}; }

struct Prepared {
  fr::RoadNetwork net;
  fr::ZonePartition zones;
  fr::RequestStream demand;
  fr::SimConfig config;
  fr::RunHeader header;
};

Prepared prepare(const SimulateArgs& a) {
  if (a.requests.empty() && a.synthetic_rate < 0) {
    throw CLI::ValidationError("demand", "pass --requests or --synthetic-rate");
  }
  Prepared p{fr::load_network(a.net.nodes, a.net.edges), {}, {}, {}, {}};
  p.zones = fr::load_zones(p.net, a.net.zones);
  p.header.inputs["nodes"] = describe(a.net.nodes);
  p.header.inputs["edges"] = describe(a.net.edges);
  p.header.inputs["zones"] = describe(a.net.zones);
  if (!a.requests.empty()) {
    p.demand = fr::load_requests(a.requests, p.net);
    p.header.inputs["requests"] = describe(a.requests);
    p.header.demand = "file";
  } else {
    fr::SyntheticDemand s;
    s.horizon_epochs = a.horizon;
    s.rate_profile.assign(static_cast<std::size_t>(std::max<std::int64_t>(a.horizon, 0)),
                          a.synthetic_rate);
    s.fares = fr::FareModel{a.fare_base, a.fare_per_second};
    s.seed = a.demand_seed.value_or(a.seed);
    p.demand = fr::generate_synthetic(p.net, s);
    std::ostringstream d;
    d << "synthetic poisson rate=" << a.synthetic_rate << " seed=" << s.seed
      << " fare_base=" << a.fare_base << " fare_per_second=" << a.fare_per_second;
    p.header.demand = d.str();
  }
  fr::SimConfig& c = p.config;
  c.horizon_epochs = a.horizon;
  c.n_taxis = a.taxis;
  c.policy = a.policy;
  c.seed = a.seed;
  c.constraints.capacity = a.capacity;
  c.constraints.max_pickup_delay = a.max_pickup_delay;
  c.constraints.max_detour_delay = a.max_detour_delay;
  c.constraints.epoch_length = a.epoch_length;
  c.constraints.max_group_size = a.max_group_size;
  c.constraints.validate();
  fr::MatchWeights w = fr::MatchWeights::defaults_for(c.constraints);
  w.detour_penalty = a.penalty;
  w.reward_per_match = a.reward.value_or(10 * a.max_detour_delay * a.penalty);
  c.weights = w;
  return p;
}

// Writes the log and indexes it on the way through.
class IndexingSink final : public fr::EventSink {
 public:
  explicit IndexingSink(std::ostream& out) : writer_(out) {}
  void write_header(const fr::RunHeader& h) override {
    writer_.write_header(h);
    builder_.emplace(h);
  }
  void append(const fr::Event& e) override {
    writer_.append(e);
    builder_->accept(e);
  }
  void end_epoch() override { writer_.end_epoch(); }
  fr::LogIndex index() { return std::move(*builder_).finish(); }

 private:
  fr::RunLogWriter writer_;
  std::optional<fr::LogIndex::Builder> builder_;
};

struct RunResult {
  fr::RunStats stats;
  fr::LogIndex index;
};

RunResult run_to_file(const Prepared& p, const std::string& policy_name, const std::string& out) {
  std::ofstream file(out, std::ios::binary);
  if (!file) throw fr::InputError("cannot write '" + out + "'");
  auto policy = fr::make_policy(policy_name, p.config.weights);
  fr::SimConfig config = p.config;
  config.policy = policy_name;
  IndexingSink sink(file);
  fr::RunStats stats = fr::simulate(config, p.net, p.demand, *policy, sink, p.header);
  file.close();
  if (!file) throw fr::Error("failed writing '" + out + "'");
  return RunResult{stats, sink.index()};
}

std::string summary_line(const std::string& label, const RunResult& r, const fr::ZonePartition& z) {
  const auto zf = fr::zonal_fairness(r.index, z, fr::Window::whole_day(r.index.horizon()));
  std::ostringstream s;
  s << label << "arrived=" << r.stats.arrivals << " matched=" << r.stats.matched
    << " unmatched=" << r.stats.unmatched << " pending=" << r.stats.pending_at_horizon
    << " completed=" << r.stats.completed << " zonal_fairness=";
  if (zf) {
    s << zf->ratio.value();
  } else {
    s << "undefined";
  }
  return s.str();
}

std::string input_path(const std::string& given, const fr::RunHeader& h, const char* role) {
  if (!given.empty()) return given;
  auto it = h.inputs.find(role);
  if (it == h.inputs.end() || it->second.path.empty()) {
    throw fr::InputError(std::string("the log records no ") + role + " file; pass --" + role);
  }
  return it->second.path;
}

void warn_digests(const fr::RunHeader& h, const NetworkArgs& paths) {
  std::map<std::string, std::string> files{{"nodes", paths.nodes}, {"edges", paths.edges}};
  if (!paths.zones.empty()) files["zones"] = paths.zones;
  for (const auto& w : fr::check_input_digests(h, files)) std::cerr << "warning: " << w << "\n";
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw fr::InputError("cannot write '" + out + "'");
  f << text;
}

void generate_grid(int rows, int cols, std::int64_t cost, int zone_rows, int zone_cols,
                   const std::string& prefix) {
  std::ofstream nodes(prefix + "nodes.csv");
  std::ofstream edges(prefix + "edges.csv");
  std::ofstream zones(prefix + "zones.csv");
  if (!nodes || !edges || !zones) throw fr::InputError("cannot write grid files at '" + prefix + "'");
  nodes << "node_id,lat,lon\n";
  edges << "from,to,cost_seconds\n";
  zones << "node_id,zone_id,zone_name\n";
  auto id = [&](int r, int c) { return r * cols + c + 1; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      nodes << id(r, c) << ',' << 40.70 + 0.002 * r << ',' << -74.02 + 0.002 * c << '\n';
      const int zr = r * zone_rows / rows;
      const int zc = c * zone_cols / cols;
      const int zone = zr * zone_cols + zc + 1;
      zones << id(r, c) << ',' << zone << ",zone-" << zone << '\n';
      if (c + 1 < cols) {
        edges << id(r, c) << ',' << id(r, c + 1) << ',' << cost << '\n';
        edges << id(r, c + 1) << ',' << id(r, c) << ',' << cost << '\n';
      }
      if (r + 1 < rows) {
        edges << id(r, c) << ',' << id(r + 1, c) << ',' << cost << '\n';
        edges << id(r + 1, c) << ',' << id(r, c) << ',' << cost << '\n';
      }
    }
  }
}

int cmd_simulate(const SimulateArgs& args, const std::string& out) {
  const Prepared p = prepare(args);
  const RunResult r = run_to_file(p, args.policy, out);
  std::cout << summary_line("", r, p.zones) << "\n";
  return kExitOk;
}

int cmd_compare(const SimulateArgs& args, const std::vector<std::string>& policies,
                const std::string& dir) {
  const Prepared p = prepare(args);
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json joined;
  joined["format"] = std::string(fr::kReportFormat);
  joined["comparison"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const std::string label = std::to_string(i + 1) + "-" + policies[i];
    const auto base = std::filesystem::path(dir) / label;
    const RunResult r = run_to_file(p, policies[i], base.string() + ".log");
    std::cout << summary_line(label + ": ", r, p.zones) << "\n";
    const std::string rep = fr::render_report(r.index, fr::numeric_dashboard(r.index, p.zones));
    write_text(base.string() + ".report.json", rep);
    joined["comparison"].push_back(nlohmann::ordered_json::parse(rep));
  }
  write_text((std::filesystem::path(dir) / "comparison.json").string(), joined.dump(2) + "\n");
  return kExitOk;
}

// Streams a log through `visit`, returning its header.
template <class F>
fr::RunHeader stream_log(const std::string& path, F&& visit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fr::InputError("cannot open '" + path + "'");
  fr::RunLogReader reader(in);
  visit(reader.header(), std::optional<fr::Event>{});
  while (auto e = reader.next()) visit(reader.header(), e);
  return reader.header();
}

NetworkArgs resolve_inputs(const NetworkArgs& given, const fr::RunHeader& h, bool zones) {
  NetworkArgs out;
  out.nodes = input_path(given.nodes, h, "nodes");
  out.edges = input_path(given.edges, h, "edges");
  if (zones) out.zones = input_path(given.zones, h, "zones");
  return out;
}

int cmd_report(const std::string& log, const NetworkArgs& given, const std::string& out) {
  std::optional<fr::LogIndex::Builder> builder;
  const fr::RunHeader h = stream_log(log, [&](const fr::RunHeader& header, const auto& e) {
    if (!builder) builder.emplace(header);
    if (e) builder->accept(*e);
  });
  const NetworkArgs paths = resolve_inputs(given, h, true);
  warn_digests(h, paths);
  const fr::RoadNetwork net = fr::load_network(paths.nodes, paths.edges);
  const fr::ZonePartition zones = fr::load_zones(net, paths.zones);
  const fr::LogIndex index = std::move(*builder).finish();
  write_text(out, fr::render_report(index, fr::numeric_dashboard(index, zones)));
  return kExitOk;
}

int cmd_validate(const std::string& log, const NetworkArgs& given) {
  fr::RunHeader h;
  {
    std::ifstream in(log, std::ios::binary);
    if (!in) throw fr::InputError("cannot open '" + log + "'");
    h = fr::RunLogReader(in).header();
  }
  const NetworkArgs paths = resolve_inputs(given, h, false);
  warn_digests(h, paths);
  const fr::RoadNetwork net = fr::load_network(paths.nodes, paths.edges);
  fr::RunLogValidator validator(net, h.constraints);
  stream_log(log, [&](const fr::RunHeader&, const auto& e) {
    if (e) validator.accept(*e);
  });
  const fr::ValidationReport report = std::move(validator).finish();
  for (const auto& v : report.violations) {
    std::cout << "event " << v.event_index << ": " << fr::to_string(v.kind) << ": " << v.message
              << "\n";
  }
  std::cout << report.events << " events, " << report.violations.size() << " violation(s)\n";
  return report.clean() ? kExitOk : kExitInput;
}

int cmd_serve(const std::vector<std::string>& runs, const NetworkArgs& given,
              const std::string& host, int port) {
  fr::RunRegistry registry;
  for (const auto& path : runs) {
    const std::string id = registry.add_file(path, fr::RunInputs{given.nodes, given.edges, given.zones});
    for (const auto& w : registry.find(id)->warnings) std::cerr << "warning: " << id << ": " << w << "\n";
    std::cerr << "registered run '" << id << "'\n";
  }
  fr::ApiService api(registry);
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  fr::serve(api, host, port);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairride: ride-sharing simulation and fairness analytics"};
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");
  app.require_subcommand(1);

  SimulateArgs sim;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run one policy and write its event log");
  add_simulation_options(simulate, sim);
  simulate->add_option("--policy", sim.policy, "Matching policy")
      ->check(CLI::IsMember({"rpd", "greedy"}))
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "Event log to write")->required();

  SimulateArgs cmp;
  std::string cmp_dir;
  std::vector<std::string> cmp_policies{"rpd", "greedy"};
  auto* compare = app.add_subcommand("compare", "Run two policies on identical inputs");
  add_simulation_options(compare, cmp);
  compare->add_option("--policies", cmp_policies, "Two policies")
      ->expected(2)
      ->check(CLI::IsMember({"rpd", "greedy"}))
      ->delimiter(',');
  compare->add_option("--out-dir", cmp_dir, "Directory for both logs and the joined report")
      ->required();

  std::string report_log;
  std::string report_out;
  NetworkArgs report_net;
  auto* report = app.add_subcommand("report", "Write the fairride-report/1 dashboard of a run");
  report->add_option("--log", report_log, "Event log")->required();
  add_network_options(report, report_net, false);
  report->add_option("--out", report_out, "Report file (default: stdout)");

  std::string validate_log;
  NetworkArgs validate_net;
  auto* validate = app.add_subcommand("validate", "Check a run log; exit 0 iff it is clean");
  validate->add_option("--log", validate_log, "Event log")->required();
  add_network_options(validate, validate_net, false);

  std::vector<std::string> serve_runs;
  int serve_port = 8080;
  std::string serve_host = "127.0.0.1";
  NetworkArgs serve_net;
  auto* serve = app.add_subcommand("serve", "Serve run aggregates over HTTP");
  serve->add_option("--runs", serve_runs, "Event logs to register")->required();
  serve->add_option("--port", serve_port, "TCP port")->capture_default_str();
  serve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  add_network_options(serve, serve_net, false);

  int grid_rows = 10;
  int grid_cols = 10;
  std::int64_t grid_cost = 60;
  int grid_zone_rows = 2;
  int grid_zone_cols = 2;
  std::string grid_prefix;
  auto* grid = app.add_subcommand("gen-grid", "Write nodes/edges/zones tables of a grid city");
  grid->add_option("--rows", grid_rows)->capture_default_str();
  grid->add_option("--cols", grid_cols)->capture_default_str();
  grid->add_option("--cost", grid_cost, "Seconds per edge")->capture_default_str();
  grid->add_option("--zone-rows", grid_zone_rows)->capture_default_str();
  grid->add_option("--zone-cols", grid_zone_cols)->capture_default_str();
  grid->add_option("--prefix", grid_prefix, "Output path prefix, e.g. data/city-")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, sim_out);
    if (compare->parsed()) return cmd_compare(cmp, cmp_policies, cmp_dir);
    if (report->parsed()) return cmd_report(report_log, report_net, report_out);
    if (validate->parsed()) return cmd_validate(validate_log, validate_net);
    if (serve->parsed()) return cmd_serve(serve_runs, serve_net, serve_host, serve_port);
    if (grid->parsed()) {
      generate_grid(grid_rows, grid_cols, grid_cost, grid_zone_rows, grid_zone_cols, grid_prefix);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fr::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
