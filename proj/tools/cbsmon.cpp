// cbsmon: replay, simulate and path listing over the lattice monitor

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cbsmon/config.hpp"
#include "cbsmon/lattice.hpp"
#include "cbsmon/report.hpp"
#include "cbsmon/sim.hpp"

using namespace cbsmon;

namespace {

constexpr int exit_ok = 0, exit_false = 1, exit_error = 2, exit_budget = 3;

int verdict(const lattice_report& r) { return r.formulas_false > 0 ? exit_false : exit_ok; }

void print(const lattice_report& r, report_format f) {
  if (f == report_format::kv) write_kv(std::cout, r);
  else write_text(std::cout, r);
}

report_format pick_format(const config& c, const std::string& flag) {
  if (flag == "kv") return report_format::kv;
  if (flag == "text") return report_format::text;
  return c.format;
}

// streams events into the lattice one line at a time
void feed_stream(const system_model& sys, std::istream& in, lattice& L) {
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    L.feed(parse_event(sys, line, no));
  }
}

template <class Fn>
void with_events(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cin);
    return;
  }
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  fn(in);
}

int cmd_replay(const std::string& cfg_path, const std::string& events, bool no_prune, const std::string& fmt) {
  auto cfg = load_config(cfg_path);
  system_model sys(cfg.spec);
  lattice_options opt;
  opt.pruning = cfg.pruning && !no_prune;
  opt.rule = cfg.rule;
  opt.phi = config_property(sys, cfg);
  lattice L(sys, opt);
  with_events(events, [&](std::istream& in) { feed_stream(sys, in, L); });
  auto r = L.report();
  print(r, pick_format(cfg, fmt));
  return verdict(r);
}

int cmd_simulate(const std::string& cfg_path, std::optional<std::uint64_t> seed, const std::string& emit,
                 const std::string& fmt) {
  auto cfg = load_config(cfg_path);
  if (seed) cfg.seed = *seed;
  system_model sys(cfg.spec);
  auto sc = config_scenario(sys, cfg);
  auto out = run_scenario(sys, sc);
  if (!emit.empty()) {
    std::ofstream os(emit);
    if (!os) throw parse_error("cannot write " + emit);
    for (const auto& e : out.run.delivered) os << format_event(sys, e) << "\n";
  }
  auto r = out.lat.report();
  print(r, pick_format(cfg, fmt));
  return verdict(r);
}

int cmd_paths(const std::string& cfg_path, const std::string& events, std::uint64_t max) {
  auto cfg = load_config(cfg_path);
  system_model sys(cfg.spec);
  lattice_options opt;
  opt.pruning = false;
  lattice L(sys, opt);
  with_events(events, [&](std::istream& in) { feed_stream(sys, in, L); });
  auto ps = L.paths(max);
  for (const auto& p : ps) std::cout << path_string(L, p) << "\n";
  std::cout << ps.size() << " paths\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice monitor for component-based systems"};
  app.require_subcommand(1);

  std::string cfg, events = "-", fmt, emit;
  bool no_prune = false;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_paths = 1000000;

  auto* replay = app.add_subcommand("replay", "feed an event log to the monitor");
  replay->add_option("--config", cfg, "config file")->required();
  replay->add_option("--events", events, "event log, - for stdin");
  replay->add_flag("--no-prune", no_prune, "keep dominated nodes");
  replay->add_option("--report", fmt, "text or kv")->check(CLI::IsMember({"text", "kv"}));

  auto* sim = app.add_subcommand("simulate", "run a scenario and monitor it");
  sim->add_option("--config", cfg, "config file")->required();
  sim->add_option("--seed", seed, "overrides [run] seed");
  sim->add_option("--emit-events", emit, "write the delivered events here");
  sim->add_option("--report", fmt, "text or kv")->check(CLI::IsMember({"text", "kv"}));

  auto* paths = app.add_subcommand("paths", "list the paths of the unpruned lattice");
  paths->add_option("--config", cfg, "config file")->required();
  paths->add_option("--events", events, "event log, - for stdin")->required();
  paths->add_option("--max", max_paths, "path budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_error;
  }

  try {
    if (*replay) return cmd_replay(cfg, events, no_prune, fmt);
    if (*sim) return cmd_simulate(cfg, seed, emit, fmt);
    return cmd_paths(cfg, events, max_paths);
  } catch (const budget_exceeded& e) {
    std::cerr << "cbsmon: " << e.what() << "\n";
    return exit_budget;
  } catch (const std::exception& e) {
    std::cerr << "cbsmon: " << e.what() << "\n";
    return exit_error;
  }
}
