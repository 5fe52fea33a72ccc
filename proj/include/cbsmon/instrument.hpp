#pragma once

#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "clock.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace cbsmon {

// Schedulers are 0-based in memory and 1-based on the wire.
struct event {
  enum class kind { action, update };
  kind type = kind::action;
  int sender = 0;
  int interaction = -1;  // action events
  vclock clock;          // action events
  int component = -1;    // update events
  int state = -1;        // update events, a ready state of component

  bool is_action() const { return type == kind::action; }
  bool operator==(const event&) const = default;

  static event action(int a, vclock c, int j) {
    event e;
    e.type = kind::action;
    e.interaction = a;
    e.clock = std::move(c);
    e.sender = j;
    return e;
  }
  static event update(int i, int q, int j) {
    event e;
    e.type = kind::update;
    e.component = i;
    e.state = q;
    e.sender = j;
    return e;
  }
};

inline std::string format_event(const system_model& sys, const event& e) {
  if (e.is_action())
    return "A " + std::to_string(e.sender + 1) + " " + sys.interaction_name(e.interaction) + " " + to_string(e.clock);
  return "U " + std::to_string(e.sender + 1) + " " + sys.component_name(e.component) + " " +
         sys.state_name(e.component, e.state);
}

inline event parse_event(const system_model& sys, const std::string& line, int line_no = 0) {
  std::istringstream is(line);
  std::string tag, sender, name, last, extra;
  if (!(is >> tag >> sender >> name >> last) || (is >> extra))
    throw parse_error("expected four fields, got '" + line + "'", line_no);
  int j = 0;
  try {
    std::size_t used = 0;
    j = std::stoi(sender, &used) - 1;
    if (used != sender.size()) throw std::invalid_argument(sender);
  } catch (const std::exception&) {
    throw parse_error("bad sender '" + sender + "'", line_no);
  }
  if (j < 0 || j >= sys.m()) throw parse_error("sender " + sender + " out of range", line_no);
  if (tag == "A") {
    int a = sys.interaction_index(name);
    if (a < 0) throw parse_error("unknown interaction '" + name + "'", line_no);
    if (sys.manager(a) != j) throw parse_error("interaction " + name + " is not managed by scheduler " + sender, line_no);
    vclock c;
    std::stringstream cs(last);
    std::string part;
    while (std::getline(cs, part, ',')) {
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error("bad clock '" + last + "'", line_no);
      c.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    }
    if (static_cast<int>(c.size()) != sys.m())
      throw parse_error("clock '" + last + "' has " + std::to_string(c.size()) + " entries, expected " +
                            std::to_string(sys.m()),
                        line_no);
    return event::action(a, std::move(c), j);
  }
  if (tag == "U") {
    int i = sys.component_index(name);
    if (i < 0) throw parse_error("unknown component '" + name + "'", line_no);
    int q = sys.state_index(i, last);
    if (q < 0 || !sys.is_ready(i, q)) throw parse_error("'" + last + "' is not a ready state of " + name, line_no);
    if (!sys.in_scope(j, i)) throw parse_error(name + " is outside the scope of scheduler " + sender, line_no);
    return event::update(i, q, j);
  }
  throw parse_error("unknown event tag '" + tag + "'", line_no);
}

// blank lines and lines starting with '#' are skipped
inline std::vector<event> parse_event_log(const system_model& sys, std::istream& in) {
  std::vector<event> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(parse_event(sys, line, no));
  }
  return out;
}

// ---------------------------------------------------------------------------
// controllers

struct instrumented_state {
  global_state base;
  std::vector<std::vector<bool>> busy;  // [scheduler][component]
  std::vector<vclock> clocks;           // per scheduler
  std::vector<vclock> shared;           // per component, meaningful for shared ones
};

struct controller_options {
  bool drop_busy_updates = false;  // mutation used to show the preservation check can fail
  // every scheduler seeing a shared beta_i leaves the step knowing the clocks
  // of all the others seeing it, before and after their interactions
  bool exchange_on_beta = false;
};

inline instrumented_state initial_instrumented(const system_model& sys) {
  instrumented_state s;
  s.base = initial_state(sys);
  s.busy.assign(sys.m(), std::vector<bool>(sys.n(), false));
  s.clocks.assign(sys.m(), vclock(sys.m(), 0));
  s.shared.assign(sys.n(), vclock(sys.m(), 0));
  return s;
}

// a scheduler takes beta_i either because it recorded i as busy or because
// i is shared and another scheduler started it
inline bool instrumented_enabled(const system_model& sys, const instrumented_state& s, const global_action& ga) {
  if (!try_step(sys, s.base, ga)) return false;
  for (int i : ga.beta)
    for (int j : sys.schedulers_seeing(i))
      if (!s.busy[j][i] && !sys.shared(i)) return false;
  return true;
}

// internal actions are handled before interactions so a shared component's
// clock is pulled before the same scheduler starts something new
inline std::pair<instrumented_state, std::vector<event>> instrumented_step(const system_model& sys,
                                                                           const instrumented_state& s,
                                                                           const global_action& ga,
                                                                           const controller_options& opt = {}) {
  if (!instrumented_enabled(sys, s, ga)) throw not_enabled("global action is not enabled in the instrumented system");
  instrumented_state r = s;
  r.base = step(sys, s.base, ga);
  std::vector<event> out;
  auto exchange = [&](int i) {
    vclock join = r.shared[i];
    for (int j : sys.schedulers_seeing(i)) join = vc_max(join, r.clocks[j]);
    r.shared[i] = join;
    for (int j : sys.schedulers_seeing(i)) r.clocks[j] = join;
  };
  if (opt.exchange_on_beta)
    for (int i : ga.beta)
      if (sys.shared(i)) exchange(i);
  for (int i : ga.beta) {
    for (int j : sys.schedulers_seeing(i)) {
      if (r.busy[j][i]) {
        r.busy[j][i] = false;
        out.push_back(event::update(i, r.base.comps[i], j));
      } else {
        r.clocks[j] = vc_max(r.clocks[j], r.shared[i]);
      }
    }
  }
  for (int a : ga.alpha) {
    int j = sys.manager(a);
    r.clocks[j] = vc_inc(r.clocks[j], static_cast<std::size_t>(j));
    for (int i : sys.involved(a)) {
      if (!opt.drop_busy_updates) r.busy[j][i] = true;
      if (sys.shared(i)) r.shared[i] = vc_max(r.shared[i], r.clocks[j]);
    }
    out.push_back(event::action(a, r.clocks[j], j));
  }
  if (opt.exchange_on_beta)
    for (int i : ga.beta)
      if (sys.shared(i)) exchange(i);
  return {std::move(r), std::move(out)};
}

// all events of a trace, in emission order
inline std::vector<event> trace_events(const system_model& sys, const partial_trace& t, const controller_options& opt = {}) {
  auto s = initial_instrumented(sys);
  std::vector<event> out;
  for (const auto& ga : t.actions) {
    auto [next, ev] = instrumented_step(sys, s, ga, opt);
    s = std::move(next);
    out.insert(out.end(), ev.begin(), ev.end());
  }
  return out;
}

inline std::vector<event> extract_events(const system_model& sys, const partial_trace& t, int j) {
  std::vector<event> out;
  for (auto& e : trace_events(sys, t))
    if (e.sender == j) out.push_back(std::move(e));
  return out;
}

inline std::vector<std::vector<event>> split_by_sender(const system_model& sys, const std::vector<event>& evs) {
  std::vector<std::vector<event>> out(sys.m());
  for (const auto& e : evs) out[e.sender].push_back(e);
  return out;
}

// drives the plain and the instrumented system with one random schedule and
// compares both the enabled sets and the reached base states
inline bool check_trace_preservation(const system_model& sys, std::uint64_t seed, int length,
                                     const controller_options& opt = {}) {
  std::mt19937_64 rng(seed);
  global_state plain = initial_state(sys);
  instrumented_state inst = initial_instrumented(sys);
  for (int k = 0; k < length; ++k) {
    auto en = enabled_global_actions(sys, plain);
    std::vector<global_action> en_inst;
    for (const auto& ga : enabled_global_actions(sys, inst.base))
      if (instrumented_enabled(sys, inst, ga)) en_inst.push_back(ga);
    if (en != en_inst) return false;
    if (en.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, en.size() - 1);
    const auto& ga = en[pick(rng)];
    plain = step(sys, plain, ga);
    inst = instrumented_step(sys, inst, ga, opt).first;
    if (inst.base != plain) return false;
  }
  return true;
}

}  // namespace cbsmon
