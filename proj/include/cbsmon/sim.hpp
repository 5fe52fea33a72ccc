#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "builtin.hpp"
#include "errors.hpp"
#include "instrument.hpp"
#include "lattice.hpp"
#include "model.hpp"

namespace cbsmon {

enum class policy_kind { eager_roundrobin, random, scripted };
enum class delivery_kind { roundrobin, random, emission, scripted };

struct scenario {
  policy_kind policy = policy_kind::eager_roundrobin;
  std::vector<global_action> script;  // scripted policy
  delivery_kind delivery = delivery_kind::roundrobin;
  std::vector<int> delivery_order;    // scripted delivery: 0-based sender of each event
  std::uint64_t seed = 0;
  long steps = -1;                    // -1: the whole script, or until nothing is enabled
  controller_options controller;
  lattice_options monitor;
};

struct run_result {
  partial_trace trace;
  std::vector<event> emitted;    // in emission order
  std::vector<event> delivered;  // in observer order
  std::size_t max_live = 0;      // largest live node count after any event
};

// ---------------------------------------------------------------------------
// action selection

class eager_roundrobin {
 public:
  explicit eager_roundrobin(const system_model& sys) : sys_(sys) {}

  // interactions first, one per scheduler in rotating order; internal
  // actions on the following step
  std::optional<global_action> next(const global_state& g) {
    for (int tries = 0; tries < 2; ++tries) {
      global_action ga;
      if (phase_a_) {
        for (int r = 0; r < sys_.m(); ++r) {
          int j = (rot_ + r) % sys_.m();
          for (int a : sys_.managed_by(j)) {
            auto cand = ga;
            cand.alpha.push_back(a);
            std::sort(cand.alpha.begin(), cand.alpha.end());
            if (try_step(sys_, g, cand)) {
              ga = std::move(cand);
              break;
            }
          }
        }
        if (!ga.empty()) rot_ = (rot_ + 1) % sys_.m();
      } else {
        for (int i = 0; i < sys_.n(); ++i) {
          auto cand = ga;
          cand.beta.push_back(i);
          if (try_step(sys_, g, cand)) ga = std::move(cand);
        }
      }
      phase_a_ = !phase_a_;
      if (!ga.empty()) return ga;
    }
    return std::nullopt;
  }

 private:
  const system_model& sys_;
  bool phase_a_ = true;
  int rot_ = 0;
};

// ---------------------------------------------------------------------------
// delivery

inline std::vector<event> deliver(const system_model& sys, const std::vector<event>& emitted, delivery_kind kind,
                                  std::uint64_t seed, const std::vector<int>& order = {}) {
  if (kind == delivery_kind::emission) return emitted;
  auto streams = split_by_sender(sys, emitted);
  std::vector<std::size_t> pos(sys.m(), 0);
  std::vector<event> out;
  out.reserve(emitted.size());
  if (kind == delivery_kind::scripted) {
    if (order.size() != emitted.size())
      throw parse_error("delivery order has " + std::to_string(order.size()) + " entries for " +
                        std::to_string(emitted.size()) + " events");
    for (int j : order) {
      if (j < 0 || j >= sys.m() || pos[j] >= streams[j].size())
        throw parse_error("delivery order takes more events from scheduler " + std::to_string(j + 1) + " than it sent");
      out.push_back(streams[j][pos[j]++]);
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  int rr = 0;
  while (out.size() < emitted.size()) {
    int j;
    if (kind == delivery_kind::roundrobin) {
      while (pos[rr] >= streams[rr].size()) rr = (rr + 1) % sys.m();
      j = rr;
      rr = (rr + 1) % sys.m();
    } else {
      std::vector<int> open;
      for (int k = 0; k < sys.m(); ++k)
        if (pos[k] < streams[k].size()) open.push_back(k);
      j = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    }
    out.push_back(streams[j][pos[j]++]);
  }
  return out;
}

inline big interleaving_count(const std::vector<std::vector<event>>& streams) {
  big num = 1;
  std::size_t total = 0;
  for (const auto& s : streams)
    for (std::size_t k = 1; k <= s.size(); ++k) {
      ++total;
      num *= total;
      num /= k;
    }
  return num;
}

// every merge of the streams keeping each stream's order, exactly once
inline void enumerate_deliveries(const std::vector<std::vector<event>>& streams, std::uint64_t bound,
                                 const std::function<void(const std::vector<event>&)>& visit) {
  big n = interleaving_count(streams);
  if (n > bound) throw budget_exceeded(n.str() + " interleavings exceed the bound " + std::to_string(bound));
  std::vector<std::size_t> pos(streams.size(), 0);
  std::vector<event> cur;
  std::size_t total = 0;
  for (const auto& s : streams) total += s.size();
  std::function<void()> rec = [&]() {
    if (cur.size() == total) {
      visit(cur);
      return;
    }
    for (std::size_t j = 0; j < streams.size(); ++j) {
      if (pos[j] >= streams[j].size()) continue;
      cur.push_back(streams[j][pos[j]++]);
      rec();
      --pos[j];
      cur.pop_back();
    }
  };
  rec();
}

// ---------------------------------------------------------------------------
// running

// executes the policy on the instrumented system and returns the trace and
// its events, without an observer
inline run_result execute(const system_model& sys, const scenario& sc) {
  run_result r;
  auto st = initial_instrumented(sys);
  r.trace.states.push_back(st.base.comps);
  eager_roundrobin eager(sys);
  std::mt19937_64 rng(sc.seed);
  long limit = sc.steps;
  if (limit < 0) limit = sc.policy == policy_kind::scripted ? static_cast<long>(sc.script.size()) : 1000;
  for (long k = 0; k < limit; ++k) {
    std::optional<global_action> ga;
    if (sc.policy == policy_kind::scripted) {
      if (k >= static_cast<long>(sc.script.size())) break;
      ga = sc.script[k];
      if (!instrumented_enabled(sys, st, *ga))
        throw not_enabled("script step " + std::to_string(k + 1) + " " + action_string(sys, *ga) + " is not enabled");
    } else if (sc.policy == policy_kind::eager_roundrobin) {
      ga = eager.next(st.base);
    } else {
      auto en = enabled_global_actions(sys, st.base);
      if (!en.empty()) ga = en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
    }
    if (!ga) break;
    auto [next, ev] = instrumented_step(sys, st, *ga, sc.controller);
    st = std::move(next);
    r.trace.actions.push_back(*ga);
    r.trace.states.push_back(st.base.comps);
    r.emitted.insert(r.emitted.end(), ev.begin(), ev.end());
  }
  r.delivered = deliver(sys, r.emitted, sc.delivery, sc.seed, sc.delivery_order);
  return r;
}

// feeds an event sequence into a fresh lattice
inline lattice observe(const system_model& sys, const std::vector<event>& evs, const lattice_options& opt,
                       std::size_t* max_live = nullptr) {
  lattice L(sys, opt);
  if (max_live) *max_live = L.nodes().size();
  for (const auto& e : evs) {
    L.feed(e);
    if (max_live && L.nodes().size() > *max_live) *max_live = L.nodes().size();
  }
  return L;
}

struct scenario_output {
  run_result run;
  lattice lat;
};

inline scenario_output run_scenario(const system_model& sys, const scenario& sc) {
  auto r = execute(sys, sc);
  std::size_t max_live = 0;
  auto L = observe(sys, r.delivered, sc.monitor, &max_live);
  r.max_live = max_live;
  return {std::move(r), std::move(L)};
}

}  // namespace cbsmon
