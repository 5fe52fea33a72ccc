#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clock.hpp"
#include "errors.hpp"
#include "instrument.hpp"
#include "model.hpp"
#include "progression.hpp"

namespace cbsmon {

struct lnode {
  vclock clock;
  lstate state;
  bag sigma;
  big paths = 0;  // paths from the origin reaching this node
};

// a node may move from a state to a successor
inline std::optional<lnode> extend_node(const system_model& sys, const lnode& n, const event& e) {
  if (!e.is_action() || e.clock.size() != n.clock.size()) return std::nullopt;
  for (std::size_t j = 0; j < n.clock.size(); ++j) {
    auto want = n.clock[j] + (static_cast<int>(j) == e.sender ? 1u : 0u);
    if (e.clock[j] != want) return std::nullopt;
  }
  lnode r;
  r.clock = e.clock;
  r.state = n.state;
  for (int i : sys.involved(e.interaction)) r.state[i] = busy_slot(e.sender);
  return r;
}

inline lnode update_node(const lnode& n, const event& e) {
  lnode r = n;
  if (!e.is_action() && r.state[e.component] == busy_slot(e.sender)) r.state[e.component] = ready_slot(e.state);
  return r;
}

// slot i of the joint comes from whichever side moved it away from the meet
inline lnode joint_node(const lnode& a, const lnode& b, const lnode& meet) {
  lnode r;
  r.clock = vc_max(a.clock, b.clock);
  r.state = a.state;
  for (std::size_t i = 0; i < r.state.size(); ++i)
    if (a.state[i] == meet.state[i]) r.state[i] = b.state[i];
  return r;
}

enum class prune_rule { single, per_coordinate };

struct lattice_options {
  bool pruning = true;
  prune_rule rule = prune_rule::single;
  std::optional<formula> phi;  // monitoring is off without a property
};

struct path_step {
  std::vector<int> label;  // interactions, one per advancing scheduler
  vclock to;
};
struct lattice_path {
  vclock origin;
  std::vector<path_step> steps;
};

struct lattice_report {
  std::uint64_t observed_events = 0, live_nodes = 0, removed_nodes = 0, created_nodes = 0;
  vclock frontier_clock;
  big path_count = 0;
  big formulas_false = 0, formulas_open = 0, formulas_true = 0;
  std::vector<std::pair<std::string, big>> frontier_formulas;
};

class lattice {
 public:
  lattice(const system_model& sys, lattice_options opt = {}) : sys_(&sys), opt_(std::move(opt)), action_of_(sys.m()) {
    lnode init;
    init.clock.assign(sys.m(), 0);
    auto g = initial_state(sys);
    for (int i = 0; i < sys.n(); ++i) init.state.push_back(ready_slot(g.comps[i]));
    init.paths = 1;
    if (opt_.phi) init.sigma = bag(*opt_.phi);
    created_.insert(init.clock);
    live_.emplace(init.clock, std::move(init));
  }

  void feed(const event& e) {
    ++observed_;
    if (!make(e, queue_.size())) queue_.push_back(e);
    else check_queue();
  }

  const system_model& sys() const { return *sys_; }
  const lattice_options& options() const { return opt_; }
  const std::map<vclock, lnode>& nodes() const { return live_; }
  const lnode* find(const vclock& c) const {
    auto it = live_.find(c);
    return it == live_.end() ? nullptr : &it->second;
  }
  const std::deque<event>& queue() const { return queue_; }
  std::uint64_t observed() const { return observed_; }
  std::uint64_t created() const { return created_.size(); }
  std::uint64_t removed() const { return removed_; }
  bool ever_created(const vclock& c) const { return created_.count(c) > 0; }
  // interaction behind the c-th event of scheduler j (c >= 1), -1 if unknown
  int action_of(int j, std::uint32_t c) const {
    const auto& v = action_of_[j];
    return c >= 1 && c <= v.size() ? v[c - 1] : -1;
  }

  const lnode& frontier() const {
    vclock top(sys_->m(), 0);
    for (const auto& [c, n] : live_) top = vc_max(top, c);
    auto it = live_.find(top);
    if (it == live_.end()) throw protocol_violation("no node with the componentwise maximal clock");
    return it->second;
  }

  // the live node below every other live node, or the one with the smallest clock sum
  const lnode& origin() const {
    const lnode* best = nullptr;
    for (const auto& [c, n] : live_) {
      bool below = true;
      for (const auto& [d, o] : live_)
        if (!vc_leq(c, d)) {
          below = false;
          break;
        }
      if (below) return n;
      if (!best || vc_sum(c) < vc_sum(best->clock)) best = &n;
    }
    return *best;
  }

  const lnode& meet_of(const lnode& a, const lnode& b) const {
    auto it = live_.find(vc_min(a.clock, b.clock));
    if (it == live_.end()) throw meet_missing("no meet for " + tuple_string(a.clock) + " and " + tuple_string(b.clock));
    return it->second;
  }

  // successors of c: one step per nonempty scheduler set s such that c+s and
  // every c+e_k for k in s are live
  std::vector<path_step> successors(const vclock& c) const {
    std::vector<int> single;
    for (int j = 0; j < sys_->m(); ++j)
      if (live_.count(vc_inc(c, j))) single.push_back(j);
    std::vector<path_step> out;
    std::size_t k = single.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
      vclock to = c;
      path_step st;
      for (std::size_t b = 0; b < k; ++b)
        if (mask >> b & 1) {
          int j = single[b];
          ++to[j];
          st.label.push_back(action_of(j, to[j]));
        }
      if (!live_.count(to)) continue;
      std::sort(st.label.begin(), st.label.end());
      st.to = std::move(to);
      out.push_back(std::move(st));
    }
    return out;
  }

  // every path from the origin to the frontier
  std::vector<lattice_path> paths(std::uint64_t max_paths = 1000000) const {
    const lnode& f = frontier();
    if (f.paths > max_paths)
      throw budget_exceeded("lattice has " + f.paths.str() + " paths, more than " + std::to_string(max_paths));
    std::vector<lattice_path> out;
    lattice_path cur;
    cur.origin = origin().clock;
    std::function<void(const vclock&)> rec = [&](const vclock& c) {
      if (c == f.clock) {
        out.push_back(cur);
        if (out.size() > max_paths) throw budget_exceeded("more than " + std::to_string(max_paths) + " paths");
        return;
      }
      for (auto& st : successors(c)) {
        if (!vc_leq(st.to, f.clock)) continue;
        cur.steps.push_back(st);
        rec(st.to);
        cur.steps.pop_back();
      }
    };
    rec(cur.origin);
    return out;
  }

  big count_paths() const { return frontier().paths; }

  lattice_report report() const {
    lattice_report r;
    r.observed_events = observed_;
    r.live_nodes = live_.size();
    r.removed_nodes = removed_;
    r.created_nodes = created_.size();
    const lnode& f = frontier();
    r.frontier_clock = f.clock;
    r.path_count = f.paths;
    for (const auto& e : f.sigma.entries()) {
      if (is_false(e.f)) r.formulas_false += e.count;
      else if (is_true(e.f)) r.formulas_true += e.count;
      else r.formulas_open += e.count;
      r.frontier_formulas.emplace_back(to_string(*sys_, e.f), e.count);
    }
    return r;
  }

 private:
  // pos is the queue position of e, queue size for a fresh event; events
  // queued ahead of pos arrived earlier
  bool make(const event& e, std::size_t pos) {
    for (std::size_t k = 0; k < pos; ++k)
      if (queue_[k].sender == e.sender) return false;
    return e.is_action() ? action_event(e) : update_event(e);
  }

  bool action_event(const event& e) {
    if (static_cast<int>(e.clock.size()) != sys_->m())
      throw length_mismatch("event clock of length " + std::to_string(e.clock.size()));
    if (e.clock[e.sender] == 0) throw protocol_violation("action event with a zero own clock entry");
    vclock pred = e.clock;
    --pred[e.sender];
    auto it = live_.find(pred);
    if (it == live_.end()) return false;
    if (created_.count(e.clock)) throw protocol_violation("two action events carry the clock " + tuple_string(e.clock));
    auto n = extend_node(*sys_, it->second, e);
    auto& slots = action_of_[e.sender];
    if (slots.size() < e.clock[e.sender]) slots.resize(e.clock[e.sender], -1);
    slots[e.clock[e.sender] - 1] = e.interaction;
    std::vector<vclock> fresh{n->clock};
    insert(std::move(*n));
    joints(fresh);
    augment(fresh);
    if (opt_.pruning) remove_extra_nodes();
    return true;
  }

  // the action that made the component busy came earlier from the same
  // sender, so make() has already held e back while it is queued
  bool update_event(const event& e) {
    for (auto& [c, n] : live_) {
      n = update_node(n, e);
      if (opt_.phi)
        n.sigma = n.sigma.map([&](const formula& f) { return update_formula(*sys_, f, e.component, e.state, e.sender); });
    }
    return true;
  }

  void insert(lnode n) {
    created_.insert(n.clock);
    live_.emplace(n.clock, std::move(n));
  }

  // close under joints; only pairs involving a new node can be new
  void joints(std::vector<vclock>& fresh) {
    const int m = sys_->m();
    for (std::size_t w = 0; w < fresh.size(); ++w) {
      const vclock c = fresh[w];
      for (int a = 0; a < m; ++a) {
        if (c[a] == 0) continue;
        vclock meet = c;
        --meet[a];
        auto mit = live_.find(meet);
        if (mit == live_.end()) continue;
        for (int b = 0; b < m; ++b) {
          if (b == a) continue;
          vclock other = vc_inc(meet, b);
          auto oit = live_.find(other);
          if (oit == live_.end()) continue;
          vclock jc = vc_inc(c, b);
          lnode j = joint_node(live_.at(c), oit->second, mit->second);
          if (created_.count(jc)) {
            auto ex = live_.find(jc);
            if (ex != live_.end() && ex->second.state != j.state)
              throw protocol_violation("joint " + tuple_string(jc) + " reached with two different states");
            continue;
          }
          insert(std::move(j));
          fresh.push_back(jc);
        }
      }
    }
  }

  // path counts and formula bags of new nodes, predecessors first
  void augment(std::vector<vclock> fresh) {
    std::sort(fresh.begin(), fresh.end(), [](const vclock& x, const vclock& y) {
      auto sx = vc_sum(x), sy = vc_sum(y);
      return sx != sy ? sx < sy : x < y;
    });
    const int m = sys_->m();
    for (const auto& c : fresh) {
      lnode& n = live_.at(c);
      std::vector<int> down;
      for (int j = 0; j < m; ++j)
        if (c[j] > 0) down.push_back(j);
      big paths = 0;
      bag sigma;
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << down.size()); ++mask) {
        vclock x = c;
        std::vector<int> s;
        for (std::size_t b = 0; b < down.size(); ++b)
          if (mask >> b & 1) {
            --x[down[b]];
            s.push_back(down[b]);
          }
        if (!created_.count(x)) continue;
        bool ok = true;
        if (s.size() >= 2)
          for (int k : s)
            if (!created_.count(vc_inc(x, k))) {
              ok = false;
              break;
            }
        if (!ok) continue;
        auto it = live_.find(x);
        if (it == live_.end())
          throw protocol_violation("predecessor " + tuple_string(x) + " of " + tuple_string(c) + " was pruned");
        paths += it->second.paths;
        if (opt_.phi)
          sigma.merge(it->second.sigma.map([&](const formula& f) { return progress(*sys_, f, n.state); }));
      }
      n.paths = paths;
      n.sigma = std::move(sigma);
    }
  }

  void remove_extra_nodes() {
    const int m = sys_->m();
    std::vector<vclock> drop;
    if (opt_.rule == prune_rule::single) {
      for (const auto& [c, n] : live_)
        for (const auto& [d, o] : live_)
          if (vc_dominates(d, c)) {
            drop.push_back(c);
            break;
          }
    } else {
      vclock top(m, 0);
      for (const auto& [c, n] : live_) top = vc_max(top, c);
      for (const auto& [c, n] : live_) {
        bool all = true;
        for (int j = 0; j < m; ++j)
          if (top[j] <= c[j]) all = false;
        if (all) drop.push_back(c);
      }
    }
    for (const auto& c : drop) live_.erase(c);
    removed_ += drop.size();
  }

  // earliest usable queued event first, until none is usable
  void check_queue() {
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t k = 0; k < queue_.size(); ++k)
        if (make(queue_[k], k)) {
          queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(k));
          moved = true;
          break;
        }
    }
  }

  const system_model* sys_;
  lattice_options opt_;
  std::map<vclock, lnode> live_;
  std::set<vclock> created_;
  std::deque<event> queue_;
  std::vector<std::vector<int>> action_of_;
  std::uint64_t observed_ = 0, removed_ = 0;
};

inline std::string path_string(const lattice& L, const lattice_path& p) {
  const auto& sys = L.sys();
  std::string s = lstate_string(sys, L.nodes().at(p.origin).state);
  for (const auto& st : p.steps) {
    s += " -{";
    for (std::size_t k = 0; k < st.label.size(); ++k)
      s += (k ? "," : "") + (st.label[k] >= 0 ? sys.interaction_name(st.label[k]) : std::string("?"));
    s += "}-> " + lstate_string(sys, L.nodes().at(st.to).state);
  }
  return s;
}

}  // namespace cbsmon
