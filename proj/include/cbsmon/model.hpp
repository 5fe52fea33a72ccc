#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cbsmon {

struct transition {
  std::string from, label, to;
};

struct component_spec {
  std::string id;
  std::vector<std::string> ready_states;
  std::vector<std::string> busy_states;
  std::vector<std::string> actions;
  std::string internal_action = "beta";
  std::vector<transition> transitions;
  std::string initial;
  // ready state -> propositions holding there; every ready state also
  // satisfies the proposition named after itself
  std::map<std::string, std::set<std::string>> atomic_props;
};

struct scheduler_spec {
  std::string id;
  std::vector<std::string> managed;
  std::vector<std::string> notified;  // optional, checked against the scope when given
  // labels are managed interaction ids or beta_label(component id)
  std::vector<transition> transitions;
  std::string initial;
};

struct interaction_spec {
  std::string id;
  std::vector<std::pair<std::string, std::string>> parts;  // (component, action)
};

struct system_spec {
  std::vector<component_spec> components;
  std::vector<scheduler_spec> schedulers;
  std::vector<interaction_spec> interactions;
};

inline std::string beta_label(const std::string& component) { return "beta:" + component; }

// ---------------------------------------------------------------------------
// validation

inline std::vector<std::string> validate_system(const system_spec& s) {
  std::vector<std::string> out;
  auto bad = [&](const std::string& where, const std::string& what) { out.push_back(where + ": " + what); };

  std::map<std::string, const component_spec*> comps;
  for (const auto& c : s.components) {
    std::string where = "component " + c.id;
    if (!comps.emplace(c.id, &c).second) bad(where, "duplicate component id");
    std::set<std::string> ready(c.ready_states.begin(), c.ready_states.end());
    std::set<std::string> busy(c.busy_states.begin(), c.busy_states.end());
    std::set<std::string> acts(c.actions.begin(), c.actions.end());
    if (ready.size() != c.ready_states.size() || busy.size() != c.busy_states.size())
      bad(where, "duplicate state id");
    for (const auto& q : ready)
      if (busy.count(q)) bad(where, "partition: state " + q + " is both ready and busy");
    if (!ready.count(c.initial)) bad(where, "initial state " + c.initial + " is not a ready state");
    if (acts.count(c.internal_action)) bad(where, "internal action " + c.internal_action + " is also a port action");
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& t : c.transitions) {
      std::string tw = where + " transition " + t.from + " -" + t.label + "-> " + t.to;
      bool from_ready = ready.count(t.from) > 0, from_busy = busy.count(t.from) > 0;
      bool to_ready = ready.count(t.to) > 0, to_busy = busy.count(t.to) > 0;
      if (!(from_ready || from_busy) || !(to_ready || to_busy)) {
        bad(tw, "unknown state");
        continue;
      }
      if (t.label == c.internal_action) {
        if (!(from_busy && to_ready)) bad(tw, "alternation: internal action must go from busy to ready");
      } else if (acts.count(t.label)) {
        if (!(from_ready && to_busy)) bad(tw, "alternation: port action must go from ready to busy");
      } else {
        bad(tw, "unknown action");
      }
      if (!seen.emplace(t.from, t.label).second) bad(tw, "nondeterministic: two transitions on one label");
    }
    for (const auto& [q, props] : c.atomic_props)
      if (!ready.count(q)) bad(where, "propositions attached to non-ready state " + q);
  }

  std::map<std::string, std::set<std::string>> involved;
  std::set<std::string> inter_ids;
  for (const auto& a : s.interactions) {
    std::string where = "interaction " + a.id;
    if (!inter_ids.insert(a.id).second) bad(where, "duplicate interaction id");
    if (a.parts.empty()) bad(where, "empty interaction");
    for (const auto& [cid, act] : a.parts) {
      auto it = comps.find(cid);
      if (it == comps.end()) {
        bad(where, "unknown component " + cid);
        continue;
      }
      const auto& acts = it->second->actions;
      if (std::find(acts.begin(), acts.end(), act) == acts.end())
        bad(where, "component " + cid + " has no action " + act);
      if (!involved[a.id].insert(cid).second) bad(where, "more than one action of component " + cid);
    }
  }

  std::map<std::string, int> manage_count;
  std::set<std::string> sched_ids;
  for (const auto& sc : s.schedulers) {
    std::string where = "scheduler " + sc.id;
    if (!sched_ids.insert(sc.id).second) bad(where, "duplicate scheduler id");
    std::set<std::string> scope;
    for (const auto& a : sc.managed) {
      if (!inter_ids.count(a)) {
        bad(where, "manages unknown interaction " + a);
        continue;
      }
      ++manage_count[a];
      for (const auto& c : involved[a]) scope.insert(c);
    }
    if (!sc.notified.empty()) {
      std::set<std::string> notified(sc.notified.begin(), sc.notified.end());
      if (notified != scope) bad(where, "notified internals differ from the scope");
    }
    if (sc.initial.empty()) bad(where, "no initial state");
    std::set<std::string> managed(sc.managed.begin(), sc.managed.end());
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& t : sc.transitions) {
      std::string tw = where + " transition " + t.from + " -" + t.label + "-> " + t.to;
      bool ok = managed.count(t.label) > 0;
      if (!ok && t.label.rfind("beta:", 0) == 0) ok = scope.count(t.label.substr(5)) > 0;
      if (!ok) bad(tw, "label is neither a managed interaction nor an internal action in scope");
      if (!seen.emplace(t.from, t.label).second) bad(tw, "nondeterministic: two transitions on one label");
    }
  }
  for (const auto& a : s.interactions) {
    int k = manage_count.count(a.id) ? manage_count[a.id] : 0;
    if (k == 0) bad("interaction " + a.id, "managed not total: no scheduler manages it");
    if (k > 1) bad("interaction " + a.id, "managed not single-valued: " + std::to_string(k) + " schedulers");
  }
  return out;
}

// ---------------------------------------------------------------------------
// compiled, index-based view of a valid system

constexpr int unknown_state = -1;  // the '?' of projected traces

class system_model {
 public:
  explicit system_model(system_spec spec) : spec_(std::move(spec)) {
    auto report = validate_system(spec_);
    if (!report.empty()) {
      std::string msg = "invalid system:";
      for (const auto& r : report) msg += "\n  " + r;
      throw invalid_system(msg);
    }
    build();
  }

  const system_spec& spec() const { return spec_; }
  int n() const { return static_cast<int>(comps_.size()); }
  int m() const { return static_cast<int>(scheds_.size()); }
  int interaction_count() const { return static_cast<int>(inters_.size()); }

  // components
  const std::string& component_name(int i) const { return spec_.components[i].id; }
  int component_index(const std::string& id) const { return find(comp_ix_, id); }
  int state_count(int i) const { return static_cast<int>(comps_[i].names.size()); }
  const std::string& state_name(int i, int q) const { return comps_[i].names[q]; }
  int state_index(int i, const std::string& id) const { return find(comps_[i].state_ix, id); }
  bool is_busy(int i, int q) const { return q >= 0 && comps_[i].busy[q]; }
  bool is_ready(int i, int q) const { return q >= 0 && !comps_[i].busy[q]; }
  int initial_state(int i) const { return comps_[i].initial; }
  int action_next(int i, int q, int action) const {
    auto it = comps_[i].next.find({q, action});
    return it == comps_[i].next.end() ? -1 : it->second;
  }
  int beta_next(int i, int q) const { return q >= 0 ? comps_[i].beta[q] : -1; }
  int action_index(int i, const std::string& id) const { return find(comps_[i].action_ix, id); }

  // propositions
  int prop_count(int i) const { return static_cast<int>(comps_[i].props.size()); }
  const std::string& prop_name(int i, int p) const { return comps_[i].props[p]; }
  int prop_index(int i, const std::string& id) const { return find(comps_[i].prop_ix, id); }
  bool holds(int i, int q, int p) const {
    const auto& h = comps_[i].holds[q];
    return std::binary_search(h.begin(), h.end(), p);
  }

  // interactions
  const std::string& interaction_name(int a) const { return spec_.interactions[a].id; }
  int interaction_index(const std::string& id) const { return find(inter_ix_, id); }
  const std::vector<std::pair<int, int>>& parts(int a) const { return inters_[a].parts; }
  const std::vector<int>& involved(int a) const { return inters_[a].comps; }
  bool involves(int a, int i) const {
    const auto& c = inters_[a].comps;
    return std::binary_search(c.begin(), c.end(), i);
  }
  int manager(int a) const { return inters_[a].manager; }

  // schedulers
  const std::string& scheduler_name(int j) const { return spec_.schedulers[j].id; }
  int scheduler_index(const std::string& id) const { return find(sched_ix_, id); }
  int sched_initial(int j) const { return scheds_[j].initial; }
  const std::string& sched_state_name(int j, int s) const { return scheds_[j].names[s]; }
  const std::vector<int>& managed_by(int j) const { return scheds_[j].managed; }
  const std::vector<int>& scope(int j) const { return scheds_[j].scope; }
  bool in_scope(int j, int i) const { return scheds_[j].in_scope[i]; }
  bool shared(int i) const { return scopes_of_[i].size() >= 2; }
  const std::vector<int>& schedulers_seeing(int i) const { return scopes_of_[i]; }
  std::vector<int> shared_components() const {
    std::vector<int> r;
    for (int i = 0; i < n(); ++i)
      if (shared(i)) r.push_back(i);
    return r;
  }
  // label ids: interactions 0..ni-1, internal action of component i is ni+i
  int beta_label_id(int i) const { return interaction_count() + i; }
  int sched_next(int j, int s, int label) const {
    auto it = scheds_[j].next.find({s, label});
    return it == scheds_[j].next.end() ? -1 : it->second;
  }

 private:
  struct comp_data {
    std::vector<std::string> names;
    std::vector<bool> busy;
    std::unordered_map<std::string, int> state_ix, action_ix, prop_ix;
    std::map<std::pair<int, int>, int> next;
    std::vector<int> beta;
    int initial = 0;
    std::vector<std::string> props;
    std::vector<std::vector<int>> holds;
  };
  struct inter_data {
    std::vector<std::pair<int, int>> parts;
    std::vector<int> comps;
    int manager = -1;
  };
  struct sched_data {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> state_ix;
    std::map<std::pair<int, int>, int> next;
    std::vector<int> managed, scope;
    std::vector<bool> in_scope;
    int initial = 0;
  };

  static int find(const std::unordered_map<std::string, int>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? -1 : it->second;
  }

  void build() {
    for (std::size_t i = 0; i < spec_.components.size(); ++i) {
      const auto& c = spec_.components[i];
      comp_ix_[c.id] = static_cast<int>(i);
      comp_data d;
      for (const auto& q : c.ready_states) {
        d.state_ix[q] = static_cast<int>(d.names.size());
        d.names.push_back(q);
        d.busy.push_back(false);
      }
      for (const auto& q : c.busy_states) {
        d.state_ix[q] = static_cast<int>(d.names.size());
        d.names.push_back(q);
        d.busy.push_back(true);
      }
      for (std::size_t a = 0; a < c.actions.size(); ++a) d.action_ix[c.actions[a]] = static_cast<int>(a);
      d.beta.assign(d.names.size(), -1);
      for (const auto& t : c.transitions) {
        int from = d.state_ix[t.from], to = d.state_ix[t.to];
        if (t.label == c.internal_action) d.beta[from] = to;
        else d.next[{from, d.action_ix[t.label]}] = to;
      }
      d.initial = d.state_ix[c.initial];
      // every ready state names a proposition, plus the declared ones
      std::set<std::string> props;
      for (const auto& q : c.ready_states) props.insert(q);
      for (const auto& [q, ps] : c.atomic_props) props.insert(ps.begin(), ps.end());
      for (const auto& p : props) {
        d.prop_ix[p] = static_cast<int>(d.props.size());
        d.props.push_back(p);
      }
      d.holds.resize(d.names.size());
      for (const auto& q : c.ready_states) {
        int qi = d.state_ix[q];
        d.holds[qi].push_back(d.prop_ix[q]);
        auto it = c.atomic_props.find(q);
        if (it != c.atomic_props.end())
          for (const auto& p : it->second) d.holds[qi].push_back(d.prop_ix[p]);
        std::sort(d.holds[qi].begin(), d.holds[qi].end());
        d.holds[qi].erase(std::unique(d.holds[qi].begin(), d.holds[qi].end()), d.holds[qi].end());
      }
      comps_.push_back(std::move(d));
    }
    for (std::size_t a = 0; a < spec_.interactions.size(); ++a) {
      const auto& x = spec_.interactions[a];
      inter_ix_[x.id] = static_cast<int>(a);
      inter_data d;
      for (const auto& [cid, act] : x.parts) {
        int i = comp_ix_[cid];
        d.parts.emplace_back(i, comps_[i].action_ix[act]);
        d.comps.push_back(i);
      }
      std::sort(d.parts.begin(), d.parts.end());
      std::sort(d.comps.begin(), d.comps.end());
      inters_.push_back(std::move(d));
    }
    scopes_of_.assign(comps_.size(), {});
    for (std::size_t j = 0; j < spec_.schedulers.size(); ++j) {
      const auto& sc = spec_.schedulers[j];
      sched_ix_[sc.id] = static_cast<int>(j);
      sched_data d;
      d.in_scope.assign(comps_.size(), false);
      for (const auto& a : sc.managed) {
        int ai = inter_ix_[a];
        d.managed.push_back(ai);
        inters_[ai].manager = static_cast<int>(j);
        for (int i : inters_[ai].comps) d.in_scope[i] = true;
      }
      std::sort(d.managed.begin(), d.managed.end());
      for (std::size_t i = 0; i < comps_.size(); ++i)
        if (d.in_scope[i]) {
          d.scope.push_back(static_cast<int>(i));
          scopes_of_[i].push_back(static_cast<int>(j));
        }
      auto state = [&](const std::string& s) {
        auto it = d.state_ix.find(s);
        if (it != d.state_ix.end()) return it->second;
        int k = static_cast<int>(d.names.size());
        d.state_ix[s] = k;
        d.names.push_back(s);
        return k;
      };
      d.initial = state(sc.initial);
      for (const auto& t : sc.transitions) {
        int label = t.label.rfind("beta:", 0) == 0 ? interaction_count() + comp_ix_[t.label.substr(5)]
                                                    : inter_ix_[t.label];
        int from = state(t.from);
        d.next[{from, label}] = state(t.to);
      }
      scheds_.push_back(std::move(d));
    }
  }

  system_spec spec_;
  std::vector<comp_data> comps_;
  std::vector<inter_data> inters_;
  std::vector<sched_data> scheds_;
  std::vector<std::vector<int>> scopes_of_;
  std::unordered_map<std::string, int> comp_ix_, inter_ix_, sched_ix_;
};

// ---------------------------------------------------------------------------
// global semantics

struct global_state {
  std::vector<int> comps;
  std::vector<int> scheds;
  auto operator<=>(const global_state&) const = default;
};

// alpha: interaction indices, beta: component indices; both sorted
struct global_action {
  std::vector<int> alpha;
  std::vector<int> beta;
  bool empty() const { return alpha.empty() && beta.empty(); }
  auto operator<=>(const global_action&) const = default;
};

// component states only; states.size() == actions.size() + 1
struct partial_trace {
  std::vector<std::vector<int>> states;
  std::vector<global_action> actions;
  auto operator<=>(const partial_trace&) const = default;
};

inline global_state initial_state(const system_model& sys) {
  global_state g;
  for (int i = 0; i < sys.n(); ++i) g.comps.push_back(sys.initial_state(i));
  for (int j = 0; j < sys.m(); ++j) g.scheds.push_back(sys.sched_initial(j));
  return g;
}

namespace detail {

// a scheduler taking several labels in one global step takes them one after
// the other; the first order (internal actions first) that the LTS accepts wins
inline int sched_apply(const system_model& sys, int j, int s, std::vector<int> labels) {
  if (labels.empty()) return s;
  std::vector<int> order(labels.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  auto rank = [&](int k) {
    int l = labels[k];
    return l >= sys.interaction_count() ? l - sys.interaction_count() : sys.n() + l;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return rank(a) < rank(b); });
  do {
    int cur = s;
    for (int k : order) {
      cur = sys.sched_next(j, cur, labels[k]);
      if (cur < 0) break;
    }
    if (cur >= 0) return cur;
  } while (std::next_permutation(order.begin(), order.end(),
                                 [&](int a, int b) { return rank(a) < rank(b); }));
  return -1;
}

}  // namespace detail

// the successor if the action satisfies the global rules, nothing otherwise;
// at most one interaction per scheduler in one step
inline std::optional<global_state> try_step(const system_model& sys, const global_state& g, const global_action& ga) {
  if (ga.empty()) return std::nullopt;
  std::vector<int> used(sys.n(), 0);
  std::vector<std::vector<int>> labels(sys.m());
  global_state r = g;
  for (std::size_t k = 0; k < ga.alpha.size(); ++k) {
    int a = ga.alpha[k];
    if (a < 0 || a >= sys.interaction_count()) return std::nullopt;
    if (k && ga.alpha[k - 1] >= a) return std::nullopt;
    int j = sys.manager(a);
    if (!labels[j].empty()) return std::nullopt;
    labels[j].push_back(a);
    for (auto [i, act] : sys.parts(a)) {
      if (used[i]++) return std::nullopt;
      int to = sys.action_next(i, g.comps[i], act);
      if (to < 0) return std::nullopt;
      r.comps[i] = to;
    }
  }
  for (std::size_t k = 0; k < ga.beta.size(); ++k) {
    int i = ga.beta[k];
    if (i < 0 || i >= sys.n()) return std::nullopt;
    if (k && ga.beta[k - 1] >= i) return std::nullopt;
    if (used[i]++) return std::nullopt;
    int to = sys.beta_next(i, g.comps[i]);
    if (to < 0) return std::nullopt;
    r.comps[i] = to;
    for (int j : sys.schedulers_seeing(i)) labels[j].push_back(sys.beta_label_id(i));
  }
  for (int j = 0; j < sys.m(); ++j) {
    int s = detail::sched_apply(sys, j, g.scheds[j], labels[j]);
    if (s < 0) return std::nullopt;
    r.scheds[j] = s;
  }
  return r;
}

inline global_state step(const system_model& sys, const global_state& g, const global_action& ga) {
  auto r = try_step(sys, g, ga);
  if (!r) throw not_enabled("global action is not enabled");
  return *r;
}

// every nonempty action allowed by the global rules, in canonical order
inline std::vector<global_action> enabled_global_actions(const system_model& sys, const global_state& g) {
  std::vector<int> inter, betas;
  for (int a = 0; a < sys.interaction_count(); ++a)
    if (try_step(sys, g, {{a}, {}})) inter.push_back(a);
  for (int i = 0; i < sys.n(); ++i)
    if (try_step(sys, g, {{}, {i}})) betas.push_back(i);
  std::vector<global_action> out;
  std::vector<int> used(sys.n(), 0), sched_used(sys.m(), 0);
  global_action cur;
  // interactions first, then internal actions; conflicts pruned early
  std::size_t total = inter.size() + betas.size();
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == total) {
      if (!cur.empty() && try_step(sys, g, cur)) out.push_back(cur);
      return;
    }
    self(self, k + 1);
    if (k < inter.size()) {
      int a = inter[k];
      if (sched_used[sys.manager(a)]) return;
      for (int i : sys.involved(a))
        if (used[i]) return;
      for (int i : sys.involved(a)) used[i] = 1;
      sched_used[sys.manager(a)] = 1;
      cur.alpha.push_back(a);
      self(self, k + 1);
      cur.alpha.pop_back();
      sched_used[sys.manager(a)] = 0;
      for (int i : sys.involved(a)) used[i] = 0;
    } else {
      int i = betas[k - inter.size()];
      if (used[i]) return;
      used[i] = 1;
      cur.beta.push_back(i);
      self(self, k + 1);
      cur.beta.pop_back();
      used[i] = 0;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline partial_trace trace_from(const system_model& sys, const std::vector<global_action>& actions) {
  partial_trace t;
  global_state g = initial_state(sys);
  t.states.push_back(g.comps);
  for (const auto& ga : actions) {
    g = step(sys, g, ga);
    t.actions.push_back(ga);
    t.states.push_back(g.comps);
  }
  return t;
}

// ---------------------------------------------------------------------------
// local traces

namespace detail {

inline global_action observed_part(const system_model& sys, const global_action& ga, int j) {
  global_action th;
  for (int a : ga.alpha)
    if (sys.manager(a) == j) th.alpha.push_back(a);
  for (int i : ga.beta)
    if (sys.in_scope(j, i)) th.beta.push_back(i);
  return th;
}

inline std::vector<int> observed_state(const system_model& sys, const global_action& th, const std::vector<int>& q,
                                       const std::vector<int>& last, int j) {
  std::vector<bool> inv(sys.n(), false);
  for (int a : th.alpha)
    for (int i : sys.involved(a)) inv[i] = true;
  for (int i : th.beta) inv[i] = true;
  std::vector<int> r(sys.n(), unknown_state);
  for (int i = 0; i < sys.n(); ++i)
    if (sys.in_scope(j, i)) r[i] = inv[i] ? q[i] : last[i];
  return r;
}

}  // namespace detail

// the trace as seen by scheduler j; unknown_state marks components outside its scope
inline partial_trace project_local_trace(const system_model& sys, const partial_trace& t, int j) {
  partial_trace r;
  r.states.push_back(t.states.at(0));
  for (std::size_t k = 0; k < t.actions.size(); ++k) {
    auto th = detail::observed_part(sys, t.actions[k], j);
    if (th.empty()) continue;
    r.states.push_back(detail::observed_state(sys, th, t.states[k + 1], r.states.back(), j));
    r.actions.push_back(std::move(th));
  }
  return r;
}

// drop internal actions, folding the ready state they reach back over the
// earlier busy slots
inline partial_trace refine(const system_model& sys, const partial_trace& t) {
  partial_trace r;
  r.states.push_back(t.states.at(0));
  auto upd = [&](const std::vector<int>& q) {
    for (auto& x : r.states)
      for (int i = 0; i < sys.n(); ++i)
        if (!sys.is_busy(i, q[i]) && sys.is_busy(i, x[i])) x[i] = q[i];
  };
  for (std::size_t k = 0; k < t.actions.size(); ++k) {
    const auto& ga = t.actions[k];
    const auto& q = t.states[k + 1];
    if (!ga.alpha.empty()) {
      r.actions.push_back({ga.alpha, {}});
      r.states.push_back(q);
    }
    if (!ga.beta.empty()) upd(q);
  }
  return r;
}

// all traces whose local views match those of t, one per refined trace unless
// every_ordering is set
inline std::vector<partial_trace> compatible_traces(const system_model& sys, const partial_trace& t,
                                                    std::size_t bound = 12, bool every_ordering = false) {
  if (t.actions.size() > bound)
    throw budget_exceeded("trace of " + std::to_string(t.actions.size()) + " global actions exceeds bound " +
                          std::to_string(bound));
  std::vector<partial_trace> local;
  for (int j = 0; j < sys.m(); ++j) local.push_back(project_local_trace(sys, t, j));
  std::map<partial_trace, partial_trace> by_refined;
  std::vector<partial_trace> all;
  std::vector<std::size_t> pos(sys.m(), 0);
  partial_trace cur;
  global_state g0 = initial_state(sys);
  cur.states.push_back(g0.comps);
  auto rec = [&](auto&& self, const global_state& g) -> void {
    bool done = true;
    for (int j = 0; j < sys.m(); ++j)
      if (pos[j] < local[j].actions.size()) done = false;
    if (done) {
      if (every_ordering) all.push_back(cur);
      else by_refined.emplace(refine(sys, cur), cur);
      return;
    }
    for (const auto& ga : enabled_global_actions(sys, g)) {
      global_state h = step(sys, g, ga);
      auto saved = pos;
      bool ok = true;
      for (int j = 0; j < sys.m() && ok; ++j) {
        auto th = detail::observed_part(sys, ga, j);
        if (th.empty()) continue;
        if (pos[j] >= local[j].actions.size() || th != local[j].actions[pos[j]]) {
          ok = false;
          break;
        }
        auto q = detail::observed_state(sys, th, h.comps, local[j].states[pos[j]], j);
        if (q != local[j].states[pos[j] + 1]) ok = false;
        else ++pos[j];
      }
      if (ok) {
        cur.actions.push_back(ga);
        cur.states.push_back(h.comps);
        self(self, h);
        cur.actions.pop_back();
        cur.states.pop_back();
      }
      pos = saved;
    }
  };
  rec(rec, g0);
  if (every_ordering) return all;
  std::vector<partial_trace> out;
  for (auto& [k, v] : by_refined) out.push_back(std::move(v));
  return out;
}

// ---------------------------------------------------------------------------
// printing

inline std::string state_string(const system_model& sys, const std::vector<int>& q) {
  std::string s = "(";
  for (int i = 0; i < sys.n(); ++i) {
    if (i) s += ",";
    s += q[i] == unknown_state ? std::string("?") : sys.state_name(i, q[i]);
  }
  return s + ")";
}

inline std::string action_string(const system_model& sys, const global_action& ga) {
  std::string s = "{";
  bool first = true;
  for (int a : ga.alpha) {
    s += (first ? "" : ",") + sys.interaction_name(a);
    first = false;
  }
  for (int i : ga.beta) {
    s += (first ? "" : ",") + std::string("beta(") + sys.component_name(i) + ")";
    first = false;
  }
  return s + "}";
}

inline std::string trace_string(const system_model& sys, const partial_trace& t) {
  std::string s = state_string(sys, t.states[0]);
  for (std::size_t k = 0; k < t.actions.size(); ++k)
    s += " " + action_string(sys, t.actions[k]) + " " + state_string(sys, t.states[k + 1]);
  return s;
}

}  // namespace cbsmon
