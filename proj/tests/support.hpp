#pragma once

// helpers shared by the tests: random systems and formulas, and oracles that
// do not go through the lattice code

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cbsmon/builtin.hpp"
#include "cbsmon/formula.hpp"
#include "cbsmon/lattice.hpp"
#include "cbsmon/model.hpp"
#include "cbsmon/progression.hpp"

namespace testing {

using namespace cbsmon;

// up to 4 components and 3 schedulers; every component is in some interaction
inline system_spec random_system(std::mt19937_64& rng, int max_comps = 4, int max_scheds = 3) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  system_spec s;
  int n = pick(2, max_comps);
  int m = pick(1, max_scheds);
  std::vector<std::vector<std::string>> acts(n);
  for (int i = 0; i < n; ++i) {
    component_spec c;
    c.id = "c" + std::to_string(i);
    int nr = pick(2, 3);
    for (int q = 0; q < nr; ++q) c.ready_states.push_back("q" + std::to_string(q));
    c.initial = "q0";
    int na = pick(1, 2);
    for (int a = 0; a < na; ++a) c.actions.push_back("a" + std::to_string(a));
    for (int q = 0; q < nr; ++q)
      for (const auto& a : c.actions) {
        if (pick(0, 3) == 0) continue;
        std::string busy = "q" + std::to_string(q) + "_" + a;
        c.busy_states.push_back(busy);
        c.transitions.push_back({"q" + std::to_string(q), a, busy});
        c.transitions.push_back({busy, "beta", "q" + std::to_string(pick(0, nr - 1))});
      }
    if (c.busy_states.empty()) {
      c.busy_states.push_back("q0_a0");
      c.transitions.push_back({"q0", "a0", "q0_a0"});
      c.transitions.push_back({"q0_a0", "beta", "q1"});
    }
    c.atomic_props["q0"] = {"p"};
    if (pick(0, 1)) c.atomic_props["q1"] = {"p"};
    for (const auto& t : c.transitions)
      if (t.label != "beta" && std::find(acts[i].begin(), acts[i].end(), t.label) == acts[i].end())
        acts[i].push_back(t.label);
    s.components.push_back(std::move(c));
  }
  int ni = pick(n, n + 3);
  for (int k = 0; k < ni; ++k) {
    interaction_spec a;
    a.id = "i" + std::to_string(k);
    std::vector<int> members;
    if (k < n) members.push_back(k);
    for (int i = 0; i < n; ++i)
      if (i != (k < n ? k : -1) && pick(0, 3) == 0) members.push_back(i);
    if (members.empty()) members.push_back(pick(0, n - 1));
    std::sort(members.begin(), members.end());
    for (int i : members) a.parts.emplace_back("c" + std::to_string(i), acts[i][pick(0, acts[i].size() - 1)]);
    s.interactions.push_back(std::move(a));
  }
  for (int j = 0; j < m; ++j) s.schedulers.push_back({"s" + std::to_string(j), {}, {}, {}, ""});
  for (int k = 0; k < ni; ++k) s.schedulers[k < m ? k : pick(0, m - 1)].managed.push_back(s.interactions[k].id);
  detail::make_eager(s);
  // some schedulers get a two-state LTS that refuses part of their interactions
  for (auto& sc : s.schedulers) {
    if (pick(0, 1) == 0) continue;
    std::vector<transition> ts;
    for (const auto& t : sc.transitions) {
      bool beta = t.label.rfind("beta:", 0) == 0;
      for (const char* from : {"s", "t"}) {
        if (!beta && pick(0, 2) == 0) continue;
        ts.push_back({from, t.label, beta ? from : (pick(0, 1) ? "s" : "t")});
      }
    }
    sc.transitions = ts;
  }
  return s;
}

// random walk of at most len steps
inline partial_trace random_trace(const system_model& sys, std::mt19937_64& rng, int len) {
  partial_trace t;
  auto g = initial_state(sys);
  t.states.push_back(g.comps);
  for (int k = 0; k < len; ++k) {
    auto en = enabled_global_actions(sys, g);
    if (en.empty()) break;
    const auto& ga = en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
    g = step(sys, g, ga);
    t.actions.push_back(ga);
    t.states.push_back(g.comps);
  }
  return t;
}

// appends internal actions until every component is ready
inline partial_trace stabilize(const system_model& sys, partial_trace t) {
  global_state g = initial_state(sys);
  for (const auto& ga : t.actions) g = step(sys, g, ga);
  while (true) {
    global_action ga;
    for (int i = 0; i < sys.n(); ++i)
      if (sys.is_busy(i, g.comps[i])) {
        auto cand = ga;
        cand.beta.push_back(i);
        if (try_step(sys, g, cand)) ga = cand;
      }
    if (ga.empty()) break;
    g = step(sys, g, ga);
    t.actions.push_back(ga);
    t.states.push_back(g.comps);
  }
  return t;
}

inline formula random_formula(const system_model& sys, std::mt19937_64& rng, int depth) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  if (depth == 0 || pick(0, 4) == 0) {
    int i = pick(0, sys.n() - 1);
    return mk_atom(i, pick(0, sys.prop_count(i) - 1));
  }
  switch (pick(0, 7)) {
    case 0: return mk_not(random_formula(sys, rng, depth - 1));
    case 1: return mk_and(random_formula(sys, rng, depth - 1), random_formula(sys, rng, depth - 1));
    case 2: return mk_or(random_formula(sys, rng, depth - 1), random_formula(sys, rng, depth - 1));
    case 3: return mk_next(random_formula(sys, rng, depth - 1));
    case 4: return mk_until(random_formula(sys, rng, depth - 1), random_formula(sys, rng, depth - 1));
    case 5: return mk_globally(random_formula(sys, rng, depth - 1));
    default: return mk_eventually(random_formula(sys, rng, depth - 1));
  }
}

// ---------------------------------------------------------------------------
// comparing lattice paths with refined traces

// a refined trace as (labels, states) with busy slots anonymous
struct flat_path {
  std::vector<lstate> states;
  std::vector<std::vector<int>> labels;
  auto operator<=>(const flat_path&) const = default;
};

inline lstate anonymous(const lstate& q) {
  lstate r = q;
  for (auto& s : r)
    if (s.busy()) s.k = -1;
  return r;
}

inline flat_path flatten(const system_model& sys, const partial_trace& refined) {
  flat_path p;
  for (const auto& q : refined.states) p.states.push_back(erase_busy(sys, q));
  for (const auto& ga : refined.actions) p.labels.push_back(ga.alpha);
  return p;
}

inline flat_path flatten(const lattice& L, const lattice_path& lp) {
  flat_path p;
  p.states.push_back(anonymous(L.nodes().at(lp.origin).state));
  for (const auto& st : lp.steps) {
    p.labels.push_back(st.label);
    p.states.push_back(anonymous(L.nodes().at(st.to).state));
  }
  return p;
}

// ---------------------------------------------------------------------------
// formulas up to associativity and commutativity of & and |

inline void ac_collect(const system_model& sys, const formula& f, op kind, std::vector<std::string>& out);

inline std::string ac_normal(const system_model& sys, const formula& f) {
  switch (f->kind) {
    case op::conj:
    case op::disj: {
      std::vector<std::string> parts;
      ac_collect(sys, f, f->kind, parts);
      std::sort(parts.begin(), parts.end());
      std::string s = f->kind == op::conj ? "and(" : "or(";
      for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "," : "") + parts[k];
      return s + ")";
    }
    case op::neg: return "not(" + ac_normal(sys, f->l) + ")";
    case op::next: return "X(" + ac_normal(sys, f->l) + ")";
    case op::globally: return "G(" + ac_normal(sys, f->l) + ")";
    case op::eventually: return "F(" + ac_normal(sys, f->l) + ")";
    case op::until: return "U(" + ac_normal(sys, f->l) + "," + ac_normal(sys, f->r) + ")";
    case op::xbeta: return to_string(sys, erase_senders(f));
    default: return to_string(sys, f);
  }
}

inline void ac_collect(const system_model& sys, const formula& f, op kind, std::vector<std::string>& out) {
  if (f->kind == kind) {
    ac_collect(sys, f->l, kind, out);
    ac_collect(sys, f->r, kind, out);
  } else {
    out.push_back(ac_normal(sys, f));
  }
}

// bag as a sorted multiset of normalized strings
inline std::vector<std::string> ac_bag(const system_model& sys, const bag& b) {
  std::vector<std::string> out;
  for (const auto& e : b.entries())
    for (big k = 0; k < e.count; ++k) out.push_back(ac_normal(sys, e.f));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> ac_list(const system_model& sys, const std::vector<std::string>& texts) {
  std::vector<std::string> out;
  for (const auto& t : texts) out.push_back(ac_normal(sys, parse_formula(sys, t)));
  std::sort(out.begin(), out.end());
  return out;
}

// everything observable about a lattice and its queue, as text
inline std::string lattice_dump(const lattice& L) {
  const auto& sys = L.sys();
  std::string s;
  for (const auto& [c, n] : L.nodes()) {
    s += tuple_string(c) + " " + lstate_string(sys, n.state) + " paths=" + n.paths.str() + " {";
    std::vector<std::string> fs;
    for (const auto& e : n.sigma.entries()) fs.push_back(to_string(sys, e.f) + " x" + e.count.str());
    std::sort(fs.begin(), fs.end());
    for (const auto& f : fs) s += f + ";";
    s += "}\n";
  }
  s += "queue:";
  for (const auto& e : L.queue()) s += " [" + format_event(sys, e) + "]";
  s += "\ncreated=" + std::to_string(L.created()) + " removed=" + std::to_string(L.removed()) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// counting oracles

inline big multinomial(const std::vector<std::size_t>& sizes) {
  big num = 1, den = 1;
  std::size_t total = 0;
  for (auto s : sizes) {
    for (std::size_t k = 1; k <= s; ++k) {
      ++total;
      num *= total;
      den *= k;
    }
  }
  return num / den;
}

// monotone paths through a box of clocks where one step may advance any
// nonempty set of coordinates by one, restricted to allowed points
inline big grid_paths(const vclock& top, const std::function<bool(const vclock&)>& allowed) {
  std::map<vclock, big> ways;
  vclock zero(top.size(), 0);
  std::vector<vclock> order;
  std::function<void(std::size_t, vclock&)> gen = [&](std::size_t d, vclock& c) {
    if (d == top.size()) {
      order.push_back(c);
      return;
    }
    for (std::uint32_t v = 0; v <= top[d]; ++v) {
      c[d] = v;
      gen(d + 1, c);
    }
  };
  vclock c(top.size());
  gen(0, c);
  std::sort(order.begin(), order.end(), [](const vclock& a, const vclock& b) { return vc_sum(a) < vc_sum(b); });
  for (const auto& x : order) {
    if (!allowed(x)) continue;
    if (x == zero) {
      ways[x] = 1;
      continue;
    }
    big w = 0;
    std::size_t d = top.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
      vclock y = x;
      bool ok = true;
      for (std::size_t b = 0; b < d; ++b)
        if (mask >> b & 1) {
          if (y[b] == 0) ok = false;
          else --y[b];
        }
      if (!ok) continue;
      // a joint step needs each single step from y to exist on its own
      if (std::popcount(mask) >= 2)
        for (std::size_t b = 0; b < d && ok; ++b)
          if (mask >> b & 1) ok = allowed(vc_inc(y, b));
      if (!ok) continue;
      auto it = ways.find(y);
      if (it != ways.end()) w += it->second;
    }
    ways[x] = w;
  }
  return ways.count(top) ? ways[top] : big(0);
}

// consistent cuts of a set of per-scheduler event clocks: a vector c is a
// cut when every event inside it has its dependencies inside it too
inline std::set<vclock> consistent_cuts(const std::vector<std::vector<vclock>>& clocks) {
  std::size_t m = clocks.size();
  vclock top(m);
  for (std::size_t j = 0; j < m; ++j) top[j] = static_cast<std::uint32_t>(clocks[j].size());
  std::set<vclock> out;
  std::function<void(std::size_t, vclock&)> gen = [&](std::size_t d, vclock& c) {
    if (d == m) {
      for (std::size_t j = 0; j < m; ++j)
        for (std::uint32_t k = 0; k < c[j]; ++k)
          for (std::size_t i = 0; i < m; ++i)
            if (clocks[j][k][i] > c[i]) return;
      out.insert(c);
      return;
    }
    for (std::uint32_t v = 0; v <= top[d]; ++v) {
      c[d] = v;
      gen(d + 1, c);
    }
  };
  vclock c(m);
  gen(0, c);
  return out;
}

}  // namespace testing
