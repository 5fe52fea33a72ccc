#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "model.hpp"

namespace cbsmon {

using big = boost::multiprecision::cpp_int;

// one entry of a lattice state: a ready state, or busy with the index of the
// scheduler that started it (k == -1 when that is not tracked)
struct slot {
  int ready = -1;
  int k = -1;
  bool busy() const { return ready < 0; }
  bool operator==(const slot&) const = default;
  auto operator<=>(const slot&) const = default;
};
using lstate = std::vector<slot>;

inline slot ready_slot(int q) { return {q, -1}; }
inline slot busy_slot(int k) { return {-1, k}; }

// a trace state with busy components marked, senders not tracked
inline lstate erase_busy(const system_model& sys, const std::vector<int>& q) {
  lstate r(q.size());
  for (int i = 0; i < sys.n(); ++i) {
    if (q[i] == unknown_state) throw partial_state("unknown component state in a global state");
    r[i] = sys.is_busy(i, q[i]) ? busy_slot(-1) : ready_slot(q[i]);
  }
  return r;
}

inline std::string slot_string(const system_model& sys, int i, const slot& s) {
  if (!s.busy()) return sys.state_name(i, s.ready);
  return s.k < 0 ? std::string("⊥") : "⊥^" + std::to_string(s.k + 1);
}

inline std::string lstate_string(const system_model& sys, const lstate& q) {
  std::string r = "(";
  for (int i = 0; i < sys.n(); ++i) r += (i ? "," : "") + slot_string(sys, i, q[i]);
  return r + ")";
}

inline formula progress(const system_model& sys, const formula& f, const lstate& q) {
  switch (f->kind) {
    case op::t:
    case op::f:
    case op::xbeta: return f;
    case op::atom: {
      const slot& s = q[f->comp];
      if (s.busy()) return mk_xbeta(f->comp, f->prop, s.k);
      return sys.holds(f->comp, s.ready, f->prop) ? f_true() : f_false();
    }
    case op::neg: return mk_not(progress(sys, f->l, q));
    case op::conj: return mk_and(progress(sys, f->l, q), progress(sys, f->r, q));
    case op::disj: return mk_or(progress(sys, f->l, q), progress(sys, f->r, q));
    case op::next: return f->l;
    case op::until: return mk_or(progress(sys, f->r, q), mk_and(progress(sys, f->l, q), f));
    case op::globally: return mk_and(progress(sys, f->l, q), f);
    case op::eventually: return mk_or(progress(sys, f->l, q), f);
  }
  return f;
}

// resolves pending atoms of component i reported by scheduler j
inline formula update_formula(const system_model& sys, const formula& f, int i, int qi, int j) {
  switch (f->kind) {
    case op::xbeta:
      if (f->comp == i && f->k == j) return sys.holds(i, qi, f->prop) ? f_true() : f_false();
      return f;
    case op::t:
    case op::f:
    case op::atom: return f;
    case op::neg: {
      auto a = update_formula(sys, f->l, i, qi, j);
      return a == f->l ? f : mk_not(a);
    }
    case op::next:
    case op::globally:
    case op::eventually: {
      auto a = update_formula(sys, f->l, i, qi, j);
      if (a == f->l) return f;
      return f->kind == op::next ? mk_next(a) : f->kind == op::globally ? mk_globally(a) : mk_eventually(a);
    }
    case op::conj:
    case op::disj:
    case op::until: {
      auto a = update_formula(sys, f->l, i, qi, j);
      auto b = update_formula(sys, f->r, i, qi, j);
      if (a == f->l && b == f->r) return f;
      return f->kind == op::conj ? mk_and(a, b) : f->kind == op::disj ? mk_or(a, b) : mk_until(a, b);
    }
  }
  return f;
}

// every pending atom gets its sender forgotten
inline formula erase_senders(const formula& f) {
  switch (f->kind) {
    case op::xbeta: return f->k < 0 ? f : mk_xbeta(f->comp, f->prop, -1);
    case op::t:
    case op::f:
    case op::atom: return f;
    case op::neg: return mk_not(erase_senders(f->l));
    case op::next: return mk_next(erase_senders(f->l));
    case op::globally: return mk_globally(erase_senders(f->l));
    case op::eventually: return mk_eventually(erase_senders(f->l));
    case op::conj: return mk_and(erase_senders(f->l), erase_senders(f->r));
    case op::disj: return mk_or(erase_senders(f->l), erase_senders(f->r));
    case op::until: return mk_until(erase_senders(f->l), erase_senders(f->r));
  }
  return f;
}

// ---------------------------------------------------------------------------
// multiset of formulas, one unit per path

class bag {
 public:
  struct entry {
    formula f;
    big count;
  };

  bag() = default;
  explicit bag(formula f) { add(std::move(f), 1); }

  void add(formula f, const big& count) {
    if (count == 0) return;
    for (auto& e : entries_)
      if (equal(e.f, f)) {
        e.count += count;
        return;
      }
    entries_.push_back({std::move(f), count});
  }
  void merge(const bag& o) {
    for (const auto& e : o.entries_) add(e.f, e.count);
  }
  template <class Fn>
  bag map(Fn&& fn) const {
    bag r;
    for (const auto& e : entries_) r.add(fn(e.f), e.count);
    return r;
  }
  const std::vector<entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  big size() const {
    big s = 0;
    for (const auto& e : entries_) s += e.count;
    return s;
  }
  big count_if(bool (*pred)(const formula&)) const {
    big s = 0;
    for (const auto& e : entries_)
      if (pred(e.f)) s += e.count;
    return s;
  }
  bool contains(const formula& f) const {
    for (const auto& e : entries_)
      if (equal(e.f, f)) return true;
    return false;
  }
  big count_of(const formula& f) const {
    for (const auto& e : entries_)
      if (equal(e.f, f)) return e.count;
    return 0;
  }
  // same multiset, order ignored
  bool same(const bag& o) const {
    if (entries_.size() != o.entries_.size()) return false;
    for (const auto& e : entries_)
      if (o.count_of(e.f) != e.count) return false;
    return true;
  }

 private:
  std::vector<entry> entries_;
};

// ---------------------------------------------------------------------------
// reference progression over a whole trace

// internal actions resolve pending atoms first; states reached by internal
// actions alone are not progressed, only states reached by interactions
inline formula prog_oracle(const system_model& sys, const formula& phi, const partial_trace& t) {
  formula f = phi;
  for (std::size_t k = 0; k < t.actions.size(); ++k) {
    const auto& ga = t.actions[k];
    const auto& q = t.states[k + 1];
    for (int i : ga.beta) f = update_formula(sys, f, i, q[i], -1);
    if (!ga.alpha.empty()) f = progress(sys, f, erase_busy(sys, q));
  }
  return f;
}

// classic progression over a sequence of complete states; the first state is
// the initial one and is not progressed
inline formula standard_progression(const system_model& sys, const formula& phi, const partial_trace& t) {
  formula f = phi;
  for (std::size_t k = 1; k < t.states.size(); ++k) {
    lstate q(sys.n());
    for (int i = 0; i < sys.n(); ++i) {
      int s = t.states[k][i];
      if (s == unknown_state || sys.is_busy(i, s))
        throw partial_state("state " + std::to_string(k) + " is not complete");
      q[i] = ready_slot(s);
    }
    f = progress(sys, f, q);
  }
  return f;
}

}  // namespace cbsmon
