#pragma once

#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "model.hpp"

namespace cbsmon {

enum class op { t, f, atom, xbeta, neg, conj, disj, next, until, globally, eventually };

struct fnode;
using formula = std::shared_ptr<const fnode>;

// atoms and xbeta carry (component, proposition); xbeta also the sender k,
// with k == -1 meaning the sender is not recorded
struct fnode {
  op kind;
  int comp = -1, prop = -1, k = -1;
  formula l, r;
  std::size_t hash = 0;
};

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

inline formula make_node(op kind, int comp, int prop, int k, formula l, formula r) {
  auto n = std::make_shared<fnode>();
  n->kind = kind;
  n->comp = comp;
  n->prop = prop;
  n->k = k;
  std::size_t h = mix(static_cast<std::size_t>(kind), static_cast<std::size_t>(comp + 1));
  h = mix(h, static_cast<std::size_t>(prop + 1));
  h = mix(h, static_cast<std::size_t>(k + 2));
  if (l) h = mix(h, l->hash);
  if (r) h = mix(h, r->hash);
  n->hash = h;
  n->l = std::move(l);
  n->r = std::move(r);
  return n;
}

}  // namespace detail

inline const formula& f_true() {
  static const formula t = detail::make_node(op::t, -1, -1, -1, nullptr, nullptr);
  return t;
}
inline const formula& f_false() {
  static const formula f = detail::make_node(op::f, -1, -1, -1, nullptr, nullptr);
  return f;
}
inline bool is_true(const formula& x) { return x->kind == op::t; }
inline bool is_false(const formula& x) { return x->kind == op::f; }

inline bool equal(const formula& a, const formula& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->comp != b->comp || a->prop != b->prop || a->k != b->k)
    return false;
  if (static_cast<bool>(a->l) != static_cast<bool>(b->l) || static_cast<bool>(a->r) != static_cast<bool>(b->r))
    return false;
  return (!a->l || equal(a->l, b->l)) && (!a->r || equal(a->r, b->r));
}

struct formula_hash {
  std::size_t operator()(const formula& f) const { return f->hash; }
};
struct formula_eq {
  bool operator()(const formula& a, const formula& b) const { return equal(a, b); }
};

// constructors fold constants bottom-up
inline formula mk_atom(int comp, int prop) { return detail::make_node(op::atom, comp, prop, -1, nullptr, nullptr); }
inline formula mk_xbeta(int comp, int prop, int k) { return detail::make_node(op::xbeta, comp, prop, k, nullptr, nullptr); }
inline formula mk_not(const formula& a) {
  if (is_true(a)) return f_false();
  if (is_false(a)) return f_true();
  return detail::make_node(op::neg, -1, -1, -1, a, nullptr);
}
inline formula mk_and(const formula& a, const formula& b) {
  if (is_false(a) || is_false(b)) return f_false();
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  return detail::make_node(op::conj, -1, -1, -1, a, b);
}
inline formula mk_or(const formula& a, const formula& b) {
  if (is_true(a) || is_true(b)) return f_true();
  if (is_false(a)) return b;
  if (is_false(b)) return a;
  return detail::make_node(op::disj, -1, -1, -1, a, b);
}
inline formula mk_next(const formula& a) { return detail::make_node(op::next, -1, -1, -1, a, nullptr); }
inline formula mk_until(const formula& a, const formula& b) { return detail::make_node(op::until, -1, -1, -1, a, b); }
inline formula mk_globally(const formula& a) { return detail::make_node(op::globally, -1, -1, -1, a, nullptr); }
inline formula mk_eventually(const formula& a) { return detail::make_node(op::eventually, -1, -1, -1, a, nullptr); }

// rebuilds a formula through the folding constructors
inline formula fold(const formula& x) {
  switch (x->kind) {
    case op::neg: return mk_not(fold(x->l));
    case op::conj: return mk_and(fold(x->l), fold(x->r));
    case op::disj: return mk_or(fold(x->l), fold(x->r));
    case op::next: return mk_next(fold(x->l));
    case op::until: return mk_until(fold(x->l), fold(x->r));
    case op::globally: return mk_globally(fold(x->l));
    case op::eventually: return mk_eventually(fold(x->l));
    default: return x;
  }
}

// ---------------------------------------------------------------------------
// printing

inline std::string to_string(const system_model& sys, const formula& x) {
  auto atom = [&](const formula& a) { return sys.component_name(a->comp) + "." + sys.prop_name(a->comp, a->prop); };
  switch (x->kind) {
    case op::t: return "true";
    case op::f: return "false";
    case op::atom: return atom(x);
    case op::xbeta:
      return x->k < 0 ? "Xb(" + atom(x) + ")" : "Xb[" + std::to_string(x->k + 1) + "](" + atom(x) + ")";
    case op::neg: return "!" + to_string(sys, x->l);
    case op::conj: return "(" + to_string(sys, x->l) + " & " + to_string(sys, x->r) + ")";
    case op::disj: return "(" + to_string(sys, x->l) + " | " + to_string(sys, x->r) + ")";
    case op::next: return "X " + to_string(sys, x->l);
    case op::until: return "(" + to_string(sys, x->l) + " U " + to_string(sys, x->r) + ")";
    case op::globally: return "G " + to_string(sys, x->l);
    case op::eventually: return "F " + to_string(sys, x->l);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// parsing
//
//   disj  := conj ('|' conj)*
//   conj  := until ('&' until)*
//   until := unary ('U' until)?
//   unary := ('!' | 'X' | 'G' | 'F') unary | primary
//   primary := true | false | atom | alias | Xb[k](atom) | Xb(atom) | '(' disj ')'

using atom_aliases = std::map<std::string, std::pair<int, int>>;

class formula_parser {
 public:
  formula_parser(const system_model& sys, std::string text, const atom_aliases* aliases)
      : sys_(sys), s_(std::move(text)), aliases_(aliases) {}

  formula parse() {
    auto f = disj();
    skip();
    if (p_ != s_.size()) fail("unexpected '" + s_.substr(p_, 1) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("formula: " + what + " at offset " + std::to_string(p_));
  }
  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }
  // a keyword is a whole word
  bool keyword(const std::string& kw) {
    skip();
    if (s_.compare(p_, kw.size(), kw) != 0) return false;
    std::size_t e = p_ + kw.size();
    if (e < s_.size() && (ident_char(s_[e]) || s_[e] == '.')) return false;
    p_ = e;
    return true;
  }
  std::string ident() {
    skip();
    std::size_t b = p_;
    while (p_ < s_.size() && (ident_char(s_[p_]) || s_[p_] == '.')) ++p_;
    if (b == p_) fail("expected an atom");
    return s_.substr(b, p_ - b);
  }
  std::pair<int, int> resolve(const std::string& name) {
    if (aliases_) {
      auto it = aliases_->find(name);
      if (it != aliases_->end()) return it->second;
    }
    auto dot = name.find('.');
    if (dot == std::string::npos) fail("unknown atom '" + name + "'");
    int i = sys_.component_index(name.substr(0, dot));
    if (i < 0) fail("unknown component in '" + name + "'");
    int p = sys_.prop_index(i, name.substr(dot + 1));
    if (p < 0) fail("unknown proposition in '" + name + "'");
    return {i, p};
  }

  formula disj() {
    auto f = conj();
    while (eat('|')) f = mk_or(f, conj());
    return f;
  }
  formula conj() {
    auto f = until();
    while (eat('&')) f = mk_and(f, until());
    return f;
  }
  formula until() {
    auto f = unary();
    if (keyword("U")) return mk_until(f, until());
    return f;
  }
  formula unary() {
    if (eat('!')) return mk_not(unary());
    skip();
    if (s_.compare(p_, 2, "Xb") == 0 && p_ + 2 < s_.size() && (s_[p_ + 2] == '[' || s_[p_ + 2] == '(')) {
      p_ += 2;
      int k = -1;
      if (eat('[')) {
        skip();
        std::size_t b = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (b == p_) fail("expected a scheduler index");
        k = std::stoi(s_.substr(b, p_ - b)) - 1;
        if (k < 0 || k >= sys_.m()) fail("scheduler index out of range");
        if (!eat(']')) fail("expected ']'");
      }
      if (!eat('(')) fail("expected '('");
      auto [i, p] = resolve(ident());
      if (!eat(')')) fail("expected ')'");
      return mk_xbeta(i, p, k);
    }
    if (keyword("X")) return mk_next(unary());
    if (keyword("G")) return mk_globally(unary());
    if (keyword("F")) return mk_eventually(unary());
    return primary();
  }
  formula primary() {
    if (eat('(')) {
      auto f = disj();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (keyword("true")) return f_true();
    if (keyword("false")) return f_false();
    auto [i, p] = resolve(ident());
    return mk_atom(i, p);
  }

  const system_model& sys_;
  std::string s_;
  std::size_t p_ = 0;
  const atom_aliases* aliases_;
};

inline formula parse_formula(const system_model& sys, const std::string& text, const atom_aliases* aliases = nullptr) {
  return formula_parser(sys, text, aliases).parse();
}

}  // namespace cbsmon
