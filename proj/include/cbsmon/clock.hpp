#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cbsmon {

// entry j counts the interactions executed by scheduler j (0-based)
using vclock = std::vector<std::uint32_t>;

inline void check_len(const vclock& a, const vclock& b) {
  if (a.size() != b.size())
    throw length_mismatch("vector clocks of length " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
}

inline vclock vc_max(const vclock& a, const vclock& b) {
  check_len(a, b);
  vclock r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] > b[i] ? a[i] : b[i];
  return r;
}

inline vclock vc_min(const vclock& a, const vclock& b) {
  check_len(a, b);
  vclock r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] < b[i] ? a[i] : b[i];
  return r;
}

// a <= b everywhere and a < b somewhere
inline bool vc_less(const vclock& a, const vclock& b) {
  check_len(a, b);
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

inline bool vc_leq(const vclock& a, const vclock& b) {
  check_len(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// b exceeds a in every coordinate
inline bool vc_dominates(const vclock& b, const vclock& a) {
  check_len(a, b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] <= a[i]) return false;
  return true;
}

inline vclock vc_inc(vclock a, std::size_t j) {
  if (j >= a.size()) throw length_mismatch("clock index " + std::to_string(j) + " out of range");
  ++a[j];
  return a;
}

inline std::uint64_t vc_sum(const vclock& a) {
  std::uint64_t s = 0;
  for (auto c : a) s += c;
  return s;
}

// exactly one index with a = b+1, exactly one with b = a+1, equal elsewhere
inline bool j_related(const vclock& a, const vclock& b) {
  check_len(a, b);
  int up = 0, down = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (a[i] == b[i] + 1) ++up;
    else if (b[i] == a[i] + 1) ++down;
    else return false;
  }
  return up == 1 && down == 1;
}

inline std::string to_string(const vclock& c, char sep = ',') {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << sep;
    os << c[i];
  }
  return os.str();
}

inline std::string tuple_string(const vclock& c) { return "(" + to_string(c) + ")"; }

}  // namespace cbsmon
