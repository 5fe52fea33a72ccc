#pragma once

#include <ostream>
#include <string>

#include "clock.hpp"
#include "lattice.hpp"

namespace cbsmon {

// one key per line, stable order
inline void write_kv(std::ostream& os, const lattice_report& r) {
  os << "observed_events=" << r.observed_events << "\n"
     << "live_nodes=" << r.live_nodes << "\n"
     << "removed_nodes=" << r.removed_nodes << "\n"
     << "created_nodes=" << r.created_nodes << "\n"
     << "frontier_clock=" << to_string(r.frontier_clock) << "\n"
     << "path_count=" << r.path_count << "\n"
     << "formulas_false=" << r.formulas_false << "\n"
     << "formulas_open=" << r.formulas_open << "\n"
     << "formulas_true=" << r.formulas_true << "\n";
}

inline void write_text(std::ostream& os, const lattice_report& r) {
  os << "observed events: " << r.observed_events << "\n"
     << "nodes: " << r.live_nodes << " live, " << r.removed_nodes << " removed, " << r.created_nodes << " created\n"
     << "frontier clock: " << tuple_string(r.frontier_clock) << "\n"
     << "paths: " << r.path_count << "\n";
  if (r.frontier_formulas.empty()) {
    os << "no property\n";
    return;
  }
  os << "verdicts: " << r.formulas_false << " false, " << r.formulas_open << " open, " << r.formulas_true
     << " true\n";
  os << "frontier formulas:\n";
  for (const auto& [f, n] : r.frontier_formulas) os << "  " << n << " x " << f << "\n";
}

}  // namespace cbsmon
