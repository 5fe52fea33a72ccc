#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace cbsmon {

namespace detail {

// ready --action--> fresh busy state --beta--> next ready
inline void add_step(component_spec& c, const std::string& from, const std::string& action, const std::string& to) {
  std::string busy = from + "_" + action;
  c.busy_states.push_back(busy);
  c.transitions.push_back({from, action, busy});
  c.transitions.push_back({busy, c.internal_action, to});
  if (std::find(c.actions.begin(), c.actions.end(), action) == c.actions.end()) c.actions.push_back(action);
}

// one control state accepting every managed interaction and every internal
// action in scope
inline void make_eager(system_spec& s) {
  std::map<std::string, std::vector<std::string>> parts_of;
  for (const auto& a : s.interactions)
    for (const auto& [c, act] : a.parts) parts_of[a.id].push_back(c);
  for (auto& sc : s.schedulers) {
    sc.initial = "s";
    sc.transitions.clear();
    std::vector<std::string> scope;
    for (const auto& a : sc.managed) {
      sc.transitions.push_back({"s", a, "s"});
      for (const auto& c : parts_of[a])
        if (std::find(scope.begin(), scope.end(), c) == scope.end()) scope.push_back(c);
    }
    std::sort(scope.begin(), scope.end());
    for (const auto& c : scope) sc.transitions.push_back({"s", beta_label(c), "s"});
  }
}

}  // namespace detail

// three tanks, two schedulers, tank2 shared
inline system_spec tanks3() {
  system_spec s;
  for (int i = 1; i <= 3; ++i) {
    std::string n = std::to_string(i);
    component_spec c;
    c.id = "tank" + n;
    c.ready_states = {"d" + n, "f" + n};
    c.initial = "d" + n;
    c.busy_states = {"d" + n + "_bot", "f" + n + "_bot"};
    c.actions = {"fil", "drain"};
    c.transitions = {{"d" + n, "fil", "d" + n + "_bot"},
                     {"d" + n + "_bot", "beta", "f" + n},
                     {"f" + n, "drain", "f" + n + "_bot"},
                     {"f" + n + "_bot", "beta", "d" + n}};
    s.components.push_back(c);
  }
  s.interactions = {{"drain1", {{"tank1", "drain"}}},
                    {"fil12", {{"tank1", "fil"}, {"tank2", "fil"}}},
                    {"drain23", {{"tank2", "drain"}, {"tank3", "drain"}}},
                    {"fil3", {{"tank3", "fil"}}}};
  auto sched = [](const std::string& id, const std::string& single, const std::string& joint, const std::string& own) {
    scheduler_spec sc;
    sc.id = id;
    sc.managed = {single, joint};
    sc.initial = "l0";
    std::string b2 = beta_label("tank2"), bo = beta_label(own);
    sc.transitions = {{"l0", b2, "l0"},     {"l1", b2, "l1"},     {"l1", bo, "l0"},
                      {"l2", b2, "l1"},     {"l3", b2, "l0"},     {"l2", bo, "l3"},
                      {"l3", single, "l2"}, {"l0", single, "l1"}, {"l0", joint, "l2"}};
    return sc;
  };
  s.schedulers = {sched("S1", "drain1", "fil12", "tank1"), sched("S2", "fil3", "drain23", "tank3")};
  return s;
}

// four components running A1 A2 A1; comp r's A2 moves to the next scheduler
// for r < shared
inline system_spec sweep(int shared) {
  if (shared < 0 || shared > 4) throw unknown_model("sweep(" + std::to_string(shared) + "): expected 0..4");
  system_spec s;
  for (int i = 1; i <= 4; ++i) {
    component_spec c;
    c.id = "comp" + std::to_string(i);
    c.ready_states = {"r0", "r1", "r2", "r3"};
    c.initial = "r0";
    detail::add_step(c, "r0", "A1", "r1");
    detail::add_step(c, "r1", "A2", "r2");
    detail::add_step(c, "r2", "A1", "r3");
    s.components.push_back(c);
  }
  for (int i = 1; i <= 4; ++i) {
    std::string c = "comp" + std::to_string(i);
    s.interactions.push_back({"c" + std::to_string(i) + "_a1", {{c, "A1"}}});
    s.interactions.push_back({"c" + std::to_string(i) + "_a2", {{c, "A2"}}});
  }
  for (int j = 1; j <= 4; ++j) s.schedulers.push_back({"sched" + std::to_string(j), {}, {}, {}, ""});
  for (int i = 0; i < 4; ++i) {
    s.schedulers[i].managed.push_back("c" + std::to_string(i + 1) + "_a1");
    int owner = i < shared ? (i + 1) % 4 : i;
    s.schedulers[owner].managed.push_back("c" + std::to_string(i + 1) + "_a2");
  }
  detail::make_eager(s);
  return s;
}

enum class tpc_variant { normal, commit_after_abort, skip_global_commit };

// client, transaction manager tm and n resource managers; scheduler s0 runs
// the global steps, scheduler si the votes of rm i
inline system_spec tpc(int n, tpc_variant v = tpc_variant::normal) {
  if (n < 1 || n > 8) throw unknown_model("tpc(" + std::to_string(n) + "): expected 1..8");
  system_spec s;
  component_spec client;
  client.id = "client";
  client.ready_states = {"c_idle", "c_wait"};
  client.initial = "c_idle";
  detail::add_step(client, "c_idle", "request", "c_wait");
  detail::add_step(client, "c_wait", "result", "c_idle");
  s.components.push_back(client);

  component_spec tm;
  tm.id = "tm";
  tm.ready_states = {"t_idle", "t_collect", "t_ga", "t_gc"};
  tm.initial = "t_idle";
  tm.atomic_props["t_ga"] = {"GlobalAbort"};
  tm.atomic_props["t_gc"] = {"GlobalCommit"};
  detail::add_step(tm, "t_idle", "request", "t_collect");
  detail::add_step(tm, "t_collect", "abort", "t_ga");
  detail::add_step(tm, "t_ga", "ack_abort", "t_ga");
  detail::add_step(tm, "t_collect", "commit", "t_gc");
  detail::add_step(tm, "t_gc", "finish", "t_idle");
  detail::add_step(tm, "t_ga", "finish", "t_idle");
  if (v == tpc_variant::skip_global_commit) detail::add_step(tm, "t_collect", "skip", "t_idle");
  s.components.push_back(tm);

  for (int i = 1; i <= n; ++i) {
    component_spec rm;
    rm.id = "rm" + std::to_string(i);
    rm.ready_states = {"r_idle", "r_work", "r_lc", "r_la", "r_committed"};
    rm.initial = "r_idle";
    rm.atomic_props["r_lc"] = {"LocalCommit"};
    rm.atomic_props["r_la"] = {"LocalAbort"};
    detail::add_step(rm, "r_idle", "prepare", "r_work");
    detail::add_step(rm, "r_work", "vote_commit", "r_lc");
    detail::add_step(rm, "r_work", "vote_abort", "r_la");
    detail::add_step(rm, "r_lc", "commit", "r_committed");
    if (v == tpc_variant::commit_after_abort) detail::add_step(rm, "r_la", "commit", "r_committed");
    for (const char* from : {"r_committed", "r_la", "r_lc", "r_work"}) detail::add_step(rm, from, "finish", "r_idle");
    s.components.push_back(rm);
  }

  auto all_rm = [&](const std::string& act) {
    std::vector<std::pair<std::string, std::string>> p;
    for (int i = 1; i <= n; ++i) p.emplace_back("rm" + std::to_string(i), act);
    return p;
  };
  auto with = [](std::vector<std::pair<std::string, std::string>> head,
                 const std::vector<std::pair<std::string, std::string>>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  s.schedulers.push_back({"s0", {}, {}, {}, ""});
  s.interactions.push_back({"request", with({{"client", "request"}, {"tm", "request"}}, all_rm("prepare"))});
  s.interactions.push_back({"global_commit", with({{"tm", "commit"}}, all_rm("commit"))});
  s.interactions.push_back({"result", with({{"client", "result"}, {"tm", "finish"}}, all_rm("finish"))});
  s.schedulers[0].managed = {"request", "global_commit", "result"};
  if (v == tpc_variant::skip_global_commit) {
    s.interactions.push_back({"global_skip", with({{"client", "result"}, {"tm", "skip"}}, all_rm("finish"))});
    s.schedulers[0].managed.push_back("global_skip");
  }
  for (int i = 1; i <= n; ++i) {
    std::string k = std::to_string(i), rm = "rm" + k;
    s.interactions.push_back({"vote_commit_" + k, {{rm, "vote_commit"}}});
    if (v == tpc_variant::commit_after_abort)
      s.interactions.push_back({"vote_abort_" + k, {{rm, "vote_abort"}}});
    else
      s.interactions.push_back({"vote_abort_" + k, {{rm, "vote_abort"}, {"tm", "abort"}}});
    s.interactions.push_back({"vote_abort_late_" + k, {{rm, "vote_abort"}, {"tm", "ack_abort"}}});
    s.schedulers.push_back({"s" + k, {"vote_commit_" + k, "vote_abort_" + k, "vote_abort_late_" + k}, {}, {}, ""});
  }
  detail::make_eager(s);
  return s;
}

inline std::string tpc_phi2(int n) {
  std::string body;
  for (int i = 1; i <= n; ++i) {
    std::string r = "rm" + std::to_string(i);
    if (i > 1) body += " & ";
    body += "(!" + r + ".LocalAbort | (X(!" + r + ".LocalAbort & !" + r + ".LocalCommit) U tm.GlobalAbort))";
  }
  return "G(" + body + ")";
}

inline std::string tpc_phi3(int n) {
  std::string all_lc, none;
  for (int i = 1; i <= n; ++i) {
    std::string r = "rm" + std::to_string(i);
    if (i > 1) {
      all_lc += " & ";
      none += " & ";
    }
    all_lc += r + ".LocalCommit";
    none += "!" + r + ".LocalAbort & !" + r + ".LocalCommit";
  }
  return "G(!(" + all_lc + ") | (X(" + none + ") U tm.GlobalCommit))";
}

// "tanks3", "sweep(k)", "tpc(n)"; faults select a tpc variant
inline system_spec build_model(const std::string& tag, const std::string& fault = "") {
  auto arg = [&](const std::string& head) -> int {
    if (tag.size() < head.size() + 3 || tag.compare(0, head.size() + 1, head + "(") != 0 || tag.back() != ')')
      return -1;
    std::string num = tag.substr(head.size() + 1, tag.size() - head.size() - 2);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) return -1;
    return std::stoi(num);
  };
  if (!fault.empty() && arg("tpc") < 0) throw unknown_fault("fault '" + fault + "' applies only to tpc models");
  if (tag == "tanks3") return tanks3();
  if (int k = arg("sweep"); k >= 0) return sweep(k);
  if (int n = arg("tpc"); n >= 0) {
    if (fault.empty()) return tpc(n);
    if (fault == "commit-after-abort") return tpc(n, tpc_variant::commit_after_abort);
    if (fault == "skip-global-commit") return tpc(n, tpc_variant::skip_global_commit);
    throw unknown_fault("unknown fault '" + fault + "'");
  }
  throw unknown_model("unknown model '" + tag + "'");
}

// ---------------------------------------------------------------------------
// scripts: one global action per line, elements separated by blanks,
// internal actions written beta:<component>

inline global_action parse_script_step(const system_model& sys, const std::string& line, int line_no = 0) {
  global_action ga;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    if (tok.rfind("beta:", 0) == 0) {
      int i = sys.component_index(tok.substr(5));
      if (i < 0) throw parse_error("unknown component in '" + tok + "'", line_no);
      ga.beta.push_back(i);
    } else {
      int a = sys.interaction_index(tok);
      if (a < 0) throw parse_error("unknown interaction '" + tok + "'", line_no);
      ga.alpha.push_back(a);
    }
  }
  std::sort(ga.alpha.begin(), ga.alpha.end());
  std::sort(ga.beta.begin(), ga.beta.end());
  return ga;
}

inline std::vector<global_action> parse_script(const system_model& sys, const std::vector<std::string>& lines) {
  std::vector<global_action> out;
  int no = 0;
  for (const auto& l : lines) {
    ++no;
    auto b = l.find_first_not_of(" \t\r");
    if (b == std::string::npos || l[b] == '#') continue;
    out.push_back(parse_script_step(sys, l, no));
  }
  return out;
}

namespace detail {

// "C3.A1 b3 ..." shorthand of the sweep logs: one action per token
inline std::vector<std::string> sweep_log(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok[0] == 'b') out.push_back("beta:comp" + tok.substr(1));
    else out.push_back("c" + tok.substr(1, 1) + "_a" + tok.substr(4, 1));
  }
  return out;
}

inline std::vector<std::string> tpc_round(int n, const std::vector<std::string>& votes, const std::string& decision,
                                          bool abort_moves_tm = true) {
  std::vector<std::string> out;
  std::string all_beta;
  for (int i = 1; i <= n; ++i) all_beta += " beta:rm" + std::to_string(i);
  out.push_back("request");
  out.push_back("beta:client beta:tm" + all_beta);
  for (const auto& v : votes) {
    out.push_back(v);
    std::string rm = "rm" + v.substr(v.rfind('_') + 1);
    bool with_tm = abort_moves_tm && v.find("abort") != std::string::npos;
    out.push_back(std::string("beta:") + rm + (with_tm ? " beta:tm" : ""));
  }
  if (!decision.empty()) {
    out.push_back(decision);
    out.push_back("beta:tm" + all_beta + (decision == "global_skip" ? " beta:client" : ""));
  }
  if (decision != "global_skip") {
    out.push_back("result");
    out.push_back("beta:client beta:tm" + all_beta);
  }
  return out;
}

}  // namespace detail

// schedules for the sweep settings; each reaches the event clocks behind the
// published lattice sizes
inline std::vector<std::string> sweep_script(int shared) {
  static const char* logs[] = {
      "C1.A1 b1 C1.A2 b1 C1.A1 b1 C2.A1 b2 C2.A2 b2 C2.A1 b2 C3.A1 b3 C3.A2 b3 C3.A1 b3 C4.A1 b4 C4.A2 b4 C4.A1 b4",
      "C3.A1 C4.A1 C2.A1 b2 C2.A2 b3 b4 b2 C2.A1 C4.A2 b4 C4.A1 C3.A2 b4 C1.A1 b1 b2 C1.A2 b3 C3.A1 b1 C1.A1 b3 b1",
      "C3.A1 b3 C1.A1 C4.A1 C2.A1 C3.A2 b3 b1 b4 C1.A2 b1 C3.A1 b3 C1.A1 b1 C4.A2 b2 C2.A2 b2 b4 C2.A1 C4.A1 b2 b4",
      "C4.A1 C2.A1 C1.A1 b1 C3.A1 C1.A2 b2 b1 C2.A2 b2 b4 C4.A2 b4 C4.A1 C2.A1 C1.A1 b1 b3 b4 C3.A2 b3 b2 C3.A1 b3",
      "C4.A1 C2.A1 C3.A1 b2 C1.A1 b4 b1 C4.A2 C2.A2 b3 C1.A2 b2 C3.A2 C2.A1 b4 C4.A1 b2 b4 b3 C3.A1 b3 b1 C1.A1 b1",
  };
  if (shared < 0 || shared > 4) throw unknown_model("no sweep script for setting " + std::to_string(shared));
  return detail::sweep_log(logs[shared]);
}

// named schedules; tpc names take the resource manager count
inline std::vector<std::string> builtin_script(const std::string& name, int n = 3) {
  if (name == "t1") return {"fil12", "beta:tank1", "drain1 fil3", "beta:tank2"};
  if (name == "t2") return {"fil12 fil3", "beta:tank3", "beta:tank2", "drain23 beta:tank1"};
  if (name.rfind("sweep-", 0) == 0 && name.size() == 7 && name[6] >= '0' && name[6] <= '4')
    return sweep_script(name[6] - '0');
  auto votes = [&](const std::string& kind, int abort_at) {
    std::vector<std::string> v;
    bool aborted = false;
    for (int i = 1; i <= n; ++i) {
      std::string k = std::to_string(i);
      if (i == abort_at) {
        v.push_back((kind == "late" && aborted ? "vote_abort_late_" : "vote_abort_") + k);
        aborted = true;
      } else {
        v.push_back("vote_commit_" + k);
      }
    }
    return v;
  };
  auto cat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  if (name == "tpc-commit")  // one committed round, one aborted round
    return cat(detail::tpc_round(n, votes("", 0), "global_commit"), detail::tpc_round(n, votes("", 2), ""));
  if (name == "tpc-commit-after-abort")
    return cat(detail::tpc_round(n, votes("", 2), "global_commit", false),
               detail::tpc_round(n, votes("", 0), "global_commit", false));
  if (name == "tpc-skip-global-commit")
    return cat(detail::tpc_round(n, votes("", 0), "global_skip"), detail::tpc_round(n, votes("", 0), "global_commit"));
  throw unknown_model("unknown script '" + name + "'");
}

// the script that exhibits a fault in the matching tpc variant
inline std::string fault_script(const std::string& fault) {
  if (fault == "commit-after-abort") return "tpc-commit-after-abort";
  if (fault == "skip-global-commit") return "tpc-skip-global-commit";
  throw unknown_fault("unknown fault '" + fault + "'");
}

}  // namespace cbsmon
