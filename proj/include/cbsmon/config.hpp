#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "builtin.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "model.hpp"
#include "sim.hpp"

namespace cbsmon {

// ---------------------------------------------------------------------------
// JSON system specs
//
// {"components": [{"id", "ready", "busy", "actions", "internal"?, "initial",
//                  "transitions": [[from, action, to], ...], "props"?: {state: [p, ...]}}],
//  "interactions": [{"id", "parts": [[component, action], ...]}],
//  "schedulers": [{"id", "managed", "initial"?, "transitions"?}]}
//
// a scheduler without transitions gets the eager single-state LTS

namespace detail {

inline std::vector<std::string> str_list(const nlohmann::json& j, const char* key, bool required = true) {
  if (!j.contains(key)) {
    if (required) throw parse_error(std::string("missing key '") + key + "'");
    return {};
  }
  return j.at(key).get<std::vector<std::string>>();
}

inline std::vector<transition> triples(const nlohmann::json& j) {
  std::vector<transition> out;
  for (const auto& t : j) {
    auto v = t.get<std::vector<std::string>>();
    if (v.size() != 3) throw parse_error("a transition needs three entries");
    out.push_back({v[0], v[1], v[2]});
  }
  return out;
}

}  // namespace detail

inline system_spec system_from_json(const nlohmann::json& j) {
  system_spec s;
  try {
    for (const auto& c : j.at("components")) {
      component_spec cs;
      cs.id = c.at("id").get<std::string>();
      cs.ready_states = detail::str_list(c, "ready");
      cs.busy_states = detail::str_list(c, "busy");
      cs.actions = detail::str_list(c, "actions");
      if (c.contains("internal")) cs.internal_action = c.at("internal").get<std::string>();
      cs.initial = c.at("initial").get<std::string>();
      cs.transitions = detail::triples(c.at("transitions"));
      if (c.contains("props"))
        for (const auto& [q, ps] : c.at("props").items())
          for (const auto& p : ps) cs.atomic_props[q].insert(p.get<std::string>());
      s.components.push_back(std::move(cs));
    }
    for (const auto& a : j.at("interactions")) {
      interaction_spec is;
      is.id = a.at("id").get<std::string>();
      for (const auto& p : a.at("parts")) {
        auto v = p.get<std::vector<std::string>>();
        if (v.size() != 2) throw parse_error("an interaction part needs a component and an action");
        is.parts.emplace_back(v[0], v[1]);
      }
      s.interactions.push_back(std::move(is));
    }
    std::vector<bool> eager;
    for (const auto& sc : j.at("schedulers")) {
      scheduler_spec ss;
      ss.id = sc.at("id").get<std::string>();
      ss.managed = detail::str_list(sc, "managed");
      ss.notified = detail::str_list(sc, "notified", false);
      eager.push_back(!sc.contains("transitions"));
      if (!eager.back()) {
        ss.transitions = detail::triples(sc.at("transitions"));
        ss.initial = sc.at("initial").get<std::string>();
      }
      s.schedulers.push_back(std::move(ss));
    }
    system_spec filled = s;
    detail::make_eager(filled);
    for (std::size_t k = 0; k < s.schedulers.size(); ++k)
      if (eager[k]) s.schedulers[k] = filled.schedulers[k];
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("system spec: ") + e.what());
  }
  return s;
}

inline system_spec system_from_json_text(const std::string& text) {
  try {
    return system_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("system spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// ini configs

enum class report_format { text, kv };

struct config {
  std::string model_tag;  // builtin tag, empty for JSON specs
  system_spec spec;
  std::string fault;
  std::string property;
  atom_aliases atoms;  // resolved after the system is built
  std::map<std::string, std::string> atom_text;
  std::string policy = "eager-roundrobin";
  std::string script;       // builtin script name
  std::string script_file;  // or a file, one global action per line
  std::string delivery = "roundrobin";
  std::string delivery_order;
  std::uint64_t seed = 0;
  long steps = -1;
  bool pruning = true;
  bool clock_exchange = false;
  prune_rule rule = prune_rule::single;
  report_format format = report_format::text;
  std::filesystem::path base_dir;
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw parse_error(key + ": expected on/off, got '" + v + "'");
}

template <class T>
T parse_num(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    if constexpr (std::is_unsigned_v<T>)
      if (x < 0) throw std::invalid_argument(v);
    return static_cast<T>(x);
  } catch (const std::exception&) {
    throw parse_error(key + ": expected an integer, got '" + v + "'");
  }
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw parse_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline config parse_config(std::istream& in, const std::filesystem::path& base_dir = ".") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw parse_error(e.message(), static_cast<int>(e.line()));
  }
  static const std::map<std::string, std::set<std::string>> known = {
      {"system", {"builtin", "file", "inline"}},
      {"property", {"formula"}},
      {"atoms", {}},
      {"run", {"policy", "script", "script_file", "delivery", "delivery_order", "seed", "steps", "pruning",
               "prune_rule", "fault", "clock_exchange"}},
      {"output", {"format"}},
  };
  config c;
  c.base_dir = base_dir;
  for (const auto& [sec, body] : tree) {
    auto ks = known.find(sec);
    if (ks == known.end()) throw parse_error("unknown section [" + sec + "]");
    for (const auto& [key, val] : body) {
      std::string where = "[" + sec + "] " + key;
      if (sec != "atoms" && !ks->second.count(key)) throw parse_error("unknown key " + where);
      std::string v = val.data();
      if (sec == "atoms") c.atom_text[key] = v;
      else if (sec == "property") c.property = v;
      else if (sec == "output") {
        if (v == "text") c.format = report_format::text;
        else if (v == "kv") c.format = report_format::kv;
        else throw parse_error(where + ": expected text or kv");
      } else if (sec == "system") {
        if (key == "builtin") c.model_tag = v;
        else if (key == "file") c.spec = system_from_json_text(detail::read_file(base_dir / v));
        else c.spec = system_from_json_text(v);
      } else if (key == "policy") {
        if (v != "eager-roundrobin" && v != "random" && v != "scripted")
          throw parse_error(where + ": expected eager-roundrobin, random or scripted");
        c.policy = v;
      } else if (key == "delivery") {
        if (v != "roundrobin" && v != "random" && v != "emission" && v != "scripted")
          throw parse_error(where + ": expected roundrobin, random, emission or scripted");
        c.delivery = v;
      } else if (key == "script") c.script = v;
      else if (key == "script_file") c.script_file = v;
      else if (key == "delivery_order") c.delivery_order = v;
      else if (key == "seed") c.seed = detail::parse_num<std::uint64_t>(where, v);
      else if (key == "steps") c.steps = detail::parse_num<long>(where, v);
      else if (key == "pruning") c.pruning = detail::parse_bool(where, v);
      else if (key == "clock_exchange") c.clock_exchange = detail::parse_bool(where, v);
      else if (key == "prune_rule") {
        if (v == "single") c.rule = prune_rule::single;
        else if (v == "per-coordinate") c.rule = prune_rule::per_coordinate;
        else throw parse_error(where + ": expected single or per-coordinate");
      } else if (key == "fault") c.fault = v;
    }
  }
  int sources = tree.get_child_optional("system") ? static_cast<int>(tree.get_child("system").size()) : 0;
  if (sources != 1) throw parse_error("[system] needs exactly one of builtin, file, inline");
  if (!c.model_tag.empty()) c.spec = build_model(c.model_tag, c.fault);
  else if (!c.fault.empty()) throw unknown_fault("faults apply only to builtin tpc models");
  return c;
}

inline config load_config(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw parse_error("cannot open " + p.string());
  return parse_config(in, p.parent_path().empty() ? std::filesystem::path(".") : p.parent_path());
}

// [atoms] name = component.prop
inline atom_aliases resolve_atoms(const system_model& sys, const std::map<std::string, std::string>& text) {
  atom_aliases out;
  for (const auto& [name, target] : text) {
    auto dot = target.find('.');
    int i = dot == std::string::npos ? -1 : sys.component_index(target.substr(0, dot));
    int p = i < 0 ? -1 : sys.prop_index(i, target.substr(dot + 1));
    if (p < 0) throw parse_error("[atoms] " + name + ": unknown proposition '" + target + "'");
    out[name] = {i, p};
  }
  return out;
}

inline std::optional<formula> config_property(const system_model& sys, const config& c) {
  if (c.property.empty()) return std::nullopt;
  auto aliases = resolve_atoms(sys, c.atom_text);
  return parse_formula(sys, c.property, &aliases);
}

// number of resource managers of a tpc tag, 3 otherwise
inline int tpc_size(const std::string& tag) {
  if (tag.rfind("tpc(", 0) == 0 && tag.size() > 5) return std::stoi(tag.substr(4, tag.size() - 5));
  return 3;
}

inline scenario config_scenario(const system_model& sys, const config& c) {
  scenario sc;
  sc.seed = c.seed;
  sc.steps = c.steps;
  if (c.policy == "random") sc.policy = policy_kind::random;
  else if (c.policy == "scripted") sc.policy = policy_kind::scripted;
  if (sc.policy == policy_kind::scripted) {
    std::vector<std::string> lines;
    if (!c.script_file.empty()) {
      std::istringstream in(detail::read_file(c.base_dir / c.script_file));
      for (std::string l; std::getline(in, l);) lines.push_back(l);
    } else if (!c.script.empty()) {
      lines = builtin_script(c.script, tpc_size(c.model_tag));
    } else if (!c.fault.empty()) {
      lines = builtin_script(fault_script(c.fault), tpc_size(c.model_tag));
    } else {
      throw parse_error("[run] policy scripted needs script or script_file");
    }
    sc.script = parse_script(sys, lines);
  }
  if (c.delivery == "random") sc.delivery = delivery_kind::random;
  else if (c.delivery == "emission") sc.delivery = delivery_kind::emission;
  else if (c.delivery == "scripted") {
    sc.delivery = delivery_kind::scripted;
    std::istringstream is(c.delivery_order);
    for (std::string tok; is >> tok;) sc.delivery_order.push_back(detail::parse_num<int>("delivery_order", tok) - 1);
  }
  sc.controller.exchange_on_beta = c.clock_exchange;
  sc.monitor.pruning = c.pruning;
  sc.monitor.rule = c.rule;
  sc.monitor.phi = config_property(sys, c);
  return sc;
}

}  // namespace cbsmon
