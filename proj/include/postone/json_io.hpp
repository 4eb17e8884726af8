// json_io.hpp --- JSON readers/writers for the file formats the CLI speaks.

#pragma once

#include <fstream>

#include "json.hpp"
#include "postone/cellspace.hpp"
#include "postone/corpus.hpp"

namespace postone {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("BadInput", "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail("BadInput", "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline std::string load_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("BadInput", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- PoSystem: {"elements":[...], "lt":[[p,q],...]} ---------------------------

inline Json to_json(const PoSystem& p) {
  Json j;
  j["elements"] = p.names();
  Json lt = Json::array();
  for (const auto& [a, b] : p.relation_pairs()) lt.push_back(Json::array({a, b}));
  j["lt"] = lt;
  return j;
}

inline PoSystem posystem_from_json(const Json& j) {
  if (!j.contains("elements") || !j.contains("lt"))
    fail("BadInput", "a PO system needs 'elements' and 'lt'");
  std::vector<std::string> elems = j["elements"].get<std::vector<std::string>>();
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& pr : j["lt"]) {
    if (!pr.is_array() || pr.size() != 2) fail("BadInput", "'lt' entries must be pairs");
    pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
  }
  return PoSystem::generate(std::move(elems), pairs);
}

// --- Morphism: {"map":{...},"source":...,"target":...} -------------------------

inline Json to_json(const Morphism& m) {
  Json j;
  j["source"] = to_json(m.source);
  j["target"] = to_json(m.target);
  Json map = Json::object();
  for (int i = 0; i < m.source.size(); ++i) map[m.source.name(i)] = m.target.name(m.map[i]);
  j["map"] = map;
  return j;
}

inline Morphism morphism_from_json(const Json& j) {
  if (!j.contains("map") || !j.contains("source") || !j.contains("target"))
    fail("BadInput", "a morphism needs 'map', 'source' and 'target'");
  Morphism m{posystem_from_json(j["source"]), posystem_from_json(j["target"]), {}};
  m.map.assign(m.source.size(), -1);
  for (const auto& [k, v] : j["map"].items())
    m.map[m.source.index_or_fail(k)] = m.target.index_or_fail(v.get<std::string>());
  for (int i = 0; i < m.source.size(); ++i)
    if (m.map[i] < 0) fail("BadInput", "morphism map misses element '" + m.source.name(i) + "'");
  return m;
}

// --- ExtendedPoSystem: {"poset":..., "L":[...], "f":{...}} ----------------------

inline Json to_json(const ExtendedPoSystem& e) {
  Json j;
  j["poset"] = to_json(e.poset);
  std::vector<std::string> lower;
  for_each_bit(e.lower, [&](int i) { lower.push_back(e.poset.name(i)); });
  j["L"] = lower;
  Json f = Json::object();
  for (const auto& [k, v] : e.finite_sizes) f[e.poset.name(k)] = v;
  j["f"] = f;
  return j;
}

inline ExtendedPoSystem eps_from_json(const Json& j) {
  if (!j.contains("poset")) fail("BadInput", "an extended system needs 'poset'");
  ExtendedPoSystem e;
  e.poset = posystem_from_json(j["poset"]);
  if (j.contains("L"))
    for (const auto& n : j["L"]) e.lower |= bit(e.poset.index_or_fail(n.get<std::string>()));
  if (j.contains("f"))
    for (const auto& [k, v] : j["f"].items()) e.finite_sizes[e.poset.index_or_fail(k)] = v.get<int>();
  return e;
}

// --- CellModel: eps plus optional overrides -------------------------------------

inline Json to_json_model(const CellModel& m) {
  Json j;
  j["eps"] = to_json(m.eps());
  if (!m.data().cycle_override.empty()) {
    Json so = Json::object();
    for (const auto& [t, cyc] : m.data().cycle_override) {
      std::vector<std::string> names;
      for (int c : cyc) names.push_back(m.poset().name(c));
      so[m.poset().name(t)] = names;
    }
    j["schedule_overrides"] = so;
  }
  if (!m.data().child_override.empty()) {
    Json co = Json::array();
    for (const auto& [addr, t] : m.data().child_override)
      co.push_back(Json{{"cell", addr.str()}, {"type", m.poset().name(t)}});
    j["child_overrides"] = co;
  }
  return j;
}

inline CellModel model_from_json(const Json& j) {
  if (!j.contains("eps")) fail("BadInput", "a model needs 'eps'");
  ExtendedPoSystem e = eps_from_json(j["eps"]);
  std::map<int, std::vector<int>> cycles;
  if (j.contains("schedule_overrides"))
    for (const auto& [k, v] : j["schedule_overrides"].items()) {
      std::vector<int> cyc;
      for (const auto& n : v) cyc.push_back(e.poset.index_or_fail(n.get<std::string>()));
      cycles[e.poset.index_or_fail(k)] = cyc;
    }
  std::map<CellAddr, int> children;
  if (j.contains("child_overrides"))
    for (const auto& entry : j["child_overrides"]) {
      CellAddr a = parse_cell_addr(entry.at("cell").get<std::string>());
      children[a] = e.poset.index_or_fail(entry.at("type").get<std::string>());
    }
  return build_model(e, std::move(cycles), std::move(children));
}

// --- compact opens, reports -------------------------------------------------------

inline CompactOpen open_from_paths(const CellModel& m, const std::vector<std::string>& paths) {
  std::vector<Tail> tails;
  for (const auto& p : paths) {
    int from = 1;
    CellAddr a = parse_cell_addr(p, &from);
    tails.push_back({a, from});
  }
  return make_open(m, std::move(tails));
}

inline Json to_json(const CompactOpen& a) {
  Json arr = Json::array();
  for (const auto& t : a.tails) arr.push_back(t.str());
  return arr;
}

inline Json to_json(const VerifyReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations)
    v.push_back(Json{
        {"axiom", x.axiom}, {"kind", x.kind}, {"address", x.address}, {"detail", x.detail}});
  return Json{{"violations", v}};
}

inline Json to_json(const NormalForm& nf) {
  Json j;
  j["poset"] = to_json(nf.simplified);
  Json counts = Json::object();
  for (const auto& [k, v] : nf.counts) counts[nf.simplified.name(k)] = v;
  j["counts"] = counts;
  return j;
}

inline Json to_json(const corpus::Report& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks)
    checks.push_back(
        Json{{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok}});
  return Json{{"name", rep.name}, {"checks", checks}, {"ok", rep.ok()}};
}

inline Json to_json(const QueryResult& r) {
  Json j{{"value", r.value.str()}, {"bound", r.value.at_bound}};
  if (!r.witness_ideal.empty()) j["witness_ideal"] = r.witness_ideal;
  if (!r.witness_sup.empty()) j["witness_sup"] = r.witness_sup;
  return j;
}

}  // namespace postone
