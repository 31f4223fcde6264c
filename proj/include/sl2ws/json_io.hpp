#pragma once

#include <json.hpp>

#include <map>
#include <set>
#include <string>

#include "diagram.hpp"
#include "laurent.hpp"
#include "qfrac.hpp"
#include "riordan.hpp"
#include "tensor.hpp"

namespace sl2ws {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const LaurentPoly& p) {
  Json j = Json::object();
  for (const auto& [e, c] : p.terms()) j[std::to_string(e)] = to_string(c);
  return j;
}

inline Json to_json(const QFrac& x) {
  Json j;
  j["num"] = to_json(x.num());
  j["qint2_power"] = x.two_power();
  return j;
}

template <class S>
Json to_json(const Tensor<S>& t) {
  Json j;
  Json slots = Json::array();
  for (SlotBasis b : t.slots()) slots.push_back(std::string(to_string(b)));
  j["slots"] = slots;
  Json entries = Json::array();
  for (const auto& [k, v] : t.entries()) {
    Json idx = Json::array();
    for (std::size_t s = 0; s < t.arity(); ++s) idx.push_back(digit(k, s));
    entries.push_back({{"idx", idx}, {"coeff", to_json(v)}});
  }
  j["entries"] = entries;
  return j;
}

inline Json to_json(const JacobiDiagram& d) {
  Json j;
  j["circles"] = d.circles();
  Json leaves = Json::array();
  for (std::size_t i = 0; i < d.leaves().size(); ++i)
    leaves.push_back({{"id", i}, {"label", d.leaves()[i].label}, {"half_edge", d.leaves()[i].half_edge}});
  j["leaves"] = leaves;
  Json tri = Json::array();
  for (std::size_t i = 0; i < d.trivalent().size(); ++i) {
    const auto& c = d.trivalent()[i].cyclic;
    tri.push_back({{"id", d.leaves().size() + i}, {"cyclic", {c[0], c[1], c[2]}}});
  }
  j["trivalent"] = tri;
  Json edges = Json::array();
  for (int h = 0; h < d.half_edge_count(); ++h)
    if (h < d.partner(h)) edges.push_back({h, d.partner(h)});
  j["edges"] = edges;
  return j;
}

inline std::string serialize(const JacobiDiagram& d) { return to_json(d).dump(); }

JacobiDiagram riordan_shorthand(const std::vector<std::vector<int>>& parts);

namespace detail {
inline int get_int(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer())
    throw Error(Errc::SchemaError, std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}
inline std::vector<int> int_list(const Json& j) {
  if (!j.is_array()) throw Error(Errc::SchemaError, "expected an array of integers");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error(Errc::SchemaError, "expected an integer");
    out.push_back(x.get<int>());
  }
  return out;
}
}  // namespace detail

inline JacobiDiagram from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::SchemaError, "diagram must be a JSON object");
  if (j.contains("linear")) return linear_tree(detail::int_list(j["linear"]));
  if (j.contains("riordan")) {
    if (!j["riordan"].is_array()) throw Error(Errc::SchemaError, "riordan must be a list of parts");
    std::vector<std::vector<int>> parts;
    for (const auto& p : j["riordan"]) parts.push_back(detail::int_list(p));
    return riordan_shorthand(parts);
  }
  for (const char* k : {"leaves", "trivalent", "edges"})
    if (!j.contains(k) || !j[k].is_array()) throw Error(Errc::SchemaError, std::string("missing array '") + k + "'");
  const int circles = j.contains("circles") ? detail::get_int(j, "circles") : 0;
  std::set<int> ids;
  std::vector<Leaf> leaves;
  for (const auto& l : j["leaves"]) {
    if (!ids.insert(detail::get_int(l, "id")).second) throw Error(Errc::SchemaError, "duplicate vertex id");
    leaves.push_back({detail::get_int(l, "label"), detail::get_int(l, "half_edge")});
  }
  std::vector<Trivalent> tri;
  for (const auto& t : j["trivalent"]) {
    if (!ids.insert(detail::get_int(t, "id")).second) throw Error(Errc::SchemaError, "duplicate vertex id");
    if (!t.contains("cyclic")) throw Error(Errc::SchemaError, "trivalent vertex without 'cyclic'");
    auto c = detail::int_list(t["cyclic"]);
    if (c.size() != 3) throw Error(Errc::SchemaError, "cyclic order must have 3 half-edges");
    tri.push_back({{c[0], c[1], c[2]}});
  }
  const std::size_t h = leaves.size() + 3 * tri.size();
  std::vector<int> partner(h, -1);
  for (const auto& e : j["edges"]) {
    auto p = detail::int_list(e);
    if (p.size() != 2) throw Error(Errc::SchemaError, "edge must have two half-edges");
    for (int x : p)
      if (x < 0 || static_cast<std::size_t>(x) >= h)
        throw Error(Errc::DanglingHalfEdge, "edge uses unknown half-edge " + std::to_string(x));
    for (int x : p)
      if (partner[static_cast<std::size_t>(x)] != -1)
        throw Error(Errc::DanglingHalfEdge, "half-edge " + std::to_string(x) + " in two edges");
    if (p[0] == p[1]) throw Error(Errc::DanglingHalfEdge, "edge joins a half-edge to itself");
    partner[static_cast<std::size_t>(p[0])] = p[1];
    partner[static_cast<std::size_t>(p[1])] = p[0];
  }
  for (std::size_t x = 0; x < h; ++x)
    if (partner[x] == -1) throw Error(Errc::DanglingHalfEdge, "half-edge " + std::to_string(x) + " in no edge");
  JacobiDiagram d(leaves, tri, partner, circles);
  // every component with vertices needs a leaf
  int count = 0;
  auto comp = components(d, &count);
  std::vector<bool> has_leaf(static_cast<std::size_t>(count), false);
  for (int v = 0; v < d.leaf_count(); ++v) has_leaf[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = true;
  for (bool b : has_leaf)
    if (!b) throw Error(Errc::SchemaError, "component without univalent vertices");
  return d;
}

inline JacobiDiagram parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, e.what());
  }
  return from_json(j);
}

// Forest of ordered linear trees, one per part; the parts must form a Riordan partition.
inline JacobiDiagram riordan_shorthand(const std::vector<std::vector<int>>& parts) {
  if (parts.empty()) throw Error(Errc::SchemaError, "empty partition");
  return riordan_tree(normalized(parts)).diagram;
}

}  // namespace sl2ws
