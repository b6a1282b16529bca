#pragma once

/// @file society_io.hpp
/// Society files: JSON with rationals as "p/q" strings.
///
/// ```json
/// {
///   "title": "optional", "seed": 7,
///   "space": {"kind": "explicit", "states": ["a", "b"], "coords": [["0/1"], ["1/1"]]},
///   "agents": [{"name": "1", "utility": {"a": "0/1", "b": "1/1"}}, ...],
///   "ethical": {"a": "0/1", "b": "2/1"},
///   "nm_profile": {"agents": [{...}, ...], "ethical": {...}},
///   "alt_profile": {"agents": [{...}, ...], "ethical": {...}}
/// }
/// ```
///
/// A product grid space is {"kind": "product-grid", "dims": [{"min", "max",
/// "resolution"}, ...]}; its state ids are the comma-joined coordinates.
/// Emission writes keys in the order above and tables in state order, so
/// parse followed by emit reproduces an emitted file byte for byte.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "utilagg/core.hpp"

namespace utilagg {

using Json = nlohmann::ordered_json;

struct SocietyFile {
  std::optional<std::string> title;
  std::optional<std::uint64_t> seed;
  Society society;
};

namespace io_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

inline const Json& member(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

inline void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) fail(path, "unknown field \"" + it.key() + "\"");
  }
}

inline Rational rational(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

inline std::string string_field(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline StateSpace space(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string kind = string_field(member(j, "kind", path), path + ".kind");
  try {
    if (kind == "explicit") {
      only_keys(j, {"kind", "states", "coords"}, path);
      const Json& st = member(j, "states", path);
      if (!st.is_array() || st.empty()) fail(path + ".states", "expected a nonempty array");
      std::vector<std::string> ids;
      for (std::size_t k = 0; k < st.size(); ++k)
        ids.push_back(string_field(st[k], path + ".states[" + std::to_string(k) + "]"));
      std::vector<std::vector<Rational>> coords;
      if (auto it = j.find("coords"); it != j.end()) {
        if (!it->is_array() || it->size() != ids.size())
          fail(path + ".coords", "expected one coordinate array per state");
        for (std::size_t k = 0; k < it->size(); ++k) {
          const std::string cp = path + ".coords[" + std::to_string(k) + "]";
          if (!(*it)[k].is_array()) fail(cp, "expected an array");
          std::vector<Rational> c;
          for (std::size_t d = 0; d < (*it)[k].size(); ++d)
            c.push_back(rational((*it)[k][d], cp + "[" + std::to_string(d) + "]"));
          coords.push_back(std::move(c));
        }
      }
      return StateSpace::explicit_list(std::move(ids), std::move(coords));
    }
    if (kind == "product-grid") {
      only_keys(j, {"kind", "dims"}, path);
      const Json& ds = member(j, "dims", path);
      if (!ds.is_array() || ds.empty()) fail(path + ".dims", "expected a nonempty array");
      std::vector<GridDimension> dims;
      for (std::size_t k = 0; k < ds.size(); ++k) {
        const std::string dp = path + ".dims[" + std::to_string(k) + "]";
        if (!ds[k].is_object()) fail(dp, "expected an object");
        only_keys(ds[k], {"min", "max", "resolution"}, dp);
        try {
          dims.push_back(GridDimension::make(rational(member(ds[k], "min", dp), dp + ".min"),
                                             rational(member(ds[k], "max", dp), dp + ".max"),
                                             rational(member(ds[k], "resolution", dp), dp + ".resolution")));
        } catch (const DomainError& e) {
          fail(dp, e.what());
        }
      }
      return StateSpace::product_grid(std::move(dims));
    }
  } catch (const DomainError& e) {
    fail(path, e.what());
  } catch (const CapacityError& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "expected \"explicit\" or \"product-grid\", got \"" + kind + "\"");
}

inline UtilityTable table(const Json& j, const StateSpace& sp, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object mapping state ids to rationals");
  std::vector<std::optional<Rational>> vals(sp.size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string kp = path + "[\"" + it.key() + "\"]";
    auto s = sp.find(it.key());
    if (!s) fail(kp, "unknown state");
    vals[*s] = rational(it.value(), kp);
  }
  std::vector<Rational> out;
  out.reserve(vals.size());
  for (State s = 0; s < vals.size(); ++s) {
    if (!vals[s]) fail(path, "missing state \"" + sp.id(s) + "\"");
    out.push_back(std::move(*vals[s]));
  }
  return UtilityTable(std::move(out));
}

inline Profile profile(const Json& j, const StateSpace& sp, std::size_t n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  only_keys(j, {"agents", "ethical"}, path);
  const Json& ag = member(j, "agents", path);
  if (!ag.is_array()) fail(path + ".agents", "expected an array");
  if (ag.size() != n) fail(path + ".agents", "expected " + std::to_string(n) + " tables, got " + std::to_string(ag.size()));
  Profile p;
  for (std::size_t i = 0; i < ag.size(); ++i) p.agents.push_back(table(ag[i], sp, path + ".agents[" + std::to_string(i) + "]"));
  p.ethical = table(member(j, "ethical", path), sp, path + ".ethical");
  return p;
}

inline Json table_json(const UtilityTable& u, const StateSpace& sp) {
  Json j = Json::object();
  for (State s = 0; s < sp.size(); ++s) j[sp.id(s)] = u[s].str();
  return j;
}

inline Json profile_json(const Profile& p, const StateSpace& sp) {
  Json ag = Json::array();
  for (const auto& u : p.agents) ag.push_back(table_json(u, sp));
  return Json{{"agents", std::move(ag)}, {"ethical", table_json(p.ethical, sp)}};
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace io_detail

/// Validated society from JSON text. Throws ParseError with a line/column
/// (syntax) or a field path (schema, values).
inline SocietyFile parse_society(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = io_detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  if (!j.is_object()) io_detail::fail("$", "expected an object");
  io_detail::only_keys(j, {"title", "seed", "space", "agents", "ethical", "nm_profile", "alt_profile"}, "$");

  std::optional<std::string> title;
  if (auto it = j.find("title"); it != j.end()) title = io_detail::string_field(*it, "$.title");
  std::optional<std::uint64_t> seed;
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) io_detail::fail("$.seed", "expected a nonnegative integer");
    seed = it->get<std::uint64_t>();
  }
  StateSpace sp = io_detail::space(io_detail::member(j, "space", "$"), "$.space");

  const Json& ag = io_detail::member(j, "agents", "$");
  if (!ag.is_array()) io_detail::fail("$.agents", "expected an array");
  if (ag.size() < 2) io_detail::fail("$.agents", "a society needs at least two agents, got " + std::to_string(ag.size()));
  Profile base;
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < ag.size(); ++i) {
    const std::string ap = "$.agents[" + std::to_string(i) + "]";
    if (!ag[i].is_object()) io_detail::fail(ap, "expected an object");
    io_detail::only_keys(ag[i], {"name", "utility"}, ap);
    names.push_back(io_detail::string_field(io_detail::member(ag[i], "name", ap), ap + ".name"));
    if (!seen.insert(names.back()).second) io_detail::fail(ap + ".name", "duplicate agent name");
    base.agents.push_back(io_detail::table(io_detail::member(ag[i], "utility", ap), sp, ap + ".utility"));
  }
  base.ethical = io_detail::table(io_detail::member(j, "ethical", "$"), sp, "$.ethical");

  Society soc = Society::from_profile(sp, base, names);
  if (auto it = j.find("nm_profile"); it != j.end()) soc.with_nm(io_detail::profile(*it, sp, base.n(), "$.nm_profile"));
  if (auto it = j.find("alt_profile"); it != j.end())
    soc.with_alt(io_detail::profile(*it, sp, base.n(), "$.alt_profile"));
  return SocietyFile{std::move(title), seed, std::move(soc)};
}

inline SocietyFile load_society(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_society(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Json society_json(const SocietyFile& f) {
  const Society& soc = f.society;
  const StateSpace& sp = soc.space();
  auto base = soc.base_profile();
  if (!base) throw DomainError("only utility-backed societies can be written");
  Json j = Json::object();
  if (f.title) j["title"] = *f.title;
  if (f.seed) j["seed"] = *f.seed;
  Json space = Json::object();
  if (sp.kind() == StateSpace::Kind::product_grid) {
    space["kind"] = "product-grid";
    Json dims = Json::array();
    for (const auto& d : sp.dims())
      dims.push_back(Json{{"min", d.min.str()}, {"max", d.max.str()}, {"resolution", d.resolution.str()}});
    space["dims"] = std::move(dims);
  } else {
    space["kind"] = "explicit";
    space["states"] = Json(std::vector<std::string>(sp.ids().begin(), sp.ids().end()));
    if (sp.has_coords()) {
      Json coords = Json::array();
      for (State s = 0; s < sp.size(); ++s) {
        Json c = Json::array();
        for (const auto& x : sp.coords(s)) c.push_back(x.str());
        coords.push_back(std::move(c));
      }
      space["coords"] = std::move(coords);
    }
  }
  j["space"] = std::move(space);
  Json agents = Json::array();
  for (std::size_t i = 0; i < soc.n(); ++i)
    agents.push_back(Json{{"name", soc.name(i)}, {"utility", io_detail::table_json(base->agents[i], sp)}});
  j["agents"] = std::move(agents);
  j["ethical"] = io_detail::table_json(base->ethical, sp);
  if (soc.nm()) j["nm_profile"] = io_detail::profile_json(*soc.nm(), sp);
  if (soc.alt()) j["alt_profile"] = io_detail::profile_json(*soc.alt(), sp);
  return j;
}

/// Two-space indented JSON with a trailing newline.
inline std::string emit_society(const SocietyFile& f) { return society_json(f).dump(2) + "\n"; }

}  // namespace utilagg
