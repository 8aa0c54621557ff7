#include "flowspace/json_io.hpp"

#include <fstream>

namespace flowspace {

namespace {

void require_keys(const Json& j, const char* what, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  for (auto& [key, value] : j.items()) {
    static_cast<void>(value);
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw InputError(std::string(what) + ": unknown key '" + key + "'");
  }
}

const Json& field(const Json& j, const char* what, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string(what) + ": missing key '" + key + "'");
  return *it;
}

int state_ref(const DiscreteFlow& a, const Json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    for (int s = 0; s < a.nstates(); ++s) {
      if (a.states[s] == name) return s;
    }
    throw InputError(where + ": unknown state '" + name + "'");
  }
  if (j.is_number_integer()) {
    int s = j.get<int>();
    if (s < 0 || s >= a.nstates()) throw InputError(where + ": state index out of range");
    return s;
  }
  throw InputError(where + ": state must be a name or an index");
}

int path_ref(const DiscreteFlow& a, const Json& j, const std::string& where) {
  if (j.is_string()) {
    int p = a.path_index(j.get<std::string>());
    if (p < 0) throw InputError(where + ": unknown path '" + j.get<std::string>() + "'");
    return p;
  }
  if (j.is_number_integer()) {
    int p = j.get<int>();
    if (p < 0 || p >= a.npaths()) throw InputError(where + ": path index out of range");
    return p;
  }
  throw InputError(where + ": path must be an id or an index");
}

}  // namespace

DiscreteFlow flow_from_json(const Json& j) {
  require_keys(j, "flow", {"states", "paths", "compose", "truncated"});

  DiscreteFlow a;
  const Json& states = field(j, "flow", "states");
  if (!states.is_array()) throw InputError("flow: 'states' must be an array");
  for (const Json& s : states) {
    if (!s.is_string()) throw InputError("flow: state names must be strings");
    a.states.push_back(s.get<std::string>());
  }

  const Json& paths = field(j, "flow", "paths");
  if (!paths.is_array()) throw InputError("flow: 'paths' must be an array");
  for (const Json& p : paths) {
    require_keys(p, "flow path", {"id", "src", "tgt"});
    const Json& id = field(p, "flow path", "id");
    if (!id.is_string()) throw InputError("flow: path ids must be strings");
    a.paths.push_back({id.get<std::string>(), state_ref(a, field(p, "flow path", "src"), "flow"),
                       state_ref(a, field(p, "flow path", "tgt"), "flow")});
  }

  if (auto it = j.find("truncated"); it != j.end()) {
    if (!it->is_boolean()) throw InputError("flow: 'truncated' must be a boolean");
    a.truncated = it->get<bool>();
  }

  a.compose.assign(a.npaths(), std::vector<int>(a.npaths(), -1));
  const Json& compose = field(j, "flow", "compose");
  if (!compose.is_array()) throw InputError("flow: 'compose' must be an array of triples");
  for (const Json& t : compose) {
    if (!t.is_array() || t.size() != 3) {
      throw InputError("flow: each compose entry must be a [p, q, r] triple");
    }
    int p = path_ref(a, t[0], "flow compose");
    int q = path_ref(a, t[1], "flow compose");
    int r = path_ref(a, t[2], "flow compose");
    if (a.compose[p][q] >= 0 && a.compose[p][q] != r) {
      throw InputError("flow: conflicting compose entries for '" + a.paths[p].id + "' . '" +
                       a.paths[q].id + "'");
    }
    a.compose[p][q] = r;
  }
  validate_flow(a);
  return a;
}

Json flow_to_json(const DiscreteFlow& a) {
  Json j;
  j["states"] = a.states;
  j["paths"] = Json::array();
  for (const FlowPath& p : a.paths) {
    j["paths"].push_back({{"id", p.id}, {"src", a.states[p.src]}, {"tgt", a.states[p.tgt]}});
  }
  j["compose"] = Json::array();
  for (int p = 0; p < a.npaths(); ++p) {
    for (int q = 0; q < a.npaths(); ++q) {
      if (a.compose[p][q] >= 0) {
        j["compose"].push_back({a.paths[p].id, a.paths[q].id, a.paths[a.compose[p][q]].id});
      }
    }
  }
  if (a.truncated) j["truncated"] = true;
  return j;
}

GlobAttachment attachment_from_json(const DiscreteFlow& a, const Json& j) {
  require_keys(j, "attachment", {"g0", "g1", "boundary", "cells", "attach", "incl"});
  int g0 = state_ref(a, field(j, "attachment", "g0"), "attachment");
  int g1 = state_ref(a, field(j, "attachment", "g1"), "attachment");

  auto names = [&](const char* key) {
    const Json& arr = field(j, "attachment", key);
    if (!arr.is_array()) throw InputError(std::string("attachment: '") + key + "' must be an array");
    std::vector<std::string> out;
    for (const Json& s : arr) {
      if (!s.is_string()) throw InputError(std::string("attachment: '") + key + "' entries must be strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  std::vector<std::string> boundary = names("boundary");
  std::vector<std::string> cells = names("cells");

  const Json& attach = field(j, "attachment", "attach");
  const Json& incl = field(j, "attachment", "incl");
  if (!attach.is_object() || !incl.is_object()) {
    throw InputError("attachment: 'attach' and 'incl' must map boundary names");
  }
  auto boundary_index = [&](const std::string& name) {
    for (size_t b = 0; b < boundary.size(); ++b) {
      if (boundary[b] == name) return static_cast<int>(b);
    }
    throw InputError("attachment: '" + name + "' is not a boundary element");
  };
  std::vector<int> attachMap(boundary.size(), -1), inclMap(boundary.size(), -1);
  for (auto& [key, value] : attach.items()) {
    attachMap[boundary_index(key)] = path_ref(a, value, "attachment attach");
  }
  for (auto& [key, value] : incl.items()) {
    int b = boundary_index(key);
    if (!value.is_string()) throw InputError("attachment: incl values must be cell names");
    const std::string cell = value.get<std::string>();
    for (size_t z = 0; z < cells.size(); ++z) {
      if (cells[z] == cell) inclMap[b] = static_cast<int>(z);
    }
    if (inclMap[b] < 0) throw InputError("attachment: unknown cell '" + cell + "'");
  }
  for (size_t b = 0; b < boundary.size(); ++b) {
    if (attachMap[b] < 0) throw InputError("attachment: attach('" + boundary[b] + "') missing");
    if (inclMap[b] < 0) throw InputError("attachment: incl('" + boundary[b] + "') missing");
  }
  return make_attachment(a, g0, g1, std::move(boundary), std::move(cells), std::move(attachMap),
                         std::move(inclMap));
}

Json attachment_to_json(const DiscreteFlow& a, const GlobAttachment& att) {
  Json j;
  j["g0"] = a.states[att.g0];
  j["g1"] = a.states[att.g1];
  j["boundary"] = att.boundary;
  j["cells"] = att.cells;
  Json attach = Json::object(), incl = Json::object();
  for (size_t b = 0; b < att.boundary.size(); ++b) {
    attach[att.boundary[b]] = a.paths[att.attach[b]].id;
    incl[att.boundary[b]] = att.cells[att.incl[b]];
  }
  j["attach"] = std::move(attach);
  j["incl"] = std::move(incl);
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

DiscreteFlow load_flow(const std::string& path) { return flow_from_json(load_json_file(path)); }

GlobAttachment load_attachment(const DiscreteFlow& a, const std::string& path) {
  return attachment_from_json(a, load_json_file(path));
}

}  // namespace flowspace
