#include "ptep/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ptep/errors.hpp"

namespace ptep::json_io {

namespace {

std::string number_text(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && pretty ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += number_text(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number()) throw InvalidInput(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

long long integer(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) throw InvalidInput(std::string("field '") + name + "' must be an integer");
  return v.get<long long>();
}

std::vector<double> numbers(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_array()) throw InvalidInput(std::string("field '") + name + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw InvalidInput(std::string("field '") + name + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Json array_of(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Json to_json(const model::GainLossProfile& p) {
  return Json{{"n", p.size()}, {"a", array_of(p.a)}, {"b", array_of(p.b)}};
}

Json to_json(const model::ArrayGeometry& g) {
  Json positions = Json::array();
  for (const auto& pt : g.positions) positions.push_back(Json::array({pt[0], pt[1], pt[2]}));
  return Json{{"n", g.size()}, {"positions", positions}, {"epsilon", g.epsilon}, {"cap_b", g.cap_b}};
}

Json to_json(const model::PhysicalConstants& c) {
  return Json{{"delta", c.delta}, {"a_scale", c.a_scale}, {"volume", c.volume}};
}

Json to_json(const epfinder::EpSolution& s) {
  Json j{{"order", s.order},
         {"mode", model::to_string(s.mode)},
         {"epsilon", s.epsilon},
         {"gamma", s.gamma},
         {"a", array_of(s.profile.a)},
         {"b", array_of(s.profile.b)},
         {"residual_norm", s.residual_norm},
         {"kernel_dim", s.kernel_dim},
         {"family_id", s.family_id}};
  if (!s.unknowns.empty()) {
    Json u = Json::array();
    for (const auto& v : s.unknowns) u.push_back(to_decimal(v));
    j["unknowns"] = u;
  }
  return j;
}

Json to_json(const std::vector<epfinder::EpSolution>& list) {
  Json a = Json::array();
  for (const auto& s : list) a.push_back(to_json(s));
  return a;
}

model::GainLossProfile profile_from_json(const Json& j) {
  model::GainLossProfile p{numbers(j, "a"), numbers(j, "b")};
  if (j.contains("n") && integer(j, "n") != static_cast<long long>(p.size())) {
    throw InvalidInput("field 'n' disagrees with the length of 'a'");
  }
  return p;
}

model::ArrayGeometry geometry_from_json(const Json& j) {
  model::ArrayGeometry g;
  const auto& pos = field(j, "positions");
  if (!pos.is_array()) throw InvalidInput("field 'positions' must be an array");
  for (const auto& e : pos) {
    if (!e.is_array() || e.size() != 3) throw InvalidInput("each position must be a 3-vector");
    model::Point pt{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!e[k].is_number()) throw InvalidInput("position components must be numbers");
      pt[k] = e[k].get<double>();
    }
    g.positions.push_back(pt);
  }
  g.epsilon = number(j, "epsilon");
  if (j.contains("cap_b")) g.cap_b = number(j, "cap_b");
  if (j.contains("n") && integer(j, "n") != static_cast<long long>(g.size())) {
    throw InvalidInput("field 'n' disagrees with the number of positions");
  }
  return g;
}

model::PhysicalConstants constants_from_json(const Json& j) {
  model::PhysicalConstants c;
  if (j.contains("delta")) c.delta = number(j, "delta");
  if (j.contains("a_scale")) c.a_scale = number(j, "a_scale");
  if (j.contains("volume")) c.volume = number(j, "volume");
  return c;
}

epfinder::EpSolution solution_from_json(const Json& j) {
  epfinder::EpSolution s;
  s.order = static_cast<int>(integer(j, "order"));
  const auto& mode = field(j, "mode");
  if (!mode.is_string()) throw InvalidInput("field 'mode' must be a string");
  s.mode = model::parse_mode(mode.get<std::string>());
  s.epsilon = number(j, "epsilon");
  s.gamma = number(j, "gamma");
  s.profile = {numbers(j, "a"), numbers(j, "b")};
  s.residual_norm = number(j, "residual_norm");
  s.kernel_dim = static_cast<int>(integer(j, "kernel_dim"));
  s.family_id = static_cast<int>(integer(j, "family_id"));
  if (j.contains("unknowns")) {
    const auto& u = j["unknowns"];
    if (!u.is_array()) throw InvalidInput("field 'unknowns' must be an array");
    for (const auto& e : u) {
      if (e.is_string()) {
        s.unknowns.push_back(ext_from_decimal(e.get<std::string>()));
      } else if (e.is_number()) {
        s.unknowns.emplace_back(e.get<double>());
      } else {
        throw InvalidInput("field 'unknowns' must hold numbers or decimal strings");
      }
    }
  }
  return s;
}

std::vector<epfinder::EpSolution> solutions_from_json(const Json& j) {
  std::vector<epfinder::EpSolution> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(solution_from_json(e));
  } else {
    out.push_back(solution_from_json(j));
  }
  return out;
}

Json parse(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse(in);
}

}  // namespace ptep::json_io
