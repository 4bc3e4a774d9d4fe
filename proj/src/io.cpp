#include "enralg/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "enralg/error.hpp"

namespace enralg {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  parse_failure(path + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(path, std::string("missing field \"") + key + "\"");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  const auto& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_string(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::size_t element(const Carrier& c, const Json& j, const std::string& path) {
  auto name = as_string(j, path);
  auto idx = c.find(name);
  if (!idx) schema(path, "unknown element '" + name + "'");
  return *idx;
}

std::string key_path(const std::string& path, const std::string& key) {
  return path + "[\"" + key + "\"]";
}

Distance distance_value(const Json& j, const std::string& path) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v < 0) schema(path, "negative distance");
    return Distance(Rational(v));
  }
  if (j.is_number_float()) {
    schema(path, "write non-integer distances as strings (\"0.5\" or \"1/2\") to keep them exact");
  }
  try {
    return parse_distance(as_string(j, path));
  } catch (const Error& e) {
    schema(path, e.what());
  }
}

const VObject* named_object(const ParsedTheory& t, const std::string& name) {
  for (const auto& [n, v] : t.objects)
    if (n == name) return &v;
  return nullptr;
}

VObject object_or_reference(const ParsedTheory& t, const Json& j, const std::string& path) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    const auto* v = named_object(t, name);
    if (v == nullptr) schema(path, "unknown object '" + name + "'");
    return *v;
  }
  return parse_vobject(t.theory.kind(), j, path);
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    parse_failure(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                  ": invalid JSON: " + what);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_failure(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

VObject parse_vobject(InstanceKind kind, const Json& j, const std::string& path) {
  Carrier carrier;
  try {
    carrier = Carrier(string_list(field(j, "elements", path), path + ".elements"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) throw;
    schema(path + ".elements", e.what());
  }
  const std::size_t n = carrier.size();
  StructureData structure = discrete_structure(kind, n);
  for (const char* other : {"relation", "simplices", "distances"}) {
    const bool expected = (std::string(other) == "relation" &&
                           (kind == InstanceKind::Rel || kind == InstanceKind::Preord)) ||
                          (std::string(other) == "simplices" && kind == InstanceKind::Simp) ||
                          (std::string(other) == "distances" && kind == InstanceKind::PMet);
    if (!expected && j.contains(other)) {
      schema(path + "." + other, "not allowed for a " + std::string(to_string(kind)) + " object");
    }
  }
  switch (kind) {
    case InstanceKind::Set: break;
    case InstanceKind::Rel:
    case InstanceKind::Preord: {
      Relation r = kind == InstanceKind::Rel ? Relation(n) : Relation::identity(n);
      if (const auto* rel = optional_field(j, "relation", path)) {
        const auto p = path + ".relation";
        for (std::size_t i = 0; i < as_array(*rel, p).size(); ++i) {
          const auto ip = p + "[" + std::to_string(i) + "]";
          const auto& pair = as_array((*rel)[i], ip);
          if (pair.size() != 2) schema(ip, "expected a pair [x, y]");
          r.set(element(carrier, pair[0], ip + "[0]"), element(carrier, pair[1], ip + "[1]"));
        }
      }
      if (kind == InstanceKind::Preord) r.close_preorder();
      structure = std::move(r);
      break;
    }
    case InstanceKind::Simp: {
      std::vector<Simplex> simplices;
      if (const auto* list = optional_field(j, "simplices", path)) {
        const auto p = path + ".simplices";
        for (std::size_t i = 0; i < as_array(*list, p).size(); ++i) {
          const auto ip = p + "[" + std::to_string(i) + "]";
          Simplex s;
          const auto& arr = as_array((*list)[i], ip);
          if (arr.empty()) schema(ip, "simplices are nonempty");
          for (std::size_t k = 0; k < arr.size(); ++k) {
            s.push_back(element(carrier, arr[k], ip + "[" + std::to_string(k) + "]"));
          }
          simplices.push_back(std::move(s));
        }
      }
      structure = Complex::generated(n, std::move(simplices));
      break;
    }
    case InstanceKind::PMet: {
      Metric m(n);
      struct Given {
        std::size_t x, y;
        Distance d;
        std::string path;
      };
      std::vector<Given> given;
      if (const auto* list = optional_field(j, "distances", path)) {
        const auto p = path + ".distances";
        for (std::size_t i = 0; i < as_array(*list, p).size(); ++i) {
          const auto ip = p + "[" + std::to_string(i) + "]";
          const auto& entry = (*list)[i];
          const auto x = element(carrier, field(entry, "x", ip), ip + ".x");
          const auto y = element(carrier, field(entry, "y", ip), ip + ".y");
          const auto d = distance_value(field(entry, "distance", ip), ip + ".distance");
          if (x == y) {
            if (!(d == Distance(0L))) schema(ip, "distance from a point to itself must be 0");
            continue;
          }
          if (!m.at(x, y).is_infinite() && !(m.at(x, y) == d)) schema(ip, "conflicting distance");
          m.set(x, y, d);
          given.push_back({x, y, d, ip});
        }
      }
      // Omitted entries are filled in by shortest paths; a listed entry that
      // a path undercuts breaks the triangle inequality.
      m.close();
      for (const auto& g : given) {
        if (m.at(g.x, g.y) < g.d) {
          schema(g.path, "triangle inequality fails: d(" + carrier.name(g.x) + "," +
                             carrier.name(g.y) + ") = " + to_string(g.d) +
                             " exceeds a path of length " + to_string(m.at(g.x, g.y)));
        }
      }
      structure = std::move(m);
      break;
    }
  }
  return VObject{kind, std::move(carrier), std::move(structure)};
}

Json to_json(const VObject& v) {
  Json j;
  j["elements"] = v.carrier.names();
  switch (v.kind) {
    case InstanceKind::Set: break;
    case InstanceKind::Rel:
    case InstanceKind::Preord: {
      Json pairs = Json::array();
      for (auto [a, b] : std::get<Relation>(v.structure).pairs()) {
        if (v.kind == InstanceKind::Preord && a == b) continue;
        pairs.push_back({v.carrier.name(a), v.carrier.name(b)});
      }
      j["relation"] = std::move(pairs);
      break;
    }
    case InstanceKind::Simp: {
      Json list = Json::array();
      for (const auto& f : std::get<Complex>(v.structure).facets()) {
        if (f.size() < 2) continue;
        Json s = Json::array();
        for (auto p : f) s.push_back(v.carrier.name(p));
        list.push_back(std::move(s));
      }
      j["simplices"] = std::move(list);
      break;
    }
    case InstanceKind::PMet: {
      Json list = Json::array();
      const auto& m = std::get<Metric>(v.structure);
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = a + 1; b < m.size(); ++b) {
          if (m.at(a, b).is_infinite()) continue;
          Json e;
          e["x"] = v.carrier.name(a);
          e["y"] = v.carrier.name(b);
          e["distance"] = to_string(m.at(a, b));
          list.push_back(std::move(e));
        }
      }
      j["distances"] = std::move(list);
      break;
    }
  }
  return j;
}

ParsedTheory parse_theory(const Json& j) {
  ParsedTheory out;
  auto& theory = out.theory;
  auto& sig = theory.signature;
  if (!j.is_object()) schema("$", "expected an object");
  sig.kind = parse_instance_kind(as_string(field(j, "instance", "$"), "$.instance"));
  auto issue = [&](std::string path, std::string message) {
    out.report.issues.push_back({Issue::Severity::Error, std::move(path), std::move(message)});
  };
  sig.sorts = string_list(field(j, "sorts", "$"), "$.sorts");
  auto sort_id = [&](const Json& v, const std::string& path) -> SortId {
    auto name = as_string(v, path);
    auto s = sig.find_sort(name);
    if (!s) {
      issue(path, "undeclared sort '" + name + "'");
      return std::numeric_limits<SortId>::max();
    }
    return *s;
  };

  if (const auto* objects = optional_field(j, "objects", "$")) {
    if (!objects->is_object()) schema("$.objects", "expected an object");
    for (const auto& [name, value] : objects->items()) {
      out.objects.emplace_back(name, parse_vobject(sig.kind, value, key_path("$.objects", name)));
    }
  }

  const auto& ops = as_array(field(j, "ops", "$"), "$.ops");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto path = "$.ops[" + std::to_string(i) + "]";
    OperationSymbol op;
    op.name = as_string(field(ops[i], "name", path), path + ".name");
    if (const auto* inputs = optional_field(ops[i], "inputs", path)) {
      for (std::size_t k = 0; k < as_array(*inputs, path + ".inputs").size(); ++k) {
        op.inputs.push_back(sort_id((*inputs)[k], path + ".inputs[" + std::to_string(k) + "]"));
      }
    }
    op.output = sort_id(field(ops[i], "output", path), path + ".output");
    op.parameter = terminal_object(sig.kind);
    if (const auto* param = optional_field(ops[i], "parameter", path)) {
      if (param->is_string()) {
        op.parameter_name = param->get<std::string>();
        if (const auto* v = named_object(out, op.parameter_name)) {
          op.parameter = *v;
        } else {
          issue(path + ".parameter", "unknown object '" + op.parameter_name + "'");
        }
      } else {
        op.parameter = parse_vobject(sig.kind, *param, path + ".parameter");
      }
    }
    sig.ops.push_back(std::move(op));
  }

  if (const auto* eqs = optional_field(j, "equations", "$")) {
    theory.equations = parse_equations(sig, Json{{"equations", *eqs}}, "$");
  }

  // Validation findings, minus those already reported for the same path.
  std::set<std::string> seen;
  for (const auto& i : out.report.issues) seen.insert(i.path);
  bool ids_ok = out.report.valid();
  if (ids_ok) {
    for (auto& i : validate_theory(theory).issues) {
      i.path = "$." + i.path;
      if (!seen.count(i.path)) out.report.issues.push_back(std::move(i));
    }
  }
  return out;
}

std::vector<SyntacticEquation> parse_equations(const EnrichedSignature& sig, const Json& j,
                                               const std::string& path) {
  const auto& list = as_array(field(j, "equations", path), path + ".equations");
  std::vector<SyntacticEquation> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto p = path + ".equations[" + std::to_string(i) + "]";
    SyntacticEquation eq;
    if (const auto* ctx = optional_field(list[i], "context", p)) {
      for (std::size_t k = 0; k < as_array(*ctx, p + ".context").size(); ++k) {
        const auto kp = p + ".context[" + std::to_string(k) + "]";
        const auto& entry = as_array((*ctx)[k], kp);
        if (entry.size() != 2) schema(kp, "expected [variable, sort]");
        auto sort = as_string(entry[1], kp + "[1]");
        auto id = sig.find_sort(sort);
        eq.context.emplace_back(as_string(entry[0], kp + "[0]"),
                                id ? *id : std::numeric_limits<SortId>::max());
      }
    }
    const auto sort = as_string(field(list[i], "sort", p), p + ".sort");
    auto id = sig.find_sort(sort);
    eq.sort = id ? *id : std::numeric_limits<SortId>::max();
    try {
      eq.lhs = parse_term(as_string(field(list[i], "lhs", p), p + ".lhs"));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Parse) throw;
      schema(p + ".lhs", e.what());
    }
    try {
      eq.rhs = parse_term(as_string(field(list[i], "rhs", p), p + ".rhs"));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Parse) throw;
      schema(p + ".rhs", e.what());
    }
    out.push_back(std::move(eq));
  }
  return out;
}

ParsedTheory read_theory_file(const std::string& path) {
  try {
    return parse_theory(read_json_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse && std::string(e.what()).rfind(path, 0) != 0) {
      parse_failure(path + ": " + e.what());
    }
    throw;
  }
}

Theory load_theory(const std::string& path) {
  auto parsed = read_theory_file(path);
  if (!parsed.report.valid()) {
    parse_failure(path + ": invalid theory\n" + parsed.report.to_string());
  }
  return std::move(parsed.theory);
}

std::vector<VObject> parse_generators(const ParsedTheory& t, const Json& j) {
  const auto& sig = t.theory.signature;
  std::vector<VObject> out;
  for (SortId s = 0; s < sig.sorts.size(); ++s) out.push_back(discrete_object(sig.kind, Carrier()));
  const auto& gens = field(j, "generators", "$");
  if (!gens.is_object()) schema("$.generators", "expected an object keyed by sort");
  for (const auto& [sort, value] : gens.items()) {
    const auto p = key_path("$.generators", sort);
    auto s = sig.find_sort(sort);
    if (!s) schema(p, "undeclared sort '" + sort + "'");
    out[*s] = object_or_reference(t, value, p);
  }
  return out;
}

Algebra parse_algebra(const ParsedTheory& t, std::shared_ptr<const EnrichedSignature> sig,
                      const Json& j) {
  const auto& carriers_json = field(j, "carriers", "$");
  if (!carriers_json.is_object()) schema("$.carriers", "expected an object keyed by sort");
  std::vector<std::optional<VObject>> found(sig->sorts.size());
  for (const auto& [sort, value] : carriers_json.items()) {
    const auto p = key_path("$.carriers", sort);
    auto s = sig->find_sort(sort);
    if (!s) schema(p, "undeclared sort '" + sort + "'");
    found[*s] = object_or_reference(t, value, p);
  }
  std::vector<VObject> carriers;
  for (SortId s = 0; s < sig->sorts.size(); ++s) {
    if (!found[s]) schema("$.carriers", "missing carrier for sort " + sig->sorts[s]);
    carriers.push_back(std::move(*found[s]));
  }
  Algebra a(sig, std::move(carriers));
  const auto& ops = field(j, "ops", "$");
  if (!ops.is_object()) schema("$.ops", "expected an object keyed by operation");
  for (const auto& [name, cells] : ops.items()) {
    const auto p = key_path("$.ops", name);
    auto o = sig->find_op(name);
    if (!o) schema(p, "unknown operation '" + name + "'");
    const auto& op = sig->ops[*o];
    for (std::size_t i = 0; i < as_array(cells, p).size(); ++i) {
      const auto cp = p + "[" + std::to_string(i) + "]";
      std::size_t point = 0;
      if (const auto* pt = optional_field(cells[i], "point", cp)) {
        point = element(op.parameter.carrier, *pt, cp + ".point");
      } else if (op.points() != 1) {
        schema(cp, "missing \"point\": the parameter of " + op.name + " has " +
                       std::to_string(op.points()) + " points");
      }
      std::vector<std::size_t> args;
      const auto& arg_list = cells[i].contains("args") ? as_array(cells[i]["args"], cp + ".args")
                                                       : Json::array();
      if (arg_list.size() != op.arity()) {
        schema(cp + ".args", op.name + " takes " + std::to_string(op.arity()) + " arguments");
      }
      for (std::size_t k = 0; k < arg_list.size(); ++k) {
        args.push_back(element(a.carrier(op.inputs[k]).carrier, arg_list[k],
                               cp + ".args[" + std::to_string(k) + "]"));
      }
      const auto value = element(a.carrier(op.output).carrier, field(cells[i], "value", cp), cp + ".value");
      const auto old = a.apply(*o, point, args);
      if (old != kUndefined && old != value) schema(cp, "conflicting value for the same arguments");
      a.set(*o, point, args, value);
    }
  }
  try {
    a.check_total();
  } catch (const Error& e) {
    schema("$.ops", e.what());
  }
  return a;
}

Json to_json(const Algebra& a) {
  const auto& sig = a.signature();
  Json j;
  Json carriers = Json::object();
  for (SortId s = 0; s < sig.sorts.size(); ++s) carriers[sig.sorts[s]] = to_json(a.carrier(s));
  j["carriers"] = std::move(carriers);
  Json ops = Json::object();
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    const auto& op = sig.ops[o];
    Json cells = Json::array();
    for (std::size_t p = 0; p < op.points(); ++p) {
      a.for_each_defined(o, p, [&](std::span<const std::size_t> args, std::size_t value) {
        Json cell;
        if (op.points() != 1) cell["point"] = op.parameter.carrier.name(p);
        Json arg_names = Json::array();
        for (std::size_t i = 0; i < args.size(); ++i) {
          arg_names.push_back(a.carrier(op.inputs[i]).carrier.name(args[i]));
        }
        cell["args"] = std::move(arg_names);
        cell["value"] = a.carrier(op.output).carrier.name(value);
        cells.push_back(std::move(cell));
      });
    }
    ops[op.name] = std::move(cells);
  }
  j["ops"] = std::move(ops);
  return j;
}

Homomorphism parse_homomorphism(std::shared_ptr<const Algebra> dom,
                                std::shared_ptr<const Algebra> cod, const Json& j) {
  const auto& sig = dom->signature();
  const auto& tables = field(j, "tables", "$");
  if (!tables.is_object()) schema("$.tables", "expected an object keyed by sort");
  Homomorphism h{dom, cod, std::vector<std::vector<std::size_t>>(sig.sorts.size())};
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    h.tables[s].assign(dom->carrier(s).size(), kUndefined);
  }
  for (const auto& [sort, table] : tables.items()) {
    const auto p = key_path("$.tables", sort);
    auto s = sig.find_sort(sort);
    if (!s) schema(p, "undeclared sort '" + sort + "'");
    if (!table.is_object()) schema(p, "expected an object mapping elements to elements");
    for (const auto& [from, to] : table.items()) {
      auto x = dom->carrier(*s).carrier.find(from);
      if (!x) schema(key_path(p, from), "unknown element '" + from + "' of the domain");
      h.tables[*s][*x] = element(cod->carrier(*s).carrier, to, key_path(p, from));
    }
  }
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    for (std::size_t x = 0; x < h.tables[s].size(); ++x) {
      if (h.tables[s][x] == kUndefined) {
        schema(key_path("$.tables", sig.sorts[s]),
               "no image for '" + dom->carrier(s).carrier.name(x) + "'");
      }
    }
  }
  return h;
}

Json congruence_to_json(const Algebra& a, const SortedCongruence& c) {
  const auto& sig = a.signature();
  Json j = Json::object();
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    Json classes = Json::array();
    const auto& names = a.carrier(s).carrier;
    for (std::size_t k = 0; k < c.class_count(s); ++k) {
      Json members = Json::array();
      for (auto m : c.members(s, k)) members.push_back(names.name(m));
      Json cls;
      cls["representative"] = names.name(c.representative(s, k));
      cls["members"] = std::move(members);
      classes.push_back(std::move(cls));
    }
    j[sig.sorts[s]] = std::move(classes);
  }
  return j;
}

Json to_json(const FreeAlgebra& f) {
  const auto& sig = f.theory->signature;
  Json j;
  j["instance"] = std::string(to_string(sig.kind));
  j["exact"] = f.exact;
  j["omega_stages"] = f.omega_stages;
  j["depth_reached"] = f.universe->depth_reached();
  j["term_count"] = f.universe->size();
  j["warnings"] = f.warnings;
  const auto classes = congruence_to_json(*f.term_algebra, f.congruence);
  Json sorts = Json::object();
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    Json entry;
    entry["classes"] = classes[sig.sorts[s]];
    entry["carrier"] = to_json(f.algebra->carrier(s));
    Json unit_table = Json::object();
    for (std::size_t x = 0; x < f.generators[s].size(); ++x) {
      unit_table[f.generators[s].carrier.name(x)] = f.algebra->carrier(s).carrier.name(f.unit[s][x]);
    }
    entry["unit"] = std::move(unit_table);
    sorts[sig.sorts[s]] = std::move(entry);
  }
  j["sorts"] = std::move(sorts);
  return j;
}

std::string to_text(const FreeAlgebra& f) {
  const auto& sig = f.theory->signature;
  std::ostringstream out;
  out << "free " << to_string(sig.kind) << " algebra: " << (f.exact ? "exact" : "not exact")
      << ", " << f.omega_stages << " structure stages, " << f.universe->size()
      << " terms up to depth " << f.universe->depth_reached() << "\n";
  for (const auto& w : f.warnings) out << "warning: " << w << "\n";
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    const auto& carrier = f.algebra->carrier(s);
    out << "sort " << sig.sorts[s] << ": " << carrier.size() << " classes\n";
    for (std::size_t k = 0; k < f.congruence.class_count(s); ++k) {
      out << "  [" << carrier.carrier.name(k) << "]";
      if (f.congruence.members(s, k).size() > 1) {
        out << " =";
        for (auto m : f.congruence.members(s, k)) {
          out << " " << f.term_algebra->carrier(s).carrier.name(m);
        }
      }
      out << "\n";
    }
    const auto structure = to_json(carrier);
    for (const char* key : {"relation", "simplices", "distances"}) {
      if (structure.contains(key)) out << "  " << key << ": " << structure[key].dump() << "\n";
    }
    if (f.generators[s].size() > 0) {
      out << "  unit:";
      for (std::size_t x = 0; x < f.generators[s].size(); ++x) {
        out << " " << f.generators[s].carrier.name(x) << "->" << carrier.carrier.name(f.unit[s][x]);
      }
      out << "\n";
    }
  }
  return out.str();
}

Json to_json(const CompareReport& r, const EnrichedSignature& sig) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  Json sorts = Json::object();
  for (SortId s = 0; s < r.sort_equal.size() && s < sig.sorts.size(); ++s) {
    sorts[sig.sorts[s]] = r.sort_equal[s];
  }
  j["sorts"] = std::move(sorts);
  j["detail"] = r.detail;
  return j;
}

}  // namespace enralg
