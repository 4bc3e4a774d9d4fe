#include "enralg/signature.hpp"

#include <set>

#include "enralg/error.hpp"

namespace enralg {

std::optional<SortId> EnrichedSignature::find_sort(std::string_view name) const {
  for (SortId s = 0; s < sorts.size(); ++s)
    if (sorts[s] == name) return s;
  return std::nullopt;
}

std::optional<OpId> EnrichedSignature::find_op(std::string_view name) const {
  for (OpId o = 0; o < ops.size(); ++o)
    if (ops[o].name == name) return o;
  return std::nullopt;
}

SortId EnrichedSignature::add_sort(std::string name) {
  sorts.push_back(std::move(name));
  return sorts.size() - 1;
}

OpId EnrichedSignature::add_op(std::string name, std::vector<SortId> inputs, SortId output,
                               std::optional<VObject> parameter, std::string parameter_name) {
  OperationSymbol op;
  op.name = std::move(name);
  op.inputs = std::move(inputs);
  op.output = output;
  op.parameter = parameter ? std::move(*parameter) : terminal_object(kind);
  op.parameter_name = std::move(parameter_name);
  ops.push_back(std::move(op));
  return ops.size() - 1;
}

std::string symbol_name(const EnrichedSignature& sig, OpId op, std::size_t point) {
  const auto& o = sig.ops.at(op);
  if (o.points() == 1) return o.name;
  return o.name + "[" + o.parameter.carrier.name(point) + "]";
}

std::vector<ClassicalOpSymbol> underlying_classical(const EnrichedSignature& sig) {
  std::vector<ClassicalOpSymbol> out;
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    for (std::size_t p = 0; p < sig.ops[o].points(); ++p) {
      out.push_back({o, p, symbol_name(sig, o, p), sig.ops[o].inputs, sig.ops[o].output});
    }
  }
  return out;
}

std::size_t ValidationReport::errors() const {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.severity == Issue::Severity::Error;
  return n;
}

std::size_t ValidationReport::warnings() const { return issues.size() - errors(); }

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& i : issues) {
    out += i.severity == Issue::Severity::Error ? "error: " : "warning: ";
    out += i.path + ": " + i.message + "\n";
  }
  return out;
}

namespace {

class Resolver {
 public:
  Resolver(const EnrichedSignature& sig, const Context& context, ValidationReport* report)
      : sig_(sig), context_(context), report_(report) {}

  std::optional<Term> resolve(const TermInContext& t, std::optional<SortId> expected,
                              const std::string& path) {
    auto r = resolve_inner(t, path);
    if (r && expected && r->sort != *expected && *expected < sig_.sorts.size()) {
      problem(path, "term " + enralg::to_string(t) + " has sort " + sig_.sorts[r->sort] +
                        " but sort " + sig_.sorts[*expected] + " is required");
      return std::nullopt;
    }
    return r;
  }

 private:
  void problem(const std::string& path, const std::string& message) {
    if (report_ == nullptr) fail(path.empty() ? message : path + ": " + message);
    report_->issues.push_back({Issue::Severity::Error, path, message});
  }

  std::optional<Term> resolve_inner(const TermInContext& t, const std::string& path) {
    if (!t.point && !t.applied && t.args.empty()) {
      for (std::size_t v = 0; v < context_.size(); ++v) {
        if (context_[v].first == t.head) {
          Term term;
          term.is_var = true;
          term.var = v;
          term.sort = context_[v].second;
          return term;
        }
      }
    }
    auto op = sig_.find_op(t.head);
    if (!op) {
      problem(path, "unknown variable or operation '" + t.head + "'");
      return std::nullopt;
    }
    const auto& sym = sig_.ops[*op];
    Term term;
    term.op = *op;
    term.sort = sym.output;
    if (t.point) {
      auto p = sym.parameter.carrier.find(*t.point);
      if (!p) {
        std::string known;
        for (const auto& n : sym.parameter.carrier.names()) known += (known.empty() ? "" : ",") + n;
        problem(path, "unknown point '" + *t.point + "' for operation " + sym.name +
                          " (parameter carrier {" + known + "})");
        return std::nullopt;
      }
      term.point = *p;
    } else if (sym.points() == 1) {
      term.point = 0;
    } else {
      problem(path, "operation " + sym.name + " needs a point: its parameter has " +
                        std::to_string(sym.points()) + " points");
      return std::nullopt;
    }
    if (t.args.size() != sym.arity()) {
      problem(path, "operation " + sym.name + " takes " + std::to_string(sym.arity()) +
                        " arguments, got " + std::to_string(t.args.size()));
      return std::nullopt;
    }
    bool ok = true;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      auto a = resolve(t.args[i], sym.inputs[i], path);
      if (!a) {
        ok = false;
        continue;
      }
      term.args.push_back(std::move(*a));
    }
    if (!ok) return std::nullopt;
    return term;
  }

  const EnrichedSignature& sig_;
  const Context& context_;
  ValidationReport* report_;
};

}  // namespace

Term resolve_term(const EnrichedSignature& sig, const Context& context, const TermInContext& t,
                  std::optional<SortId> expected) {
  Resolver r(sig, context, nullptr);
  return *r.resolve(t, expected, "");
}

ResolvedEquation resolve_equation(const EnrichedSignature& sig, const SyntacticEquation& eq) {
  std::set<std::string> names;
  for (const auto& [v, s] : eq.context) {
    if (!names.insert(v).second) fail("variable '" + v + "' repeated in context");
    if (s >= sig.sorts.size()) fail("context variable '" + v + "' has an undeclared sort");
  }
  if (eq.sort >= sig.sorts.size()) fail("equation has an undeclared sort");
  return {eq.context, eq.sort, resolve_term(sig, eq.context, eq.lhs, eq.sort),
          resolve_term(sig, eq.context, eq.rhs, eq.sort)};
}

ValidationReport validate_signature(const EnrichedSignature& sig) {
  ValidationReport report;
  auto error = [&](std::string path, std::string message) {
    report.issues.push_back({Issue::Severity::Error, std::move(path), std::move(message)});
  };
  std::set<std::string> sort_names;
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    const auto path = "sorts[" + std::to_string(s) + "]";
    if (sig.sorts[s].empty()) error(path, "empty sort name");
    if (!sort_names.insert(sig.sorts[s]).second) error(path, "duplicate sort '" + sig.sorts[s] + "'");
  }
  std::set<std::string> op_names;
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    const auto& op = sig.ops[o];
    const auto path = "ops[" + std::to_string(o) + "]";
    if (op.name.empty()) error(path, "empty operation name");
    if (!op_names.insert(op.name).second) error(path, "duplicate operation '" + op.name + "'");
    for (std::size_t i = 0; i < op.inputs.size(); ++i) {
      if (op.inputs[i] >= sig.sorts.size()) {
        error(path + ".inputs[" + std::to_string(i) + "]", "undeclared sort");
      }
    }
    if (op.output >= sig.sorts.size()) error(path + ".output", "undeclared sort");
    if (op.parameter.kind != sig.kind) {
      error(path + ".parameter", "parameter is a " + std::string(to_string(op.parameter.kind)) +
                                     " object but the theory is " +
                                     std::string(to_string(sig.kind)));
    } else {
      try {
        check_structure(op.parameter.kind, op.parameter.size(), op.parameter.structure);
      } catch (const Error& e) {
        error(path + ".parameter", e.what());
      }
    }
    if (op.parameter.size() == 0) {
      report.issues.push_back({Issue::Severity::Warning, path + ".parameter",
                               "empty parameter: operation " + op.name + " is vacuous"});
    }
  }
  return report;
}

ValidationReport validate_theory(const Theory& theory) {
  ValidationReport report = validate_signature(theory.signature);
  if (!report.valid()) return report;
  const auto& sig = theory.signature;
  for (std::size_t e = 0; e < theory.equations.size(); ++e) {
    const auto& eq = theory.equations[e];
    const auto path = "equations[" + std::to_string(e) + "]";
    std::set<std::string> names;
    bool context_ok = true;
    for (std::size_t v = 0; v < eq.context.size(); ++v) {
      const auto vpath = path + ".context[" + std::to_string(v) + "]";
      if (!names.insert(eq.context[v].first).second) {
        report.issues.push_back({Issue::Severity::Error, vpath,
                                 "variable '" + eq.context[v].first + "' repeated in context"});
      }
      if (eq.context[v].second >= sig.sorts.size()) {
        report.issues.push_back({Issue::Severity::Error, vpath, "undeclared sort"});
        context_ok = false;
      }
    }
    if (eq.sort >= sig.sorts.size()) {
      report.issues.push_back({Issue::Severity::Error, path + ".sort", "undeclared sort"});
      continue;
    }
    if (!context_ok) continue;
    Resolver r(sig, eq.context, &report);
    r.resolve(eq.lhs, eq.sort, path + ".lhs");
    r.resolve(eq.rhs, eq.sort, path + ".rhs");
  }
  return report;
}

std::string to_string(const EnrichedSignature& sig, const Context& context, const Term& t) {
  if (t.is_var) return context.at(t.var).first;
  std::string out = symbol_name(sig, t.op, t.point);
  if (!t.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ",";
      out += to_string(sig, context, t.args[i]);
    }
    out += ")";
  }
  return out;
}

std::string to_string(const EnrichedSignature& sig, const SyntacticEquation& eq) {
  std::string out = "[";
  for (std::size_t v = 0; v < eq.context.size(); ++v) {
    if (v) out += ", ";
    out += eq.context[v].first + ":" + sig.sorts.at(eq.context[v].second);
  }
  return out + " |- " + to_string(eq.lhs) + " = " + to_string(eq.rhs) + " : " +
         sig.sorts.at(eq.sort) + "]";
}

}  // namespace enralg
