#include "enralg/cli.hpp"

#include <CLI11.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "enralg/error.hpp"
#include "enralg/io.hpp"

namespace enralg {

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::string theory;
  std::string generators;
  std::string algebra;
  std::string equations;
  std::string dom;
  std::string cod;
  std::string hom;
  std::string term;
  std::vector<std::string> env;
  std::string format = "json";
  unsigned depth = GenerationPolicy{}.max_depth;
  std::size_t max_terms = 0;
};

ParsedTheory theory_or_throw(const std::string& path) {
  auto parsed = read_theory_file(path);
  if (!parsed.report.valid()) {
    fail(path + ": invalid theory\n" + parsed.report.to_string());
  }
  return parsed;
}

std::shared_ptr<const Algebra> algebra_file(const ParsedTheory& t,
                                            std::shared_ptr<const EnrichedSignature> sig,
                                            const std::string& path) {
  try {
    return std::make_shared<const Algebra>(parse_algebra(t, std::move(sig), read_json_file(path)));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse && std::string(e.what()).rfind(path, 0) != 0) {
      parse_failure(path + ": " + e.what());
    }
    throw;
  }
}

GenerationPolicy policy_from(const Options& o) {
  auto policy = GenerationPolicy::from_environment();
  policy.max_depth = o.depth;
  if (o.max_terms > 0) policy.max_count = o.max_terms;
  return policy;
}

int cmd_free(const Options& o, std::ostream& out, std::ostream& err) {
  auto parsed = theory_or_throw(o.theory);
  auto gens = parse_generators(parsed, read_json_file(o.generators));
  auto theory = std::make_shared<const Theory>(std::move(parsed.theory));
  auto f = free_theory(theory, std::move(gens), policy_from(o));
  if (o.format == "text") {
    out << to_text(f);
  } else {
    out << to_json(f).dump(2) << "\n";
    for (const auto& w : f.warnings) err << "warning: " << w << "\n";
  }
  return kOk;
}

int cmd_check_model(const Options& o, std::ostream& out) {
  auto parsed = theory_or_throw(o.theory);
  auto sig = std::make_shared<const EnrichedSignature>(parsed.theory.signature);
  auto a = algebra_file(parsed, sig, o.algebra);
  bool ok = true;
  const auto report = validate_algebra(*a);
  if (report.valid()) {
    out << "structure: every operation admissible\n";
  } else {
    ok = false;
    for (const auto& f : report.failures) {
      out << "structure: " << sig->ops[f.op].name << " not admissible: " << f.witness << "\n";
    }
  }
  const auto& eqs = parsed.theory.equations;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const auto r = satisfies(*a, eqs[i]);
    out << "equation " << i << " " << to_string(*sig, eqs[i]) << ": ";
    if (r.holds) {
      out << "holds\n";
    } else {
      ok = false;
      out << "fails at " << r.witness << "\n";
    }
  }
  out << (ok ? "model\n" : "not a model\n");
  return ok ? kOk : kFailed;
}

int cmd_check_hom(const Options& o, std::ostream& out) {
  auto parsed = theory_or_throw(o.theory);
  auto sig = std::make_shared<const EnrichedSignature>(parsed.theory.signature);
  auto dom = algebra_file(parsed, sig, o.dom);
  auto cod = algebra_file(parsed, sig, o.cod);
  auto h = parse_homomorphism(dom, cod, read_json_file(o.hom));
  const auto r = is_homomorphism(h);
  if (r.ok) {
    out << "homomorphism\n";
    return kOk;
  }
  out << "not a homomorphism: " << r.witness << "\n";
  return kFailed;
}

int cmd_quotient(const Options& o, std::ostream& out) {
  auto parsed = theory_or_throw(o.theory);
  auto sig = std::make_shared<const EnrichedSignature>(parsed.theory.signature);
  auto a = algebra_file(parsed, sig, o.algebra);
  std::vector<SyntacticEquation> eqs;
  try {
    eqs = parse_equations(*sig, read_json_file(o.equations), "$");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse && std::string(e.what()).rfind(o.equations, 0) != 0) {
      parse_failure(o.equations + ": " + e.what());
    }
    throw;
  }
  Theory check{*sig, eqs};
  if (auto report = validate_theory(check); !report.valid()) {
    fail(o.equations + ": invalid equations\n" + report.to_string());
  }
  const auto c = generated_congruence(*a, eqs);
  const auto q = quotient(a, c);
  Json j;
  j["classes"] = congruence_to_json(*a, c);
  j["algebra"] = to_json(*q.algebra);
  out << j.dump(2) << "\n";
  return kOk;
}

// Variables take their sort from the argument position they occupy, unless
// written as "v:S=a".
void infer_sorts(const EnrichedSignature& sig, const TermInContext& t,
                 std::optional<SortId> expected, std::map<std::string, std::optional<SortId>>& vars) {
  if (!t.applied && vars.count(t.head)) {
    auto& slot = vars[t.head];
    if (expected) {
      if (slot && *slot != *expected) {
        fail("variable " + t.head + " used at sorts " + sig.sorts[*slot] + " and " +
             sig.sorts[*expected]);
      }
      slot = expected;
    }
    return;
  }
  auto op = sig.find_op(t.head);
  if (!op) return;  // resolve_term reports it
  const auto& sym = sig.ops[*op];
  for (std::size_t i = 0; i < t.args.size() && i < sym.arity(); ++i) {
    infer_sorts(sig, t.args[i], sym.inputs[i], vars);
  }
}

int cmd_eval(const Options& o, std::ostream& out) {
  auto parsed = theory_or_throw(o.theory);
  auto sig = std::make_shared<const EnrichedSignature>(parsed.theory.signature);
  auto a = algebra_file(parsed, sig, o.algebra);
  const auto term = parse_term(o.term);

  struct Binding {
    std::string var;
    std::optional<SortId> sort;
    std::string value;
  };
  std::vector<Binding> bindings;
  std::map<std::string, std::optional<SortId>> declared;
  std::map<std::string, std::optional<SortId>> inferred;
  for (const auto& entry : o.env) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) parse_failure("--env " + entry + ": expected v=a or v:S=a");
    Binding b;
    b.var = entry.substr(0, eq);
    b.value = entry.substr(eq + 1);
    if (const auto colon = b.var.find(':'); colon != std::string::npos) {
      const auto sort = b.var.substr(colon + 1);
      b.var = b.var.substr(0, colon);
      b.sort = sig->find_sort(sort);
      if (!b.sort) parse_failure("--env " + entry + ": undeclared sort '" + sort + "'");
    }
    if (declared.count(b.var)) parse_failure("--env: " + b.var + " bound twice");
    declared[b.var] = b.sort;
    inferred[b.var] = std::nullopt;
    bindings.push_back(std::move(b));
  }
  infer_sorts(*sig, term, std::nullopt, inferred);

  Context ctx;
  std::vector<std::size_t> env;
  for (const auto& b : bindings) {
    std::optional<SortId> sort = b.sort ? b.sort : inferred[b.var];
    if (!sort && sig->sorts.size() == 1) sort = 0;
    if (!sort) parse_failure("--env: cannot tell the sort of " + b.var + "; write " + b.var + ":S=" + b.value);
    const auto x = a->carrier(*sort).carrier.find(b.value);
    if (!x) {
      parse_failure("--env: '" + b.value + "' is not an element of sort " + sig->sorts[*sort]);
    }
    ctx.emplace_back(b.var, *sort);
    env.push_back(*x);
  }
  const auto value = interpret(*a, ctx, term, env);
  const auto sort = resolve_term(*sig, ctx, term).sort;
  out << a->carrier(sort).carrier.name(value) << "\n";
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  auto parsed = theory_or_throw(o.theory);
  auto gens = parse_generators(parsed, read_json_file(o.generators));
  const auto report =
      compare_free(parsed.theory, gens, policy_from(o), FibreCaps::from_environment());
  if (o.format == "text") {
    out << to_string(report.verdict);
    if (!report.detail.empty()) out << ": " << report.detail;
    out << "\n";
  } else {
    out << to_json(report, parsed.theory.signature).dump(2) << "\n";
  }
  switch (report.verdict) {
    case Verdict::Equal: return kOk;
    case Verdict::Differ: return kFailed;
    case Verdict::Unsupported: return kUsage;
  }
  return kUsage;
}

int cmd_info(const Options& o, std::ostream& out) {
  const auto parsed = read_theory_file(o.theory);
  const auto& t = parsed.theory;
  out << (parsed.report.valid() ? "valid" : "invalid") << ": " << to_string(t.kind()) << ", "
      << t.signature.sorts.size() << " sorts, " << t.signature.ops.size() << " ops, "
      << t.equations.size() << " equations\n";
  if (parsed.report.valid()) {
    for (const auto& op : t.signature.ops) {
      out << "  " << op.name << " :";
      for (auto s : op.inputs) out << " " << t.signature.sorts[s];
      out << " -> " << t.signature.sorts[op.output];
      if (op.points() != 1 || !op.parameter_name.empty()) {
        out << "  parameter " << (op.parameter_name.empty() ? "inline" : op.parameter_name)
            << " (" << op.points() << " points)";
      }
      out << "\n";
    }
    for (const auto& eq : t.equations) out << "  " << to_string(t.signature, eq) << "\n";
  }
  out << parsed.report.to_string();
  return parsed.report.valid() ? kOk : kFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free algebras of enriched equational theories"};
  app.require_subcommand(1);
  Options o;

  auto theory_opt = [&](CLI::App* sub) {
    sub->add_option("--theory", o.theory, "theory JSON file")->required()->check(CLI::ExistingFile);
  };
  auto depth_opts = [&](CLI::App* sub) {
    sub->add_option("--depth", o.depth, "maximum term depth")->capture_default_str();
    sub->add_option("--max-terms", o.max_terms, "term count cap (default ENRALG_MAX_TERMS or 20000)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
  };

  auto* free = app.add_subcommand("free", "free algebra on generators");
  theory_opt(free);
  free->add_option("--generators", o.generators)->required()->check(CLI::ExistingFile);
  depth_opts(free);

  auto* check_model = app.add_subcommand("check-model", "admissibility and equations of an algebra");
  theory_opt(check_model);
  check_model->add_option("--algebra", o.algebra)->required()->check(CLI::ExistingFile);

  auto* check_hom = app.add_subcommand("check-hom", "check a homomorphism between algebras");
  theory_opt(check_hom);
  check_hom->add_option("--dom", o.dom)->required()->check(CLI::ExistingFile);
  check_hom->add_option("--cod", o.cod)->required()->check(CLI::ExistingFile);
  check_hom->add_option("--hom", o.hom)->required()->check(CLI::ExistingFile);

  auto* quot = app.add_subcommand("quotient", "quotient of an algebra by equations");
  theory_opt(quot);
  quot->add_option("--algebra", o.algebra)->required()->check(CLI::ExistingFile);
  quot->add_option("--equations", o.equations)->required()->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "value of a term in an algebra");
  theory_opt(eval);
  eval->add_option("--algebra", o.algebra)->required()->check(CLI::ExistingFile);
  eval->add_option("--term", o.term)->required();
  eval->add_option("--env", o.env, "bindings v=a or v:S=a");

  auto* oracle = app.add_subcommand("oracle", "compare the free structure with brute force");
  theory_opt(oracle);
  oracle->add_option("--generators", o.generators)->required()->check(CLI::ExistingFile);
  depth_opts(oracle);

  auto* info = app.add_subcommand("info", "validate a theory and summarize it");
  theory_opt(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (free->parsed()) return cmd_free(o, out, err);
    if (check_model->parsed()) return cmd_check_model(o, out);
    if (check_hom->parsed()) return cmd_check_hom(o, out);
    if (quot->parsed()) return cmd_quotient(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (oracle->parsed()) return cmd_oracle(o, out);
    if (info->parsed()) return cmd_info(o, out);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Unsupported:
        err << "unsupported: " << e.what() << "\n";
        return kUsage;
      case ErrorKind::Parse:
        err << "error: " << e.what() << "\n";
        return kUsage;
      case ErrorKind::Invalid:
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace enralg
