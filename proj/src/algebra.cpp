#include "enralg/algebra.hpp"

#include <limits>

#include "enralg/error.hpp"

namespace enralg {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;

bool next_tuple(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

std::string tuple_text(const Algebra& a, const std::vector<SortId>& sorts,
                       std::span<const std::size_t> args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += a.carrier(sorts[i]).carrier.name(args[i]);
  }
  return out + ")";
}

}  // namespace

Algebra::Algebra(std::shared_ptr<const EnrichedSignature> sig, std::vector<VObject> carriers,
                 bool partial)
    : sig_(std::move(sig)), carriers_(std::move(carriers)), partial_(partial) {
  const auto& s = *sig_;
  if (carriers_.size() != s.sorts.size()) {
    fail("algebra has " + std::to_string(carriers_.size()) + " carriers for " +
         std::to_string(s.sorts.size()) + " sorts");
  }
  for (SortId k = 0; k < carriers_.size(); ++k) {
    if (carriers_[k].kind != s.kind) {
      fail("carrier of sort " + s.sorts[k] + " is not a " + std::string(to_string(s.kind)) +
           " object");
    }
    check_structure(s.kind, carriers_[k].size(), carriers_[k].structure);
  }
  tables_.resize(s.ops.size());
  cells_.resize(s.ops.size());
  for (OpId o = 0; o < s.ops.size(); ++o) {
    std::uint64_t cells = 1;
    for (auto in : s.ops[o].inputs) {
      const std::uint64_t n = carriers_.at(in).size();
      if (n != 0 && cells > std::numeric_limits<std::uint64_t>::max() / n) {
        unsupported("operation " + s.ops[o].name + " has too many argument tuples");
      }
      cells *= n;
    }
    cells_[o] = cells;
    if (!partial_ && cells > kDenseLimit) {
      unsupported("operation table of " + s.ops[o].name + " is too large for a total algebra");
    }
    tables_[o].resize(s.ops[o].points());
    if (!partial_) {
      for (auto& t : tables_[o]) t.dense.assign(cells, kUndefined);
    }
  }
}

void Algebra::set_structure(SortId s, StructureData structure) {
  check_structure(kind(), carriers_.at(s).size(), structure);
  carriers_[s].structure = std::move(structure);
}

std::uint64_t Algebra::cell(OpId op, std::span<const std::size_t> args) const {
  const auto& inputs = sig_->ops.at(op).inputs;
  if (args.size() != inputs.size()) fail("wrong number of arguments for " + sig_->ops[op].name);
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto n = carriers_[inputs[i]].size();
    if (args[i] >= n) fail("argument outside carrier for " + sig_->ops[op].name);
    index = index * n + args[i];
  }
  return index;
}

std::size_t Algebra::apply(OpId op, std::size_t point, std::span<const std::size_t> args) const {
  const auto& table = tables_.at(op).at(point);
  const auto c = cell(op, args);
  if (!partial_) return table.dense[c];
  auto it = table.sparse.find(c);
  return it == table.sparse.end() ? kUndefined : it->second;
}

void Algebra::set(OpId op, std::size_t point, std::span<const std::size_t> args,
                  std::size_t value) {
  if (value >= carriers_[sig_->ops.at(op).output].size()) {
    fail("value outside carrier for " + sig_->ops[op].name);
  }
  auto& table = tables_.at(op).at(point);
  const auto c = cell(op, args);
  if (partial_) {
    table.sparse[c] = value;
  } else {
    table.dense[c] = value;
  }
}

void Algebra::for_each_defined(
    OpId op, std::size_t point,
    const std::function<void(std::span<const std::size_t>, std::size_t)>& fn) const {
  const auto& inputs = sig_->ops.at(op).inputs;
  const auto& table = tables_.at(op).at(point);
  std::vector<std::size_t> args(inputs.size());
  auto decode = [&](std::uint64_t c) {
    for (std::size_t i = inputs.size(); i-- > 0;) {
      const auto n = carriers_[inputs[i]].size();
      args[i] = c % n;
      c /= n;
    }
  };
  if (partial_) {
    for (const auto& [c, v] : table.sparse) {
      decode(c);
      fn(args, v);
    }
    return;
  }
  for (std::uint64_t c = 0; c < cells_[op]; ++c) {
    if (table.dense[c] == kUndefined) continue;
    decode(c);
    fn(args, table.dense[c]);
  }
}

void Algebra::check_total() const {
  const auto& s = *sig_;
  std::string missing;
  for (OpId o = 0; o < s.ops.size(); ++o) {
    for (std::size_t p = 0; p < s.ops[o].points(); ++p) {
      const auto& table = tables_[o][p];
      const std::uint64_t defined = partial_ ? table.sparse.size() : [&] {
        std::uint64_t n = 0;
        for (auto v : table.dense) n += v != kUndefined;
        return n;
      }();
      if (defined == cells_[o]) continue;
      std::vector<std::size_t> args(s.ops[o].arity());
      std::string list;
      std::size_t shown = 0;
      for (std::uint64_t c = 0; c < cells_[o] && shown < 8; ++c) {
        std::uint64_t rest = c;
        for (std::size_t i = args.size(); i-- > 0;) {
          const auto n = carriers_[s.ops[o].inputs[i]].size();
          args[i] = rest % n;
          rest /= n;
        }
        if (apply(o, p, args) != kUndefined) continue;
        list += (shown ? ", " : "") + tuple_text(*this, s.ops[o].inputs, args);
        ++shown;
      }
      missing += "\n  " + symbol_name(s, o, p) + " undefined at " + list +
                 (cells_[o] - defined > shown ? ", ..." : "");
    }
  }
  if (!missing.empty()) fail("operation tables are not total:" + missing);
}

AlgebraReport validate_algebra(const Algebra& a) {
  const auto& s = a.signature();
  if (!a.partial()) a.check_total();
  AlgebraReport report;
  for (OpId o = 0; o < s.ops.size(); ++o) {
    const auto& op = s.ops[o];
    std::vector<const VObject*> factors{&op.parameter};
    for (auto in : op.inputs) factors.push_back(&a.carrier(in));
    ProductDomain domain(s.kind, factors);
    TupleMap f = [&](ProductDomain::Coords c) {
      return a.apply(o, c[0], c.subspan(1));
    };
    std::string witness;
    if (!is_admissible_from_product(domain, f, a.carrier(op.output).structure, &witness)) {
      report.failures.push_back({o, op.name + ": " + witness});
    }
  }
  return report;
}

Homomorphism identity_homomorphism(std::shared_ptr<const Algebra> a) {
  Homomorphism h{a, a, {}};
  for (SortId s = 0; s < a->sorts(); ++s) {
    std::vector<std::size_t> t(a->carrier(s).size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = i;
    h.tables.push_back(std::move(t));
  }
  return h;
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  if (f.cod.get() != g.dom.get()) fail("composing homomorphisms that do not meet");
  Homomorphism h{f.dom, g.cod, {}};
  for (SortId s = 0; s < f.tables.size(); ++s) {
    std::vector<std::size_t> t;
    for (auto v : f.tables[s]) t.push_back(g.tables[s].at(v));
    h.tables.push_back(std::move(t));
  }
  return h;
}

CheckResult is_homomorphism(const Homomorphism& h) {
  const auto& a = *h.dom;
  const auto& b = *h.cod;
  const auto& s = a.signature();
  if (s.sorts != b.signature().sorts || s.ops.size() != b.signature().ops.size()) {
    fail("homomorphism between algebras of different signatures");
  }
  if (h.tables.size() != a.sorts()) fail("homomorphism has the wrong number of sort tables");
  for (SortId k = 0; k < a.sorts(); ++k) {
    if (h.tables[k].size() != a.carrier(k).size()) {
      fail("homomorphism table for sort " + s.sorts[k] + " is not total");
    }
    for (auto v : h.tables[k]) {
      if (v >= b.carrier(k).size()) fail("homomorphism value outside codomain carrier");
    }
  }
  for (OpId o = 0; o < s.ops.size(); ++o) {
    const auto& op = s.ops[o];
    for (std::size_t p = 0; p < op.points(); ++p) {
      std::string witness;
      a.for_each_defined(o, p, [&](std::span<const std::size_t> args, std::size_t value) {
        if (!witness.empty()) return;
        std::vector<std::size_t> image(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) image[i] = h.tables[op.inputs[i]][args[i]];
        const auto lhs = h.tables[op.output][value];
        const auto rhs = b.apply(o, p, image);
        if (rhs == kUndefined) {
          if (b.partial()) return;
          fail("codomain table undefined");
        }
        if (lhs != rhs) {
          witness = "h(" + symbol_name(s, o, p) + tuple_text(a, op.inputs, args) + ") = " +
                    b.carrier(op.output).carrier.name(lhs) + " but " + symbol_name(s, o, p) +
                    tuple_text(b, op.inputs, image) + " = " +
                    b.carrier(op.output).carrier.name(rhs);
        }
      });
      if (!witness.empty()) return CheckResult::failure(witness);
    }
  }
  for (SortId k = 0; k < a.sorts(); ++k) {
    std::string witness;
    if (!is_admissible(s.kind, a.carrier(k).structure, h.tables[k], b.carrier(k).structure,
                       &witness)) {
      return CheckResult::failure("sort " + s.sorts[k] + " map not admissible: " + witness);
    }
  }
  return {};
}

std::size_t interpret(const Algebra& a, const Term& t, std::span<const std::size_t> env) {
  if (t.is_var) return env[t.var];
  std::vector<std::size_t> args;
  args.reserve(t.args.size());
  for (const auto& sub : t.args) {
    auto v = interpret(a, sub, env);
    if (v == kUndefined) return kUndefined;
    args.push_back(v);
  }
  return a.apply(t.op, t.point, args);
}

std::size_t interpret(const Algebra& a, const Context& context, const TermInContext& t,
                      std::span<const std::size_t> env) {
  if (env.size() != context.size()) fail("environment does not cover the context");
  for (std::size_t v = 0; v < context.size(); ++v) {
    if (context[v].second >= a.sorts() || env[v] >= a.carrier(context[v].second).size()) {
      fail("environment value for '" + context[v].first + "' is not in the carrier of its sort");
    }
  }
  return interpret(a, resolve_term(a.signature(), context, t), env);
}

SatisfactionResult satisfies(const Algebra& a, const SyntacticEquation& eq) {
  const auto r = resolve_equation(a.signature(), eq);
  std::vector<std::size_t> radix;
  for (const auto& [v, s] : r.context) {
    radix.push_back(a.carrier(s).size());
    if (radix.back() == 0) return {};
  }
  std::vector<std::size_t> env(radix.size(), 0);
  do {
    const auto lhs = interpret(a, r.lhs, env);
    const auto rhs = interpret(a, r.rhs, env);
    if (lhs != kUndefined && rhs != kUndefined && lhs != rhs) {
      SatisfactionResult out;
      out.holds = false;
      out.env = env;
      const auto& names = a.carrier(r.sort).carrier;
      for (std::size_t v = 0; v < env.size(); ++v) {
        out.witness += (v ? ", " : "") + r.context[v].first + "=" +
                       a.carrier(r.context[v].second).carrier.name(env[v]);
      }
      out.witness = "[" + out.witness + "] lhs = " + names.name(lhs) + ", rhs = " + names.name(rhs);
      return out;
    }
  } while (next_tuple(env, radix));
  return {};
}

Algebra indiscrete_algebra(const Algebra& a) {
  std::vector<VObject> carriers;
  for (const auto& c : a.carriers()) carriers.push_back(indiscrete_object(c.kind, c.carrier));
  Algebra out(a.signature_ptr(), std::move(carriers), a.partial());
  const auto& s = a.signature();
  for (OpId o = 0; o < s.ops.size(); ++o) {
    for (std::size_t p = 0; p < s.ops[o].points(); ++p) {
      a.for_each_defined(o, p, [&](std::span<const std::size_t> args, std::size_t v) {
        out.set(o, p, args, v);
      });
    }
  }
  return out;
}

}  // namespace enralg
