#include "enralg/congruence.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "enralg/error.hpp"

namespace enralg {

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<std::size_t>& k) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto v : k) h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

// Ground congruence closure: union-find over one element space, with a
// signature table keyed by (op, point, argument roots) and use lists so a
// merge only revisits the applications mentioning the absorbed class.
class Closure {
 public:
  explicit Closure(std::size_t n) : parent_(n), uses_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  void add_application(OpId op, std::size_t point, std::vector<std::size_t> args,
                       std::size_t result) {
    const std::size_t e = entries_.size();
    std::vector<std::size_t> seen;
    for (auto a : args) {
      if (std::find(seen.begin(), seen.end(), a) == seen.end()) {
        uses_[a].push_back(e);
        seen.push_back(a);
      }
    }
    entries_.push_back({op, point, std::move(args), result});
    auto [it, inserted] = table_.emplace(key(e), e);
    if (!inserted) pending_.emplace_back(result, entries_[it->second].result);
  }

  void merge(std::size_t a, std::size_t b) { pending_.emplace_back(a, b); }

  void run() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.front();
      pending_.pop_front();
      std::size_t ra = find(a);
      std::size_t rb = find(b);
      if (ra == rb) continue;
      if (uses_[ra].size() > uses_[rb].size()) std::swap(ra, rb);
      for (auto e : uses_[ra]) {
        auto it = table_.find(key(e));
        if (it != table_.end() && it->second == e) table_.erase(it);
      }
      parent_[ra] = rb;
      for (auto e : uses_[ra]) {
        auto [it, inserted] = table_.emplace(key(e), e);
        if (!inserted && find(entries_[it->second].result) != find(entries_[e].result)) {
          pending_.emplace_back(entries_[e].result, entries_[it->second].result);
        }
        uses_[rb].push_back(e);
      }
      uses_[ra].clear();
      uses_[ra].shrink_to_fit();
    }
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

 private:
  struct Entry {
    OpId op;
    std::size_t point;
    std::vector<std::size_t> args;
    std::size_t result;
  };

  std::vector<std::size_t> key(std::size_t e) {
    const auto& entry = entries_[e];
    std::vector<std::size_t> k{entry.op, entry.point};
    for (auto a : entry.args) k.push_back(find(a));
    return k;
  }

  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> uses_;
  std::vector<Entry> entries_;
  std::unordered_map<std::vector<std::size_t>, std::size_t, VectorHash> table_;
  std::deque<std::pair<std::size_t, std::size_t>> pending_;
};

bool next_tuple(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

bool match(const TermUniverse& u, const Term& pattern, TermId t,
           std::vector<std::optional<TermId>>& binding) {
  if (pattern.is_var) {
    auto& b = binding[pattern.var];
    if (b) return *b == t;
    b = t;
    return true;
  }
  const auto& n = u.node(t);
  if (n.is_const || n.op != pattern.op || n.point != pattern.point) return false;
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (!match(u, pattern.args[i], n.args[i], binding)) return false;
  }
  return true;
}

std::optional<TermId> instantiate(const TermUniverse& u, const Term& t,
                                  const std::vector<std::optional<TermId>>& binding) {
  if (t.is_var) return binding[t.var];
  std::vector<TermId> args;
  for (const auto& a : t.args) {
    auto v = instantiate(u, a, binding);
    if (!v) return std::nullopt;
    args.push_back(*v);
  }
  return u.find_app(t.op, t.point, args);
}

void collect_vars(const Term& t, std::vector<bool>& used) {
  if (t.is_var) {
    used[t.var] = true;
    return;
  }
  for (const auto& a : t.args) collect_vars(a, used);
}

}  // namespace

SortedCongruence SortedCongruence::from_labels(const std::vector<std::vector<std::size_t>>& labels) {
  SortedCongruence c;
  for (const auto& sort_labels : labels) {
    std::unordered_map<std::size_t, std::size_t> renumber;
    std::vector<std::size_t> class_of(sort_labels.size());
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t x = 0; x < sort_labels.size(); ++x) {
      auto [it, fresh] = renumber.emplace(sort_labels[x], classes.size());
      if (fresh) classes.emplace_back();
      class_of[x] = it->second;
      classes[it->second].push_back(x);
    }
    c.class_of_.push_back(std::move(class_of));
    c.classes_.push_back(std::move(classes));
  }
  return c;
}

SortedCongruence SortedCongruence::identity(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::size_t>> labels;
  for (auto n : sizes) {
    std::vector<std::size_t> l(n);
    std::iota(l.begin(), l.end(), std::size_t{0});
    labels.push_back(std::move(l));
  }
  return from_labels(labels);
}

bool SortedCongruence::refines(const SortedCongruence& other) const {
  if (sorts() != other.sorts()) fail("congruences over different sorts");
  for (std::size_t s = 0; s < sorts(); ++s) {
    if (size(s) != other.size(s)) fail("congruences over different carriers");
    for (const auto& cls : classes_[s]) {
      for (auto x : cls) {
        if (!other.related(s, cls.front(), x)) return false;
      }
    }
  }
  return true;
}

SortedCongruence generated_congruence(const Algebra& a,
                                      const std::vector<SyntacticEquation>& equations) {
  const auto& sig = a.signature();
  std::vector<std::size_t> offset(a.sorts() + 1, 0);
  for (SortId s = 0; s < a.sorts(); ++s) offset[s + 1] = offset[s] + a.carrier(s).size();
  Closure closure(offset.back());
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    const auto& op = sig.ops[o];
    for (std::size_t p = 0; p < op.points(); ++p) {
      a.for_each_defined(o, p, [&](std::span<const std::size_t> args, std::size_t value) {
        std::vector<std::size_t> global(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) global[i] = offset[op.inputs[i]] + args[i];
        closure.add_application(o, p, std::move(global), offset[op.output] + value);
      });
    }
  }
  for (const auto& eq : equations) {
    const auto r = resolve_equation(sig, eq);
    std::vector<std::size_t> radix;
    bool empty = false;
    for (const auto& [v, s] : r.context) {
      radix.push_back(a.carrier(s).size());
      empty = empty || radix.back() == 0;
    }
    if (empty) continue;
    std::vector<std::size_t> env(radix.size(), 0);
    do {
      const auto lhs = interpret(a, r.lhs, env);
      const auto rhs = interpret(a, r.rhs, env);
      if (lhs != kUndefined && rhs != kUndefined) {
        closure.merge(offset[r.sort] + lhs, offset[r.sort] + rhs);
      }
    } while (next_tuple(env, radix));
  }
  closure.run();
  std::vector<std::vector<std::size_t>> labels(a.sorts());
  for (SortId s = 0; s < a.sorts(); ++s) {
    for (std::size_t x = 0; x < a.carrier(s).size(); ++x) {
      labels[s].push_back(closure.find(offset[s] + x));
    }
  }
  return SortedCongruence::from_labels(labels);
}

std::vector<std::pair<TermId, TermId>> equation_instances(
    const TermUniverse& u, const std::vector<SyntacticEquation>& equations) {
  std::vector<std::pair<TermId, TermId>> seeds;
  for (const auto& eq : equations) {
    const auto r = resolve_equation(u.signature(), eq);
    bool empty = false;
    for (const auto& [v, s] : r.context) empty = empty || u.terms_of(s).empty();
    if (empty) continue;
    std::vector<bool> in_lhs(r.context.size(), false);
    std::vector<bool> in_rhs(r.context.size(), false);
    collect_vars(r.lhs, in_lhs);
    collect_vars(r.rhs, in_rhs);
    std::vector<std::size_t> free_vars;
    for (std::size_t v = 0; v < r.context.size(); ++v) {
      if (in_rhs[v] && !in_lhs[v]) free_vars.push_back(v);
    }
    for (auto t : u.terms_of(r.sort)) {
      std::vector<std::optional<TermId>> binding(r.context.size());
      if (!match(u, r.lhs, t, binding)) continue;
      std::vector<std::size_t> radix;
      for (auto v : free_vars) radix.push_back(u.terms_of(r.context[v].second).size());
      std::vector<std::size_t> digits(free_vars.size(), 0);
      do {
        for (std::size_t i = 0; i < free_vars.size(); ++i) {
          binding[free_vars[i]] = u.terms_of(r.context[free_vars[i]].second)[digits[i]];
        }
        if (auto rhs = instantiate(u, r.rhs, binding)) seeds.emplace_back(t, *rhs);
      } while (next_tuple(digits, radix));
    }
  }
  return seeds;
}

SortedCongruence generated_congruence(const TermUniverse& u,
                                      const std::vector<SyntacticEquation>& equations) {
  Closure closure(u.size());
  for (TermId t = 0; t < u.size(); ++t) {
    const auto& n = u.node(t);
    if (!n.is_const) closure.add_application(n.op, n.point, n.args, t);
  }
  for (auto [a, b] : equation_instances(u, equations)) closure.merge(a, b);
  closure.run();
  std::vector<std::vector<std::size_t>> labels(u.signature().sorts.size());
  for (SortId s = 0; s < labels.size(); ++s) {
    for (auto t : u.terms_of(s)) labels[s].push_back(closure.find(t));
  }
  return SortedCongruence::from_labels(labels);
}

SortedCongruence kernel_congruence(const Homomorphism& h) {
  if (auto r = is_homomorphism(h); !r) fail("not a homomorphism: " + r.witness);
  return SortedCongruence::from_labels(h.tables);
}

CheckResult is_congruence(const Algebra& a, const SortedCongruence& c) {
  const auto& sig = a.signature();
  if (c.sorts() != a.sorts()) fail("congruence has the wrong number of sorts");
  for (SortId s = 0; s < a.sorts(); ++s) {
    if (c.size(s) != a.carrier(s).size()) {
      fail("congruence does not cover the carrier of sort " + sig.sorts[s]);
    }
  }
  auto names = [&](const std::vector<SortId>& sorts, std::span<const std::size_t> args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      out += (i ? "," : "") + a.carrier(sorts[i]).carrier.name(args[i]);
    }
    return out + ")";
  };
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    const auto& op = sig.ops[o];
    for (std::size_t p = 0; p < op.points(); ++p) {
      std::unordered_map<std::vector<std::size_t>, std::pair<std::vector<std::size_t>, std::size_t>,
                         VectorHash>
          seen;
      std::string witness;
      a.for_each_defined(o, p, [&](std::span<const std::size_t> args, std::size_t value) {
        if (!witness.empty()) return;
        std::vector<std::size_t> classes(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) classes[i] = c.class_of(op.inputs[i], args[i]);
        std::vector<std::size_t> own(args.begin(), args.end());
        auto [it, fresh] = seen.emplace(std::move(classes), std::make_pair(own, value));
        if (fresh || c.related(op.output, it->second.second, value)) return;
        const auto& out = a.carrier(op.output).carrier;
        const auto sym = symbol_name(sig, o, p);
        witness = sym + names(op.inputs, it->second.first) + " = " + out.name(it->second.second) +
                  " and " + sym + names(op.inputs, own) + " = " + out.name(value) +
                  " have related arguments but unrelated values";
      });
      if (!witness.empty()) return CheckResult::failure(witness);
    }
  }
  return {};
}

Quotient quotient(std::shared_ptr<const Algebra> a, const SortedCongruence& c) {
  if (auto r = is_congruence(*a, c); !r) fail("not a congruence: " + r.witness);
  const auto& sig = a->signature();
  std::vector<VObject> carriers;
  std::vector<std::vector<std::size_t>> q(a->sorts());
  for (SortId s = 0; s < a->sorts(); ++s) {
    const auto& source = a->carrier(s);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < c.class_count(s); ++k) {
      names.push_back(source.carrier.name(c.representative(s, k)));
    }
    for (std::size_t x = 0; x < source.size(); ++x) q[s].push_back(c.class_of(s, x));
    Carrier target(std::move(names));
    SinkMap sink{&source, q[s]};
    auto structure = final_lift(sig.kind, target, {&sink, 1});
    carriers.push_back(VObject{sig.kind, std::move(target), std::move(structure)});
  }
  auto out = std::make_shared<Algebra>(a->signature_ptr(), std::move(carriers), a->partial());
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    const auto& op = sig.ops[o];
    for (std::size_t p = 0; p < op.points(); ++p) {
      a->for_each_defined(o, p, [&](std::span<const std::size_t> args, std::size_t value) {
        std::vector<std::size_t> classes(args.size());
        for (std::size_t i = 0; i < args.size(); ++i) classes[i] = q[op.inputs[i]][args[i]];
        const auto current = out->apply(o, p, classes);
        const auto target = q[op.output][value];
        if (current != kUndefined && current != target) {
          fail("quotient table of " + symbol_name(sig, o, p) + " is not well defined");
        }
        out->set(o, p, classes, target);
      });
    }
  }
  if (!a->partial()) out->check_total();
  std::shared_ptr<const Algebra> result = out;
  return {result, Homomorphism{std::move(a), result, std::move(q)}};
}

}  // namespace enralg
