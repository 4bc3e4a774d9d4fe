#include "enralg/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "enralg/error.hpp"

namespace enralg {

namespace {

void require_complete(const TermUniverse& u) {
  if (!u.finite()) {
    unsupported("compatibility is only checked on a complete term set; this universe is "
                "truncated at depth " + std::to_string(u.depth_reached()));
  }
}

// Classical data the compatibility conditions range over: operation tables
// (structures ignored) and the unit as plain functions.
struct ClassicalData {
  std::shared_ptr<const Algebra> algebra;
  std::vector<std::vector<std::size_t>> unit;
};

ClassicalData term_data(const TermUniverse& u) {
  const auto& sig = u.signature();
  std::vector<VObject> carriers;
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    carriers.push_back(discrete_object(sig.kind, u.carrier(s)));
  }
  auto a = std::make_shared<Algebra>(u.signature_ptr(), std::move(carriers));
  for (TermId t = 0; t < u.size(); ++t) {
    const auto& n = u.node(t);
    if (n.is_const) continue;
    std::vector<std::size_t> args;
    for (auto x : n.args) args.push_back(u.node(x).local);
    a->set(n.op, n.point, args, n.local);
  }
  ClassicalData d{a, {}};
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    std::vector<std::size_t> eta(u.generators()[s].size());
    std::iota(eta.begin(), eta.end(), std::size_t{0});
    d.unit.push_back(std::move(eta));
  }
  return d;
}

ClassicalData class_data(const TermUniverse& u, const SortedCongruence& c) {
  const auto& sig = u.signature();
  if (c.sorts() != sig.sorts.size()) fail("congruence has the wrong number of sorts");
  std::vector<VObject> carriers;
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    if (c.size(s) != u.terms_of(s).size()) fail("congruence does not cover the term set");
    std::vector<std::string> names;
    for (std::size_t k = 0; k < c.class_count(s); ++k) {
      names.push_back(u.to_string(u.terms_of(s)[c.representative(s, k)]));
    }
    carriers.push_back(discrete_object(sig.kind, Carrier(std::move(names))));
  }
  auto a = std::make_shared<Algebra>(u.signature_ptr(), std::move(carriers));
  for (TermId t = 0; t < u.size(); ++t) {
    const auto& n = u.node(t);
    if (n.is_const) continue;
    std::vector<std::size_t> args;
    for (auto x : n.args) args.push_back(c.class_of(u.node(x).sort, u.node(x).local));
    const auto value = c.class_of(n.sort, n.local);
    const auto old = a->apply(n.op, n.point, args);
    if (old != kUndefined && old != value) {
      fail("partition is not compatible with " + symbol_name(sig, n.op, n.point));
    }
    a->set(n.op, n.point, args, value);
  }
  ClassicalData d{a, {}};
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    std::vector<std::size_t> eta;
    for (std::size_t x = 0; x < u.generators()[s].size(); ++x) eta.push_back(c.class_of(s, x));
    d.unit.push_back(std::move(eta));
  }
  return d;
}

class CompatChecker {
 public:
  CompatChecker(const ClassicalData& data, const std::vector<VObject>& generators)
      : data_(data), generators_(generators) {
    const auto& a = *data_.algebra;
    const auto& sig = a.signature();
    if (generators.size() != sig.sorts.size()) fail("generator family has the wrong sort count");
    for (SortId s = 0; s < sig.sorts.size(); ++s) {
      if (generators[s].kind != sig.kind) fail("generator kind does not match the signature");
      current_.push_back(a.carrier(s));
    }
  }

  void assign(SortId s, const StructureData& b) { current_[s].structure = b; }

  CompatReport unit_at(SortId s) const {
    std::string w;
    const auto kind = data_.algebra->kind();
    if (!is_admissible(kind, generators_[s].structure, data_.unit[s], current_[s].structure, &w)) {
      return {false, "unit at sort " + data_.algebra->signature().sorts[s], w};
    }
    return {};
  }

  CompatReport operation(OpId o) const {
    const auto& a = *data_.algebra;
    const auto& op = a.signature().ops[o];
    std::vector<const VObject*> factors{&op.parameter};
    for (auto in : op.inputs) factors.push_back(&current_[in]);
    ProductDomain domain(a.kind(), factors);
    std::string w;
    TupleMap f = [&](ProductDomain::Coords c) { return a.apply(o, c[0], c.subspan(1)); };
    if (!is_admissible_from_product(domain, f, current_[op.output].structure, &w)) {
      return {false, "operation " + op.name, w};
    }
    return {};
  }

  CompatReport all() const {
    for (SortId s = 0; s < current_.size(); ++s) {
      if (auto r = unit_at(s); !r) return r;
    }
    for (OpId o = 0; o < data_.algebra->signature().ops.size(); ++o) {
      if (auto r = operation(o); !r) return r;
    }
    return {};
  }

  const VObject& carrier(SortId s) const { return current_[s]; }

 private:
  const ClassicalData& data_;
  const std::vector<VObject>& generators_;
  std::vector<VObject> current_;
};

CompatReport check_all(const SortedStructure& b, const ClassicalData& data,
                       const std::vector<VObject>& generators) {
  CompatChecker checker(data, generators);
  if (b.size() != data.algebra->sorts()) fail("structure has the wrong number of sorts");
  for (SortId s = 0; s < b.size(); ++s) {
    check_structure(data.algebra->kind(), data.algebra->carrier(s).size(), b[s]);
    checker.assign(s, b[s]);
  }
  return checker.all();
}

std::string simplex_names(const Carrier& c, const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + c.name(s[i]);
  return out + "}";
}

}  // namespace

CompatReport is_sigma_compatible(const SortedStructure& b, const EnrichedSignature& sig,
                                 const std::vector<VObject>& generators,
                                 const TermUniverse& universe) {
  require_complete(universe);
  if (universe.signature().sorts != sig.sorts) fail("universe belongs to another signature");
  return check_all(b, term_data(universe), generators);
}

CompatReport is_theory_compatible(const SortedStructure& b, const Theory& theory,
                                  const std::vector<VObject>& generators,
                                  const TermUniverse& universe,
                                  const SortedCongruence& congruence) {
  require_complete(universe);
  if (universe.signature().sorts != theory.signature.sorts) {
    fail("universe belongs to another signature");
  }
  return check_all(b, class_data(universe, congruence), generators);
}

BruteForceResult brute_force_free(const Theory& theory, const std::vector<VObject>& generators,
                                  const GenerationPolicy& policy, const FibreCaps& caps) {
  if (auto report = validate_theory(theory); !report.valid()) {
    fail("invalid theory:\n" + report.to_string());
  }
  const auto& sig = theory.signature;
  if (generators.size() != sig.sorts.size()) fail("generator family has the wrong sort count");
  auto sig_ptr = std::make_shared<const EnrichedSignature>(sig);
  std::vector<Carrier> names;
  for (const auto& g : generators) names.push_back(g.carrier);
  TermUniverse u(sig_ptr, std::move(names), policy);
  require_complete(u);
  const auto congruence = generated_congruence(u, theory.equations);
  const auto data = class_data(u, congruence);
  CompatChecker checker(data, generators);
  const std::size_t sorts = sig.sorts.size();

  // Operations are checked once the last of their sorts is assigned; those
  // living on a single sort already filter that sort's candidates.
  std::vector<std::vector<OpId>> due(sorts);
  std::vector<std::vector<OpId>> local(sorts);
  for (OpId o = 0; o < sig.ops.size(); ++o) {
    const auto& op = sig.ops[o];
    SortId last = op.output;
    bool single = true;
    for (auto in : op.inputs) {
      last = std::max(last, in);
      single = single && in == op.output;
    }
    (single ? local[last] : due[last]).push_back(o);
  }

  std::vector<std::vector<StructureData>> candidates(sorts);
  for (SortId s = 0; s < sorts; ++s) {
    const auto n = data.algebra->carrier(s).size();
    if (n > caps.cap(sig.kind)) {
      unsupported("oracle refused: carrier of sort " + sig.sorts[s] + " has " + std::to_string(n) +
                  " elements, over the " + std::string(to_string(sig.kind)) + " fibre cap of " +
                  std::to_string(caps.cap(sig.kind)));
    }
    for_each_fibre_element(sig.kind, n, caps, [&](const StructureData& b) {
      checker.assign(s, b);
      if (!checker.unit_at(s)) return true;
      for (auto o : local[s]) {
        if (!checker.operation(o)) return true;
      }
      candidates[s].push_back(b);
      return true;
    });
  }

  BruteForceResult result;
  for (SortId s = 0; s < sorts; ++s) {
    result.carriers.push_back(data.algebra->carrier(s).carrier);
    result.structure.push_back(indiscrete_structure(sig.kind, result.carriers[s].size()));
  }
  std::vector<std::size_t> choice(sorts, 0);
  std::function<void(SortId)> search = [&](SortId s) {
    if (s == sorts) {
      ++result.compatible;
      for (SortId k = 0; k < sorts; ++k) {
        std::vector<StructureData> pair{result.structure[k], candidates[k][choice[k]]};
        result.structure[k] = fib_inf(sig.kind, result.carriers[k].size(), pair);
      }
      return;
    }
    for (std::size_t i = 0; i < candidates[s].size(); ++i) {
      ++result.candidates;
      choice[s] = i;
      checker.assign(s, candidates[s][i]);
      bool ok = true;
      for (auto o : due[s]) {
        if (!checker.operation(o)) {
          ok = false;
          break;
        }
      }
      if (ok) search(s + 1);
    }
  };
  search(0);
  if (result.compatible == 0) fail("no compatible structure found; the indiscrete one always is");
  return result;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "equal";
    case Verdict::Differ: return "differ";
    case Verdict::Unsupported: return "unsupported";
  }
  return "?";
}

std::optional<std::string> compare_structures(InstanceKind kind, const Carrier& carrier,
                                              const StructureData& fast,
                                              const StructureData& oracle) {
  if (fast == oracle) return std::nullopt;
  const std::size_t n = carrier.size();
  switch (kind) {
    case InstanceKind::Set: return std::nullopt;
    case InstanceKind::Rel:
    case InstanceKind::Preord: {
      const auto& a = std::get<Relation>(fast);
      const auto& b = std::get<Relation>(oracle);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (a.test(i, j) == b.test(i, j)) continue;
          return "pair (" + carrier.name(i) + ", " + carrier.name(j) + ") only in the " +
                 (a.test(i, j) ? "constructed" : "oracle") + " structure";
        }
      }
      break;
    }
    case InstanceKind::Simp: {
      const auto& a = std::get<Complex>(fast);
      const auto& b = std::get<Complex>(oracle);
      for (const auto& f : a.facets()) {
        if (!b.contains(f)) return "simplex " + simplex_names(carrier, f) + " only in the constructed structure";
      }
      for (const auto& f : b.facets()) {
        if (!a.contains(f)) return "simplex " + simplex_names(carrier, f) + " only in the oracle structure";
      }
      break;
    }
    case InstanceKind::PMet: {
      const auto& a = std::get<Metric>(fast);
      const auto& b = std::get<Metric>(oracle);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (a.at(i, j) == b.at(i, j)) continue;
          return "d(" + carrier.name(i) + ", " + carrier.name(j) + ") is " + to_string(a.at(i, j)) +
                 " constructed but " + to_string(b.at(i, j)) + " in the oracle";
        }
      }
      break;
    }
  }
  return "structures differ";
}

CompareReport compare_sorted(const EnrichedSignature& sig, const std::vector<Carrier>& carriers,
                             const SortedStructure& fast, const SortedStructure& oracle) {
  CompareReport report;
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    auto diff = compare_structures(sig.kind, carriers.at(s), fast.at(s), oracle.at(s));
    report.sort_equal.push_back(!diff);
    if (diff && report.verdict == Verdict::Equal) {
      report.verdict = Verdict::Differ;
      report.detail = "sort " + sig.sorts[s] + ": " + *diff;
    }
  }
  return report;
}

CompareReport compare_free(const Theory& theory, const std::vector<VObject>& generators,
                           const GenerationPolicy& policy, const FibreCaps& caps) {
  CompareReport report;
  const auto kind = theory.kind();
  if (kind == InstanceKind::PMet) {
    report.verdict = Verdict::Unsupported;
    report.detail = "PMet fibres are infinite and cannot be enumerated";
    return report;
  }
  try {
    auto f = free_theory(std::make_shared<const Theory>(theory), generators, policy);
    if (!f.exact) {
      report.verdict = Verdict::Unsupported;
      report.detail = "free algebra is not exact (term set truncated)";
      return report;
    }
    auto oracle = brute_force_free(theory, generators, policy, caps);
    std::vector<Carrier> carriers;
    SortedStructure fast;
    for (SortId s = 0; s < theory.signature.sorts.size(); ++s) {
      carriers.push_back(f.algebra->carrier(s).carrier);
      fast.push_back(f.algebra->carrier(s).structure);
      if (!(carriers[s] == oracle.carriers[s])) {
        report.verdict = Verdict::Differ;
        report.detail = "sort " + theory.signature.sorts[s] + ": carriers differ";
        report.sort_equal.assign(theory.signature.sorts.size(), false);
        return report;
      }
    }
    return compare_sorted(theory.signature, carriers, fast, oracle.structure);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsupported) throw;
    report.verdict = Verdict::Unsupported;
    report.detail = e.what();
    return report;
  }
}

}  // namespace enralg
