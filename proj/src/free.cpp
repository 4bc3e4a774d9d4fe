#include "enralg/free.hpp"

#include <numeric>

#include "enralg/error.hpp"

namespace enralg {

namespace {

struct Chain {
  std::vector<SortedStructure> stages;
  bool fixpoint = false;
};

void check_generators(const EnrichedSignature& sig, const std::vector<VObject>& generators) {
  if (generators.size() != sig.sorts.size()) {
    fail("generator family has " + std::to_string(generators.size()) + " sorts, signature has " +
         std::to_string(sig.sorts.size()));
  }
  for (SortId s = 0; s < generators.size(); ++s) {
    if (generators[s].kind != sig.kind) {
      fail("generators of sort " + sig.sorts[s] + " are not a " +
           std::string(to_string(sig.kind)) + " object");
    }
    check_structure(sig.kind, generators[s].size(), generators[s].structure);
  }
}

Chain run_chain(const EnrichedSignature& sig, const std::vector<VObject>& generators,
                const TermUniverse& u, std::size_t max_stages) {
  if (!is_cartesian_closed(sig.kind)) {
    unsupported("instance not cartesian closed: free " + std::string(to_string(sig.kind)) +
                " algebras are not computed");
  }
  check_generators(sig, generators);
  const std::size_t sorts = sig.sorts.size();
  for (SortId s = 0; s < sorts; ++s) {
    if (!(u.generators()[s] == generators[s].carrier)) {
      fail("term universe was generated from different generators");
    }
  }
  std::vector<Carrier> carriers;
  for (SortId s = 0; s < sorts; ++s) carriers.push_back(u.carrier(s));

  Chain chain;
  SortedStructure stage;
  for (SortId s = 0; s < sorts; ++s) {
    // Constants come first in each sort, so eta is x |-> x.
    std::vector<std::size_t> eta(generators[s].size());
    std::iota(eta.begin(), eta.end(), std::size_t{0});
    FinalLiftBuilder b(sig.kind, carriers[s].size());
    b.add_image(generators[s], eta);
    stage.push_back(std::move(b).finish());
  }
  chain.stages.push_back(stage);

  for (std::size_t n = 0; n < max_stages; ++n) {
    std::vector<VObject> current;
    for (SortId s = 0; s < sorts; ++s) current.push_back(VObject{sig.kind, carriers[s], stage[s]});
    SortedStructure next;
    for (SortId s = 0; s < sorts; ++s) {
      FinalLiftBuilder b(sig.kind, carriers[s].size());
      b.add_structure(stage[s]);
      for (OpId o = 0; o < sig.ops.size(); ++o) {
        const auto& op = sig.ops[o];
        if (op.output != s) continue;
        std::vector<const VObject*> factors{&op.parameter};
        for (auto in : op.inputs) factors.push_back(&current[in]);
        ProductDomain domain(sig.kind, factors);
        std::vector<TermId> args(op.arity());
        b.add_product_image(domain, [&](ProductDomain::Coords c) -> std::size_t {
          for (std::size_t i = 0; i < args.size(); ++i) args[i] = u.terms_of(op.inputs[i])[c[i + 1]];
          auto t = u.find_app(o, c[0], args);
          return t ? u.node(*t).local : kUndefined;
        });
      }
      next.push_back(std::move(b).finish());
    }
    if (next == stage) {
      chain.fixpoint = true;
      return chain;
    }
    stage = std::move(next);
    chain.stages.push_back(stage);
  }
  return chain;
}

}  // namespace

std::vector<SortedStructure> omega_chain(const EnrichedSignature& sig,
                                         const std::vector<VObject>& generators,
                                         const TermUniverse& universe, std::size_t max_stages) {
  return run_chain(sig, generators, universe, max_stages).stages;
}

FreeAlgebra free_theory(std::shared_ptr<const Theory> theory, std::vector<VObject> generators,
                        const GenerationPolicy& policy) {
  std::shared_ptr<const EnrichedSignature> sig(theory, &theory->signature);
  if (!is_cartesian_closed(sig->kind)) {
    unsupported("instance not cartesian closed: free " + std::string(to_string(sig->kind)) +
                " algebras are not computed");
  }
  if (auto report = validate_theory(*theory); !report.valid()) {
    fail("invalid theory:\n" + report.to_string());
  }
  check_generators(*sig, generators);

  FreeAlgebra f;
  f.theory = theory;
  f.generators = std::move(generators);
  std::vector<Carrier> names;
  for (const auto& g : f.generators) names.push_back(g.carrier);
  f.universe = std::make_shared<const TermUniverse>(sig, std::move(names), policy);
  const auto& u = *f.universe;
  f.warnings = u.warnings();

  auto chain = run_chain(*sig, f.generators, u, policy.max_stages);
  f.omega_stages = chain.stages.size() - 1;
  if (!chain.fixpoint) {
    f.warnings.push_back("structure iteration stopped after " + std::to_string(policy.max_stages) +
                         " stages without reaching a fixpoint");
  }
  f.exact = u.finite() && chain.fixpoint;

  std::vector<VObject> carriers;
  for (SortId s = 0; s < sig->sorts.size(); ++s) {
    carriers.push_back(VObject{sig->kind, u.carrier(s), chain.stages.back()[s]});
  }
  auto terms = std::make_shared<Algebra>(sig, std::move(carriers), !u.finite());
  for (TermId t = 0; t < u.size(); ++t) {
    const auto& n = u.node(t);
    if (n.is_const) continue;
    std::vector<std::size_t> args;
    for (auto a : n.args) args.push_back(u.node(a).local);
    terms->set(n.op, n.point, args, n.local);
  }
  f.term_algebra = terms;

  f.congruence = generated_congruence(u, theory->equations);
  auto q = quotient(f.term_algebra, f.congruence);
  f.algebra = q.algebra;
  f.quotient_map = std::move(q.q);
  for (SortId s = 0; s < sig->sorts.size(); ++s) {
    std::vector<std::size_t> eta;
    for (std::size_t x = 0; x < f.generators[s].size(); ++x) {
      eta.push_back(f.quotient_map.tables[s][x]);
    }
    f.unit.push_back(std::move(eta));
  }
  return f;
}

FreeAlgebra free_sigma(std::shared_ptr<const EnrichedSignature> sig,
                       std::vector<VObject> generators, const GenerationPolicy& policy) {
  return free_theory(std::make_shared<const Theory>(Theory{*sig, {}}), std::move(generators),
                     policy);
}

StructuredMap unit(const FreeAlgebra& f, SortId s) {
  return StructuredMap{f.generators.at(s), f.algebra->carrier(s), f.unit.at(s)};
}

Homomorphism extend(const FreeAlgebra& f, std::shared_ptr<const Algebra> target,
                    const std::vector<std::vector<std::size_t>>& assignment) {
  const auto& sig = f.theory->signature;
  const auto& b = *target;
  if (b.signature().sorts != sig.sorts || b.signature().ops.size() != sig.ops.size()) {
    fail("target algebra has a different signature");
  }
  if (b.partial()) fail("target algebra must be total");
  if (auto report = validate_algebra(b); !report.valid()) {
    fail("target is not a valid algebra: " + report.failures.front().witness);
  }
  for (const auto& eq : f.theory->equations) {
    if (auto sat = satisfies(b, eq); !sat) {
      fail("target violates " + to_string(sig, eq) + " at " + sat.witness);
    }
  }
  if (assignment.size() != sig.sorts.size()) fail("assignment has the wrong number of sorts");
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    if (assignment[s].size() != f.generators[s].size()) {
      fail("assignment is not total on the generators of sort " + sig.sorts[s]);
    }
    for (auto v : assignment[s]) {
      if (v >= b.carrier(s).size()) fail("assignment value outside the target carrier");
    }
    std::string witness;
    if (!is_admissible(sig.kind, f.generators[s].structure, assignment[s],
                       b.carrier(s).structure, &witness)) {
      fail("assignment at sort " + sig.sorts[s] + " is not admissible: " + witness);
    }
  }

  const auto& u = *f.universe;
  std::vector<std::size_t> value(u.size());
  for (TermId t = 0; t < u.size(); ++t) {
    const auto& n = u.node(t);
    if (n.is_const) {
      value[t] = assignment[n.sort][n.element];
      continue;
    }
    std::vector<std::size_t> args;
    for (auto a : n.args) args.push_back(value[a]);
    value[t] = b.apply(n.op, n.point, args);
  }

  std::vector<std::vector<std::size_t>> tables(sig.sorts.size());
  for (SortId s = 0; s < sig.sorts.size(); ++s) {
    const auto& terms = u.terms_of(s);
    for (std::size_t c = 0; c < f.congruence.class_count(s); ++c) {
      const auto& members = f.congruence.members(s, c);
      const auto v = value[terms[members.front()]];
      for (auto m : members) {
        if (value[terms[m]] != v) {
          fail("extension is not well defined on the class of " + u.to_string(terms[members.front()]) +
               ": " + u.to_string(terms[members.front()]) + " |-> " + b.carrier(s).carrier.name(v) +
               " but " + u.to_string(terms[m]) + " |-> " +
               b.carrier(s).carrier.name(value[terms[m]]));
        }
      }
      tables[s].push_back(v);
    }
  }
  Homomorphism h{f.algebra, std::move(target), std::move(tables)};
  if (auto r = is_homomorphism(h); !r) fail("extension is not a homomorphism: " + r.witness);
  return h;
}

}  // namespace enralg
