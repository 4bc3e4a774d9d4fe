#pragma once

// Generated exact fixtures: stratified signatures (finite term sets) over
// Set, Rel, Preord and Simp, small enough for the brute-force oracle.

#include <memory>
#include <string>
#include <vector>

#include "enralg/signature.hpp"
#include "enralg/syntax.hpp"

namespace cases {

using namespace enralg;

struct Case {
  std::string name;
  std::shared_ptr<const Theory> theory;
  std::vector<VObject> generators;
};

/// Two points with one nontrivial piece of structure between them.
inline VObject two_points(InstanceKind kind, std::vector<std::string> names) {
  const auto n = names.size();
  switch (kind) {
    case InstanceKind::Rel: {
      Relation r(n);
      r.set(0, 1);
      return make_vobject(kind, Carrier(std::move(names)), r);
    }
    case InstanceKind::Preord: {
      Relation r = Relation::identity(n);
      r.set(0, 1);
      return make_vobject(kind, Carrier(std::move(names)), r);
    }
    case InstanceKind::Simp:
      return make_vobject(kind, Carrier(std::move(names)), Complex::generated(n, {{0, 1}}));
    default: return discrete_object(kind, Carrier(std::move(names)));
  }
}

/// One point; in Rel it carries a loop so that it is not the empty relation.
inline VObject one_point(InstanceKind kind, std::string name) {
  if (kind == InstanceKind::Rel) {
    Relation r(1);
    r.set(0, 0);
    return make_vobject(kind, Carrier({std::move(name)}), r);
  }
  return discrete_object(kind, Carrier({std::move(name)}));
}

inline SyntacticEquation equation(Context ctx, SortId sort, const std::string& lhs,
                                  const std::string& rhs) {
  return SyntacticEquation{std::move(ctx), sort, parse_term(lhs), parse_term(rhs)};
}

inline std::vector<Case> exact_cases() {
  std::vector<Case> out;
  for (auto kind : {InstanceKind::Set, InstanceKind::Rel, InstanceKind::Preord, InstanceKind::Simp}) {
    const std::string tag(to_string(kind));
    auto finish = [&](std::string name, Theory t, std::vector<VObject> gens) {
      out.push_back({tag + "/" + name, std::make_shared<const Theory>(std::move(t)), std::move(gens)});
    };
    auto empty = [&] { return discrete_object(kind, Carrier()); };
    {
      Theory t;
      t.signature.kind = kind;
      t.signature.add_sort("A");
      std::vector<VObject> gens{two_points(kind, {"a", "b", "c"})};
      finish("no-ops", std::move(t), std::move(gens));
    }
    {
      Theory t;
      t.signature.kind = kind;
      auto a = t.signature.add_sort("A");
      auto b = t.signature.add_sort("B");
      t.signature.add_op("f", {a}, b, two_points(kind, {"p", "q"}), "P");
      std::vector<VObject> gens{two_points(kind, {"a0", "a1"}), empty()};
      finish("unary-parameter", std::move(t), std::move(gens));
    }
    {
      Theory t;
      t.signature.kind = kind;
      auto a = t.signature.add_sort("A");
      auto b = t.signature.add_sort("B");
      t.signature.add_op("f", {a}, b);
      t.signature.add_op("g", {a}, b);
      t.equations.push_back(equation({{"x", a}}, b, "f(x)", "g(x)"));
      std::vector<VObject> gens{two_points(kind, {"a0", "a1"}), empty()};
      finish("parallel-equal", std::move(t), std::move(gens));
    }
    {
      Theory t;
      t.signature.kind = kind;
      auto a = t.signature.add_sort("A");
      auto b = t.signature.add_sort("B");
      t.signature.add_op("m", {a, a}, b);
      t.equations.push_back(equation({{"x", a}, {"y", a}}, b, "m(x, y)", "m(y, x)"));
      std::vector<VObject> gens{two_points(kind, {"a0", "a1"}), empty()};
      finish("binary-commutative", std::move(t), std::move(gens));
    }
    {
      Theory t;
      t.signature.kind = kind;
      auto a = t.signature.add_sort("A");
      auto b = t.signature.add_sort("B");
      auto c = t.signature.add_sort("C");
      t.signature.add_op("f", {a}, b);
      t.signature.add_op("g", {b}, c);
      t.signature.add_op("h", {a}, c);
      t.signature.add_op("k", {}, c);
      t.equations.push_back(equation({{"x", a}}, c, "g(f(x))", "k"));
      std::vector<VObject> gens{one_point(kind, "a"), empty(), empty()};
      finish("tower", std::move(t), std::move(gens));
    }
    {
      Theory t;
      t.signature.kind = kind;
      auto a = t.signature.add_sort("A");
      auto b = t.signature.add_sort("B");
      t.signature.add_op("c", {}, a);
      t.signature.add_op("d", {}, a);
      t.signature.add_op("f", {a}, b, two_points(kind, {"p", "q"}), "P");
      std::vector<VObject> gens{empty(), empty()};
      finish("constants", std::move(t), std::move(gens));
    }
  }
  return out;
}

}  // namespace cases
