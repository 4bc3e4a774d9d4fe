#pragma once

// Sorted congruences: equation-generated (ground congruence closure),
// kernels of homomorphisms, compatibility checks and quotient algebras.

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "enralg/algebra.hpp"
#include "enralg/term.hpp"

namespace enralg {

/// Per-sort partition. Classes are numbered in order of their least
/// element, and that element is the class representative.
class SortedCongruence {
 public:
  SortedCongruence() = default;

  /// labels[s][x] is any class label for x; equal labels, same class.
  static SortedCongruence from_labels(const std::vector<std::vector<std::size_t>>& labels);
  static SortedCongruence identity(const std::vector<std::size_t>& sizes);

  std::size_t sorts() const { return class_of_.size(); }
  std::size_t size(std::size_t s) const { return class_of_.at(s).size(); }
  std::size_t class_count(std::size_t s) const { return classes_.at(s).size(); }
  std::size_t class_of(std::size_t s, std::size_t x) const { return class_of_.at(s).at(x); }
  const std::vector<std::size_t>& members(std::size_t s, std::size_t c) const {
    return classes_.at(s).at(c);
  }
  std::size_t representative(std::size_t s, std::size_t c) const { return members(s, c).front(); }
  bool related(std::size_t s, std::size_t x, std::size_t y) const {
    return class_of(s, x) == class_of(s, y);
  }
  /// Every class of this lies inside a class of `other`.
  bool refines(const SortedCongruence& other) const;
  const std::vector<std::vector<std::size_t>>& labels() const { return class_of_; }

  friend bool operator==(const SortedCongruence& a, const SortedCongruence& b) {
    return a.class_of_ == b.class_of_;
  }

 private:
  std::vector<std::vector<std::size_t>> class_of_;
  std::vector<std::vector<std::vector<std::size_t>>> classes_;
};

/// Least congruence containing every instance of the equations, over all
/// environments in the (finite) carriers.
SortedCongruence generated_congruence(const Algebra& a,
                                      const std::vector<SyntacticEquation>& equations);

/// Same over a term universe: x ~ y for universe terms. Instances are taken
/// over environments of universe terms whose two sides both lie in the
/// universe, so a truncated universe gives an under-approximation.
SortedCongruence generated_congruence(const TermUniverse& u,
                                      const std::vector<SyntacticEquation>& equations);

/// Equation instances (lhs, rhs) used as seeds, as term ids.
std::vector<std::pair<TermId, TermId>> equation_instances(
    const TermUniverse& u, const std::vector<SyntacticEquation>& equations);

/// Throws when h is not a homomorphism.
SortedCongruence kernel_congruence(const Homomorphism& h);

/// Compatibility with every sigma_p over the defined cells.
CheckResult is_congruence(const Algebra& a, const SortedCongruence& c);

struct Quotient {
  std::shared_ptr<const Algebra> algebra;
  Homomorphism q;
};

/// Carrier elements are the class representatives; each carrier gets the
/// final structure along the class map. Refuses non-congruences.
Quotient quotient(std::shared_ptr<const Algebra> a, const SortedCongruence& c);

}  // namespace enralg
