#pragma once

// Free algebras over a sorted generator object for cartesian closed
// instances: the structure on terms is the supremum of the Omega chain, and
// the free algebra of a theory is its quotient by the equation congruence
// with the final structure along the class map.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "enralg/algebra.hpp"
#include "enralg/congruence.hpp"
#include "enralg/term.hpp"

namespace enralg {

using SortedStructure = std::vector<StructureData>;

/// Stages 0..n of the Omega chain on the universe, stopping at the first n
/// with stage n+1 equal to stage n (or after max_stages steps). Refuses
/// instances that are not cartesian closed.
std::vector<SortedStructure> omega_chain(const EnrichedSignature& sig,
                                         const std::vector<VObject>& generators,
                                         const TermUniverse& universe, std::size_t max_stages);

struct FreeAlgebra {
  std::shared_ptr<const Theory> theory;
  std::shared_ptr<const TermUniverse> universe;
  std::vector<VObject> generators;
  /// Terms with term formation as operations and the Omega supremum as structure.
  std::shared_ptr<const Algebra> term_algebra;
  SortedCongruence congruence;
  /// term_algebra quotiented by the congruence; equal in shape to term_algebra
  /// when there are no equations.
  std::shared_ptr<const Algebra> algebra;
  /// Class map from term_algebra onto algebra.
  Homomorphism quotient_map;
  /// unit[s][x]: carrier element of generator x of sort s.
  std::vector<std::vector<std::size_t>> unit;
  /// Universe complete and Omega fixpoint reached.
  bool exact = false;
  std::size_t omega_stages = 0;
  std::vector<std::string> warnings;
};

FreeAlgebra free_sigma(std::shared_ptr<const EnrichedSignature> sig,
                       std::vector<VObject> generators, const GenerationPolicy& policy = {});

FreeAlgebra free_theory(std::shared_ptr<const Theory> theory, std::vector<VObject> generators,
                        const GenerationPolicy& policy = {});

/// The unit at one sort, as a map from the generator object.
StructuredMap unit(const FreeAlgebra& f, SortId s);

/// The homomorphism out of the free algebra extending `assignment`
/// (assignment[s][x] = target element for generator x of sort s). Checks the
/// target, the assignment, well-definedness on classes and the result.
Homomorphism extend(const FreeAlgebra& f, std::shared_ptr<const Algebra> target,
                    const std::vector<std::vector<std::size_t>>& assignment);

}  // namespace enralg
