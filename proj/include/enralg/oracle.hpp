#pragma once

// Brute-force free structures: the meet of every compatible structure on
// the term set (or on its quotient by the equations), found by enumerating
// fibres. Only for complete term sets and small carriers.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "enralg/free.hpp"

namespace enralg {

struct CompatReport {
  bool compatible = true;
  /// "unit" or "operation <name>" when not compatible.
  std::string condition;
  std::string witness;

  explicit operator bool() const { return compatible; }
};

/// Unit admissible into `b`, and every sigma-hat admissible from
/// P x b_S1 x ... x b_Sn into b_S. Refuses truncated universes.
CompatReport is_sigma_compatible(const SortedStructure& b, const EnrichedSignature& sig,
                                 const std::vector<VObject>& generators,
                                 const TermUniverse& universe);

/// The same conditions on the classes of `congruence`: q after eta, and the
/// induced operations on classes.
CompatReport is_theory_compatible(const SortedStructure& b, const Theory& theory,
                                  const std::vector<VObject>& generators,
                                  const TermUniverse& universe,
                                  const SortedCongruence& congruence);

struct BruteForceResult {
  /// Carrier names per sort (class representatives).
  std::vector<Carrier> carriers;
  SortedStructure structure;
  std::size_t candidates = 0;  // joint fibre elements visited
  std::size_t compatible = 0;
};

/// Meet over all theory-compatible structures on Term/~E. With no
/// equations this is the free Sigma-structure on terms.
BruteForceResult brute_force_free(const Theory& theory, const std::vector<VObject>& generators,
                                  const GenerationPolicy& policy = {},
                                  const FibreCaps& caps = {});

enum class Verdict { Equal, Differ, Unsupported };

std::string_view to_string(Verdict v);

struct CompareReport {
  Verdict verdict = Verdict::Equal;
  std::vector<bool> sort_equal;
  /// First difference, or the reason for Unsupported.
  std::string detail;
};

/// First difference between `fast` and `oracle` on the same carrier, naming
/// which side has the extra pair, simplex or smaller distance.
std::optional<std::string> compare_structures(InstanceKind kind, const Carrier& carrier,
                                              const StructureData& fast,
                                              const StructureData& oracle);

CompareReport compare_free(const Theory& theory, const std::vector<VObject>& generators,
                           const GenerationPolicy& policy = {}, const FibreCaps& caps = {});

/// Compares already computed structures (used to inject faults in tests).
CompareReport compare_sorted(const EnrichedSignature& sig, const std::vector<Carrier>& carriers,
                             const SortedStructure& fast, const SortedStructure& oracle);

}  // namespace enralg
