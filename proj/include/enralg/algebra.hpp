#pragma once

// Sigma-algebras: a sorted carrier object plus one table per classical
// symbol sigma_p. Admissibility of the enriched operations is checked by
// validate_algebra, never assumed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "enralg/signature.hpp"

namespace enralg {

class Algebra {
 public:
  /// All cells start undefined. A partial algebra keeps its tables sparse and
  /// may leave cells undefined (free algebras over truncated term sets);
  /// otherwise every table is dense and must be filled completely.
  Algebra(std::shared_ptr<const EnrichedSignature> sig, std::vector<VObject> carriers,
          bool partial = false);

  const EnrichedSignature& signature() const { return *sig_; }
  const std::shared_ptr<const EnrichedSignature>& signature_ptr() const { return sig_; }
  InstanceKind kind() const { return sig_->kind; }
  bool partial() const { return partial_; }

  std::size_t sorts() const { return carriers_.size(); }
  const VObject& carrier(SortId s) const { return carriers_.at(s); }
  const std::vector<VObject>& carriers() const { return carriers_; }
  /// Replaces the structure of one sort; the carrier set stays.
  void set_structure(SortId s, StructureData structure);

  /// Value of sigma_p at args, or kUndefined.
  std::size_t apply(OpId op, std::size_t point, std::span<const std::size_t> args) const;
  void set(OpId op, std::size_t point, std::span<const std::size_t> args, std::size_t value);

  /// Visits defined cells in increasing argument order.
  void for_each_defined(
      OpId op, std::size_t point,
      const std::function<void(std::span<const std::size_t>, std::size_t)>& fn) const;

  /// Throws listing the first undefined cell per symbol.
  void check_total() const;

 private:
  std::uint64_t cell(OpId op, std::span<const std::size_t> args) const;

  struct Table {
    std::vector<std::size_t> dense;
    std::map<std::uint64_t, std::size_t> sparse;
  };

  std::shared_ptr<const EnrichedSignature> sig_;
  std::vector<VObject> carriers_;
  bool partial_;
  std::vector<std::vector<Table>> tables_;  // [op][point]
  std::vector<std::uint64_t> cells_;        // number of argument tuples per op
};

struct CheckResult {
  bool ok = true;
  std::string witness;

  explicit operator bool() const { return ok; }
  static CheckResult failure(std::string why) { return {false, std::move(why)}; }
};

struct AlgebraReport {
  struct Failure {
    OpId op;
    std::string witness;
  };
  std::vector<Failure> failures;

  bool valid() const { return failures.empty(); }
};

/// Checks carriers against the signature (throws on shape mismatch) and then
/// admissibility of every sigma-hat out of P x A_S1 x ... x A_Sn.
AlgebraReport validate_algebra(const Algebra& a);

struct Homomorphism {
  std::shared_ptr<const Algebra> dom;
  std::shared_ptr<const Algebra> cod;
  std::vector<std::vector<std::size_t>> tables;  // per sort
};

Homomorphism identity_homomorphism(std::shared_ptr<const Algebra> a);
/// g after f.
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

/// Commutation with every defined cell, and admissibility per sort.
CheckResult is_homomorphism(const Homomorphism& h);

/// Value of a resolved term; kUndefined if some cell on the way is undefined.
std::size_t interpret(const Algebra& a, const Term& t, std::span<const std::size_t> env);

/// Resolves `t` in `context`, checks `env` against the context sorts, evaluates.
std::size_t interpret(const Algebra& a, const Context& context, const TermInContext& t,
                      std::span<const std::size_t> env);

struct SatisfactionResult {
  bool holds = true;
  std::vector<std::size_t> env;  // falsifying environment when !holds
  std::string witness;

  explicit operator bool() const { return holds; }
};

/// Enumerates every environment. Cells left undefined by partial algebras
/// make that environment vacuous.
SatisfactionResult satisfies(const Algebra& a, const SyntacticEquation& eq);

/// Same tables, every carrier indiscrete.
Algebra indiscrete_algebra(const Algebra& a);

}  // namespace enralg
