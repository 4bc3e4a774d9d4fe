#pragma once

// Enriched signatures, their underlying classical signatures, resolved
// terms in context and theories (signature plus syntactic equations).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enralg/structure.hpp"
#include "enralg/syntax.hpp"

namespace enralg {

using SortId = std::size_t;
using OpId = std::size_t;

struct OperationSymbol {
  std::string name;
  std::vector<SortId> inputs;
  SortId output = 0;
  /// Finite parameter object; the one-point object for ordinary symbols.
  VObject parameter;
  /// Name of the parameter object in theory files; empty when anonymous.
  std::string parameter_name;

  std::size_t arity() const { return inputs.size(); }
  std::size_t points() const { return parameter.size(); }
};

struct EnrichedSignature {
  InstanceKind kind = InstanceKind::Set;
  std::vector<std::string> sorts;
  std::vector<OperationSymbol> ops;

  std::optional<SortId> find_sort(std::string_view name) const;
  std::optional<OpId> find_op(std::string_view name) const;

  SortId add_sort(std::string name);
  /// Without a parameter the symbol is ordinary (one-point parameter).
  OpId add_op(std::string name, std::vector<SortId> inputs, SortId output,
              std::optional<VObject> parameter = std::nullopt,
              std::string parameter_name = {});
};

/// sigma_p: one ordinary symbol per operation and parameter point.
struct ClassicalOpSymbol {
  OpId op = 0;
  std::size_t point = 0;
  std::string name;  // "sigma" for one-point parameters, otherwise "sigma[p]"
  std::vector<SortId> inputs;
  SortId output = 0;
};

/// In operation order, then parameter carrier order.
std::vector<ClassicalOpSymbol> underlying_classical(const EnrichedSignature& sig);

/// Name of op applied at a point as written in terms.
std::string symbol_name(const EnrichedSignature& sig, OpId op, std::size_t point);

using Context = std::vector<std::pair<std::string, SortId>>;

/// Term whose names have been resolved against a signature and a context.
struct Term {
  bool is_var = false;
  std::size_t var = 0;  // index into the context
  OpId op = 0;
  std::size_t point = 0;
  SortId sort = 0;
  std::vector<Term> args;

  friend bool operator==(const Term&, const Term&) = default;
};

struct SyntacticEquation {
  Context context;
  SortId sort = 0;
  TermInContext lhs;
  TermInContext rhs;
};

struct Theory {
  EnrichedSignature signature;
  std::vector<SyntacticEquation> equations;

  InstanceKind kind() const { return signature.kind; }
};

struct Issue {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool valid() const { return errors() == 0; }
  std::size_t errors() const;
  std::size_t warnings() const;
  /// One line per issue: "error: path: message".
  std::string to_string() const;
};

ValidationReport validate_signature(const EnrichedSignature& sig);
ValidationReport validate_theory(const Theory& theory);

/// Resolves `t` in `context`. A bare name is a context variable if one has
/// that name, otherwise a nullary operation. Throws on the first problem.
Term resolve_term(const EnrichedSignature& sig, const Context& context,
                  const TermInContext& t, std::optional<SortId> expected = std::nullopt);

struct ResolvedEquation {
  Context context;
  SortId sort = 0;
  Term lhs;
  Term rhs;
};

ResolvedEquation resolve_equation(const EnrichedSignature& sig, const SyntacticEquation& eq);

std::string to_string(const EnrichedSignature& sig, const Context& context, const Term& t);
std::string to_string(const EnrichedSignature& sig, const SyntacticEquation& eq);

}  // namespace enralg
