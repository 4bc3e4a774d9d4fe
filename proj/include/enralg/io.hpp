#pragma once

// JSON files in and out. Schema errors name a JSON path ("$.ops[1].inputs[0]");
// syntax errors name a line and column.

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "enralg/algebra.hpp"
#include "enralg/congruence.hpp"
#include "enralg/free.hpp"
#include "enralg/oracle.hpp"

namespace enralg {

using Json = nlohmann::ordered_json;

/// Parses text as JSON; `source` names the input in error messages.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

/// VObject of the given kind from {"elements", "relation" | "simplices" | "distances"}.
/// Preord relations, Simp simplex lists and PMet distance lists are closed
/// (they act as generators; omitted distances come from shortest paths).
VObject parse_vobject(InstanceKind kind, const Json& j, const std::string& path);
Json to_json(const VObject& v);

struct ParsedTheory {
  Theory theory;
  /// Unknown names found while reading plus validate_theory's findings.
  ValidationReport report;
  /// Named objects in file order.
  std::vector<std::pair<std::string, VObject>> objects;
};

ParsedTheory parse_theory(const Json& j);
ParsedTheory read_theory_file(const std::string& path);
/// Throws unless the report is free of errors.
Theory load_theory(const std::string& path);

/// {"equations": [...]} checked against `sig`.
std::vector<SyntacticEquation> parse_equations(const EnrichedSignature& sig, const Json& j,
                                               const std::string& path);

/// {"generators": {sort: VObject | object name}}; absent sorts are empty.
std::vector<VObject> parse_generators(const ParsedTheory& t, const Json& j);

/// {"carriers": {sort: VObject | object name}, "ops": {name: [{"point", "args", "value"}]}}.
/// Tables must be total.
Algebra parse_algebra(const ParsedTheory& t, std::shared_ptr<const EnrichedSignature> sig,
                      const Json& j);
Json to_json(const Algebra& a);

/// {"tables": {sort: {element: element}}}.
Homomorphism parse_homomorphism(std::shared_ptr<const Algebra> dom,
                                std::shared_ptr<const Algebra> cod, const Json& j);

/// Per sort: classes as {"representative", "members"}, in representative order.
Json congruence_to_json(const Algebra& a, const SortedCongruence& c);

Json to_json(const FreeAlgebra& f);
std::string to_text(const FreeAlgebra& f);

Json to_json(const CompareReport& r, const EnrichedSignature& sig);

}  // namespace enralg
