#pragma once

// Name-level terms as written in files: `name`, `op(t1, ..., tn)` and
// `op[point](t1, ..., tn)`. Names are resolved against a signature and a
// context later (see signature.hpp).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enralg {

struct TermInContext {
  std::string head;                  // variable, constant or operation name
  std::optional<std::string> point;  // `[p]`, absent for one-point parameters
  std::vector<TermInContext> args;
  bool applied = false;              // written with parentheses

  friend bool operator==(const TermInContext&, const TermInContext&) = default;
};

/// Throws a parse error with the column (1-based) of the offending character.
TermInContext parse_term(std::string_view text);

std::string to_string(const TermInContext& t);

}  // namespace enralg
