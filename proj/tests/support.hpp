#pragma once

#include <memory>
#include <string>

#include "enralg/io.hpp"

namespace support {

inline std::string fixture(const std::string& name) { return std::string(ENRALG_FIXTURES) + "/" + name; }

struct Loaded {
  enralg::ParsedTheory parsed;
  std::shared_ptr<const enralg::Theory> theory;
  std::shared_ptr<const enralg::EnrichedSignature> sig;
};

inline Loaded load(const std::string& theory_file) {
  Loaded l;
  l.parsed = enralg::read_theory_file(fixture(theory_file));
  l.theory = std::make_shared<const enralg::Theory>(l.parsed.theory);
  l.sig = std::make_shared<const enralg::EnrichedSignature>(l.parsed.theory.signature);
  return l;
}

inline std::shared_ptr<const enralg::Algebra> algebra(const Loaded& l, const std::string& file) {
  return std::make_shared<const enralg::Algebra>(
      enralg::parse_algebra(l.parsed, l.sig, enralg::read_json_file(fixture(file))));
}

inline std::vector<enralg::VObject> generators(const Loaded& l, const std::string& file) {
  return enralg::parse_generators(l.parsed, enralg::read_json_file(fixture(file)));
}

}  // namespace support
