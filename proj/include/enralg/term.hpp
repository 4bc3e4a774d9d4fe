#pragma once

// Ground terms over |Sigma| with constants from a sorted generator set,
// generated stage by stage (stage d holds the terms of depth d).

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "enralg/signature.hpp"

namespace enralg {

using TermId = std::size_t;

struct TermNode {
  bool is_const = false;
  SortId sort = 0;
  std::size_t element = 0;  // constants: index into the generator carrier
  OpId op = 0;              // applications
  std::size_t point = 0;
  std::vector<TermId> args;
  unsigned depth = 0;
  std::size_t local = 0;    // position within the term list of its sort
};

struct GenerationPolicy {
  unsigned max_depth = 4;
  std::size_t max_count = 20000;
  /// Safety valve for the structure iteration; the fixpoint normally comes first.
  std::size_t max_stages = 1000;

  /// ENRALG_MAX_TERMS overrides max_count when set.
  static GenerationPolicy from_environment();
};

class TermUniverse {
 public:
  /// Generates all terms up to policy.max_depth unless a stage would push
  /// the total past policy.max_count; that stage is dropped whole.
  TermUniverse(std::shared_ptr<const EnrichedSignature> sig, std::vector<Carrier> generators,
               const GenerationPolicy& policy = {});

  const EnrichedSignature& signature() const { return *sig_; }
  const std::shared_ptr<const EnrichedSignature>& signature_ptr() const { return sig_; }
  const std::vector<Carrier>& generators() const { return generators_; }

  std::size_t size() const { return nodes_.size(); }
  const TermNode& node(TermId t) const { return nodes_.at(t); }
  const std::vector<TermId>& terms_of(SortId s) const { return by_sort_.at(s); }

  std::optional<TermId> find_const(SortId s, std::size_t element) const;
  std::optional<TermId> find_app(OpId op, std::size_t point, std::span<const TermId> args) const;

  /// True when some stage added nothing: the universe is the whole term set.
  bool finite() const { return finite_; }
  unsigned depth_reached() const { return depth_reached_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string to_string(TermId t) const;
  /// Term names of one sort, in canonical order.
  Carrier carrier(SortId s) const;

 private:
  std::size_t stage_count(unsigned d) const;
  void materialize(unsigned d);
  TermId add(TermNode node);

  struct KeyHash {
    std::size_t operator()(const std::vector<std::size_t>& k) const noexcept;
  };

  std::shared_ptr<const EnrichedSignature> sig_;
  std::vector<Carrier> generators_;
  std::vector<TermNode> nodes_;
  std::vector<std::vector<TermId>> by_sort_;
  // upto_depth_[d][s]: number of terms of sort s with depth <= d.
  std::vector<std::vector<std::size_t>> upto_depth_;
  std::unordered_map<std::vector<std::size_t>, TermId, KeyHash> apps_;
  bool finite_ = false;
  unsigned depth_reached_ = 0;
  std::vector<std::string> warnings_;
};

/// Structural order: depth, then constants before applications, then
/// (sort, element) or (op, point, children lexicographically).
/// Agrees with generation order. Returns <0, 0 or >0.
int canonical_compare(const TermUniverse& u, TermId a, TermId b);

}  // namespace enralg
