#pragma once

// Finite models of topological categories over Set: carriers, fibre
// elements (structures) for the five supported instances, admissibility,
// initial and final lifts, fibre lattice operations and finite products.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace enralg {

enum class InstanceKind { Set, Rel, Preord, Simp, PMet };

std::string_view to_string(InstanceKind kind);
/// Throws a parse error naming the tag when it is not one of the five kinds.
InstanceKind parse_instance_kind(std::string_view tag);

constexpr bool is_cartesian_closed(InstanceKind kind) {
  return kind != InstanceKind::PMet;
}

/// Marks a point where a partial table has no value.
inline constexpr std::size_t kUndefined = std::numeric_limits<std::size_t>::max();

/// Finite ordered set of element names. The list order is the canonical
/// total order used everywhere for deterministic output.
class Carrier {
 public:
  Carrier() = default;
  explicit Carrier(std::vector<std::string> names);

  /// Carrier {prefix0, prefix1, ...}.
  static Carrier numbered(std::size_t n, std::string_view prefix = "");

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const Carrier& a, const Carrier& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::shared_ptr<const std::unordered_map<std::string, std::size_t>> index_;
};

/// Binary relation on {0, ..., n-1}, one bit row per element.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n);

  static Relation identity(std::size_t n);
  static Relation full(std::size_t n);

  std::size_t size() const { return n_; }
  bool test(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j) {
    bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }
  void reset(std::size_t i, std::size_t j) {
    bits_[i * words_ + j / 64] &= ~(std::uint64_t{1} << (j % 64));
  }

  bool subset_of(const Relation& other) const;
  void unite(const Relation& other);
  void intersect(const Relation& other);
  /// Reflexive-transitive closure (Warshall over bit rows).
  void close_preorder();
  bool is_reflexive() const;
  bool is_transitive() const;

  std::size_t count() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Sorted, duplicate-free, nonempty set of points.
using Simplex = std::vector<std::size_t>;

/// Admissible set of simplices on {0, ..., n-1}: downward closed and
/// containing every singleton. Held canonically by its maximal simplices.
class Complex {
 public:
  Complex() = default;

  /// Smallest admissible family containing the given simplices.
  static Complex generated(std::size_t n, std::vector<Simplex> simplices);
  static Complex discrete(std::size_t n);
  static Complex full(std::size_t n);

  std::size_t size() const { return n_; }
  const std::vector<Simplex>& facets() const { return facets_; }
  bool contains(const Simplex& s) const;
  bool subset_of(const Complex& other) const;
  /// Every simplex, facets expanded. Exponential in facet size.
  std::vector<Simplex> simplices() const;

  friend bool operator==(const Complex&, const Complex&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Simplex> facets_;
};

using Rational = boost::multiprecision::cpp_rational;

/// Nonnegative exact rational extended with an absorbing infinity.
class Distance {
 public:
  Distance() = default;
  Distance(Rational value);  // NOLINT(google-explicit-constructor)
  Distance(long value) : Distance(Rational(value)) {}  // NOLINT

  static Distance infinity();

  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }

  friend Distance operator+(const Distance& a, const Distance& b);
  friend bool operator==(const Distance& a, const Distance& b);
  friend bool operator<(const Distance& a, const Distance& b);
  friend bool operator<=(const Distance& a, const Distance& b) { return !(b < a); }

 private:
  bool infinite_ = false;
  Rational value_ = 0;
};

/// "inf", an integer, a decimal ("0.25") or a fraction ("3/4").
Distance parse_distance(std::string_view text);
std::string to_string(const Distance& d);

/// Symmetric extended pseudo-metric on {0, ..., n-1}.
class Metric {
 public:
  Metric() = default;
  /// All off-diagonal entries infinite.
  explicit Metric(std::size_t n);

  static Metric zero(std::size_t n);

  std::size_t size() const { return n_; }
  const Distance& at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, const Distance& value);

  /// Shortest-path closure (Floyd-Warshall); restores the triangle inequality.
  void close();
  bool is_valid() const;

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Distance> d_;
};

/// One fibre element. The variant in use is fixed by the instance kind:
/// Set -> monostate, Rel/Preord -> Relation, Simp -> Complex, PMet -> Metric.
using StructureData = std::variant<std::monostate, Relation, Complex, Metric>;

std::size_t structure_size(const StructureData& s);

/// Throws when `s` is not a valid fibre element of `kind` over n points.
void check_structure(InstanceKind kind, std::size_t n, const StructureData& s);

StructureData discrete_structure(InstanceKind kind, std::size_t n);
StructureData indiscrete_structure(InstanceKind kind, std::size_t n);

struct VObject {
  InstanceKind kind = InstanceKind::Set;
  Carrier carrier;
  StructureData structure;

  std::size_t size() const { return carrier.size(); }

  friend bool operator==(const VObject&, const VObject&) = default;
};

/// Validating constructor.
VObject make_vobject(InstanceKind kind, Carrier carrier, StructureData structure);
VObject discrete_object(InstanceKind kind, Carrier carrier);
VObject indiscrete_object(InstanceKind kind, Carrier carrier);
/// One-point object; the monoidal unit of the cartesian structure.
VObject terminal_object(InstanceKind kind);

/// A total function between carriers. Admissibility is a property checked
/// by is_admissible, not an invariant.
struct StructuredMap {
  VObject dom;
  VObject cod;
  std::vector<std::size_t> table;
};

bool is_admissible(const StructuredMap& f);

/// Admissibility of `table` (partial entries allowed) from structure `dom`
/// to structure `cod`. On failure a description goes to `witness`.
bool is_admissible(InstanceKind kind, const StructureData& dom,
                   std::span<const std::size_t> table, const StructureData& cod,
                   std::string* witness = nullptr);

bool fib_leq(InstanceKind kind, const StructureData& a, const StructureData& b);
StructureData fib_sup(InstanceKind kind, std::size_t n,
                      std::span<const StructureData> structures);
StructureData fib_inf(InstanceKind kind, std::size_t n,
                      std::span<const StructureData> structures);

/// g_i : |source_i| -> target. Tables may be partial when built internally;
/// undefined points drop out of the sink (restriction to the defined part).
struct SinkMap {
  const VObject* source;
  std::span<const std::size_t> table;
};

/// Least structure on `target` making every sink map admissible.
StructureData final_lift(InstanceKind kind, const Carrier& target,
                         std::span<const SinkMap> sink);

/// f_i : source -> |target_i|.
struct SourceMap {
  std::span<const std::size_t> table;
  const VObject* target;
};

/// Greatest structure on `source` making every source map admissible.
StructureData initial_lift(InstanceKind kind, const Carrier& source,
                           std::span<const SourceMap> maps);

/// Cartesian product with the initial structure along the projections.
/// Tuples are encoded in mixed radix, last factor fastest.
VObject product(InstanceKind kind, std::span<const VObject> factors);

/// Product P x A_1 x ... x A_n viewed through its factors, without
/// materializing the product structure. Enumerates exactly the data that
/// determines admissibility out of the product.
class ProductDomain {
 public:
  ProductDomain(InstanceKind kind, std::vector<const VObject*> factors);

  InstanceKind kind() const { return kind_; }
  std::size_t arity() const { return factors_.size(); }
  const VObject& factor(std::size_t i) const { return *factors_[i]; }
  /// Number of tuples (saturates at SIZE_MAX).
  std::size_t size() const;
  std::string tuple_name(std::span<const std::size_t> coords) const;

  using Coords = std::span<const std::size_t>;

  /// Rel/Preord: every pair of tuples related in the product, i.e. related
  /// in every coordinate. Stops early when `fn` returns false.
  bool for_each_edge(const std::function<bool(Coords, Coords)>& fn) const;
  /// Simp: every maximal simplex of the product, given as one facet per factor.
  bool for_each_facet(
      const std::function<bool(const std::vector<const Simplex*>&)>& fn) const;
  /// PMet: every ordered pair of tuples with its product (max) distance.
  bool for_each_pair(
      const std::function<bool(Coords, Coords, const Distance&)>& fn) const;

 private:
  InstanceKind kind_;
  std::vector<const VObject*> factors_;
};

/// A possibly partial function on tuples; returns kUndefined off its domain.
using TupleMap = std::function<std::size_t(ProductDomain::Coords)>;

/// Admissibility of `f` from the product structure into `cod`.
bool is_admissible_from_product(const ProductDomain& domain, const TupleMap& f,
                                const StructureData& cod,
                                std::string* witness = nullptr);

/// Accumulates images of structured sinks and closes them into the final
/// structure. Undefined images are skipped.
class FinalLiftBuilder {
 public:
  FinalLiftBuilder(InstanceKind kind, std::size_t target_size);

  void add_image(const VObject& source, std::span<const std::size_t> table);
  void add_product_image(const ProductDomain& domain, const TupleMap& f);
  /// Adds the structure `s` (on the target itself) to the accumulated join.
  void add_structure(const StructureData& s);

  StructureData finish() &&;

 private:
  void add_simplex_image(std::vector<std::size_t> points);

  InstanceKind kind_;
  std::size_t n_;
  Relation relation_;
  std::vector<Simplex> simplices_;
  Metric metric_;
};

/// Caps on carrier size for fibre enumeration. ENRALG_MAX_FIBRE overrides
/// all three when set.
struct FibreCaps {
  std::size_t rel = 5;
  std::size_t preord = 5;
  std::size_t simp = 5;

  static FibreCaps from_environment();
  std::size_t cap(InstanceKind kind) const;
};

/// Visits every fibre element over n points exactly once, in a fixed order.
/// Stops early when `fn` returns false. PMet and oversize carriers are refused.
void for_each_fibre_element(InstanceKind kind, std::size_t n, const FibreCaps& caps,
                            const std::function<bool(const StructureData&)>& fn);

std::vector<StructureData> enumerate_fibre(InstanceKind kind, const Carrier& carrier,
                                           const FibreCaps& caps = {});

/// Number of fibre elements over n points without materializing them
/// (saturating). Throws as for_each_fibre_element.
std::size_t fibre_size(InstanceKind kind, std::size_t n, const FibreCaps& caps = {});

}  // namespace enralg
