#include "enralg/structure.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

#include "enralg/error.hpp"

namespace enralg {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

// Advances a mixed-radix odometer; returns false once it wraps around.
bool next_digits(std::vector<std::size_t>& digits, std::span<const std::size_t> radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

const Relation& as_relation(const StructureData& s) {
  const auto* r = std::get_if<Relation>(&s);
  if (r == nullptr) fail("structure is not a relation");
  return *r;
}

const Complex& as_complex(const StructureData& s) {
  const auto* c = std::get_if<Complex>(&s);
  if (c == nullptr) fail("structure is not a simplicial complex");
  return *c;
}

const Metric& as_metric(const StructureData& s) {
  const auto* m = std::get_if<Metric>(&s);
  if (m == nullptr) fail("structure is not a metric");
  return *m;
}

bool is_relational(InstanceKind kind) {
  return kind == InstanceKind::Rel || kind == InstanceKind::Preord;
}

void check_kind_matches(InstanceKind kind, const StructureData& s) {
  bool ok = false;
  switch (kind) {
    case InstanceKind::Set: ok = std::holds_alternative<std::monostate>(s); break;
    case InstanceKind::Rel:
    case InstanceKind::Preord: ok = std::holds_alternative<Relation>(s); break;
    case InstanceKind::Simp: ok = std::holds_alternative<Complex>(s); break;
    case InstanceKind::PMet: ok = std::holds_alternative<Metric>(s); break;
  }
  if (!ok) {
    fail("structure variant does not match instance kind " +
         std::string(to_string(kind)));
  }
}

bool is_subset(const Simplex& small, const Simplex& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::string simplex_text(const Simplex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

}  // namespace

// ---------------------------------------------------------------- kinds

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Set: return "Set";
    case InstanceKind::Rel: return "Rel";
    case InstanceKind::Preord: return "Preord";
    case InstanceKind::Simp: return "Simp";
    case InstanceKind::PMet: return "PMet";
  }
  return "?";
}

InstanceKind parse_instance_kind(std::string_view tag) {
  for (auto kind : {InstanceKind::Set, InstanceKind::Rel, InstanceKind::Preord,
                    InstanceKind::Simp, InstanceKind::PMet}) {
    if (to_string(kind) == tag) return kind;
  }
  parse_failure("unknown instance tag '" + std::string(tag) +
                "' (expected Set, Rel, Preord, Simp or PMet)");
}

// -------------------------------------------------------------- Carrier

Carrier::Carrier(std::vector<std::string> names) : names_(std::move(names)) {
  auto index = std::make_shared<std::unordered_map<std::string, std::size_t>>();
  index->reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index->emplace(names_[i], i).second) {
      fail("duplicate element name '" + names_[i] + "'");
    }
  }
  index_ = std::move(index);
}

Carrier Carrier::numbered(std::size_t n, std::string_view prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return Carrier(std::move(names));
}

std::optional<std::size_t> Carrier::find(std::string_view name) const {
  if (!index_) return std::nullopt;
  auto it = index_->find(std::string(name));
  if (it == index_->end()) return std::nullopt;
  return it->second;
}

// ------------------------------------------------------------- Relation

Relation::Relation(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

Relation Relation::identity(std::size_t n) {
  Relation r(n);
  for (std::size_t i = 0; i < n; ++i) r.set(i, i);
  return r;
}

Relation Relation::full(std::size_t n) {
  Relation r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.set(i, j);
  return r;
}

bool Relation::subset_of(const Relation& other) const {
  if (n_ != other.n_) fail("relation size mismatch");
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] & ~other.bits_[k]) return false;
  }
  return true;
}

void Relation::unite(const Relation& other) {
  if (n_ != other.n_) fail("relation size mismatch");
  for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= other.bits_[k];
}

void Relation::intersect(const Relation& other) {
  if (n_ != other.n_) fail("relation size mismatch");
  for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= other.bits_[k];
}

void Relation::close_preorder() {
  for (std::size_t i = 0; i < n_; ++i) set(i, i);
  for (std::size_t k = 0; k < n_; ++k) {
    const std::uint64_t* row_k = &bits_[k * words_];
    for (std::size_t i = 0; i < n_; ++i) {
      if (!test(i, k)) continue;
      std::uint64_t* row_i = &bits_[i * words_];
      for (std::size_t w = 0; w < words_; ++w) row_i[w] |= row_k[w];
    }
  }
}

bool Relation::is_reflexive() const {
  for (std::size_t i = 0; i < n_; ++i)
    if (!test(i, i)) return false;
  return true;
}

bool Relation::is_transitive() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (!test(i, k)) continue;
      for (std::size_t w = 0; w < words_; ++w) {
        if (bits_[k * words_ + w] & ~bits_[i * words_ + w]) return false;
      }
    }
  }
  return true;
}

std::size_t Relation::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (test(i, j)) out.emplace_back(i, j);
  return out;
}

// -------------------------------------------------------------- Complex

Complex Complex::generated(std::size_t n, std::vector<Simplex> simplices) {
  std::vector<bool> covered(n, false);
  std::vector<Simplex> candidates;
  candidates.reserve(simplices.size() + n);
  for (auto& s : simplices) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) continue;
    if (s.back() >= n) fail("simplex point out of range");
    for (auto p : s) covered[p] = true;
    candidates.push_back(std::move(s));
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!covered[p]) candidates.push_back({p});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Simplex& a, const Simplex& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  Complex c;
  c.n_ = n;
  for (auto& s : candidates) {
    bool subsumed = std::any_of(c.facets_.begin(), c.facets_.end(),
                                [&](const Simplex& f) { return is_subset(s, f); });
    if (!subsumed) c.facets_.push_back(std::move(s));
  }
  std::sort(c.facets_.begin(), c.facets_.end());
  return c;
}

Complex Complex::discrete(std::size_t n) { return generated(n, {}); }

Complex Complex::full(std::size_t n) {
  if (n == 0) return generated(0, {});
  Simplex all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return generated(n, {all});
}

bool Complex::contains(const Simplex& s) const {
  if (s.empty()) return true;
  return std::any_of(facets_.begin(), facets_.end(),
                     [&](const Simplex& f) { return is_subset(s, f); });
}

bool Complex::subset_of(const Complex& other) const {
  if (n_ != other.n_) fail("complex size mismatch");
  return std::all_of(facets_.begin(), facets_.end(),
                     [&](const Simplex& f) { return other.contains(f); });
}

std::vector<Simplex> Complex::simplices() const {
  std::set<Simplex> all;
  for (const auto& f : facets_) {
    if (f.size() >= 63) fail("facet too large to expand");
    const std::uint64_t limit = std::uint64_t{1} << f.size();
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      Simplex s;
      for (std::size_t i = 0; i < f.size(); ++i)
        if ((mask >> i) & 1u) s.push_back(f[i]);
      all.insert(std::move(s));
    }
  }
  return {all.begin(), all.end()};
}

// ------------------------------------------------------------- Distance

Distance::Distance(Rational value) : value_(std::move(value)) {
  if (value_ < 0) fail("negative distance");
}

Distance Distance::infinity() {
  Distance d;
  d.infinite_ = true;
  return d;
}

Distance operator+(const Distance& a, const Distance& b) {
  if (a.infinite_ || b.infinite_) return Distance::infinity();
  return Distance(a.value_ + b.value_);
}

bool operator==(const Distance& a, const Distance& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

bool operator<(const Distance& a, const Distance& b) {
  if (a.infinite_) return false;
  if (b.infinite_) return true;
  return a.value_ < b.value_;
}

Distance parse_distance(std::string_view text) {
  using boost::multiprecision::cpp_int;
  if (text == "inf" || text == "infinity") return Distance::infinity();
  auto digits_only = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
      return std::isdigit(c) != 0;
    });
  };
  auto bad = [&]() -> Distance {
    parse_failure("invalid distance '" + std::string(text) +
                  "' (expected a nonnegative integer, decimal, fraction or \"inf\")");
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) return bad();
    cpp_int d(std::string{den});
    if (d == 0) return bad();
    return Distance(Rational(cpp_int(std::string{num}), d));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits_only(whole) || !digits_only(frac)) return bad();
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    cpp_int num = cpp_int(std::string{whole}) * scale + cpp_int(std::string{frac});
    return Distance(Rational(num, scale));
  }
  if (!digits_only(text)) return bad();
  return Distance(Rational(cpp_int(std::string{text})));
}

std::string to_string(const Distance& d) {
  if (d.is_infinite()) return "inf";
  const auto num = boost::multiprecision::numerator(d.value());
  const auto den = boost::multiprecision::denominator(d.value());
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// --------------------------------------------------------------- Metric

Metric::Metric(std::size_t n) : n_(n), d_(n * n, Distance::infinity()) {
  for (std::size_t i = 0; i < n; ++i) d_[i * n + i] = Distance(0L);
}

Metric Metric::zero(std::size_t n) {
  Metric m;
  m.n_ = n;
  m.d_.assign(n * n, Distance(0L));
  return m;
}

void Metric::set(std::size_t i, std::size_t j, const Distance& value) {
  d_[i * n_ + j] = value;
  d_[j * n_ + i] = value;
}

void Metric::close() {
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (at(i, k).is_infinite()) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        Distance via = at(i, k) + at(k, j);
        if (via < at(i, j)) d_[i * n_ + j] = via;
      }
    }
  }
}

bool Metric::is_valid() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(at(i, i) == Distance(0L))) return false;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(at(i, j) == at(j, i))) return false;
      for (std::size_t k = 0; k < n_; ++k) {
        if (!(at(i, k) <= at(i, j) + at(j, k))) return false;
      }
    }
  }
  return true;
}

// ------------------------------------------------------------ structures

std::size_t structure_size(const StructureData& s) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::monostate>) {
          return 0;
        } else {
          return v.size();
        }
      },
      s);
}

void check_structure(InstanceKind kind, std::size_t n, const StructureData& s) {
  check_kind_matches(kind, s);
  if (kind != InstanceKind::Set && structure_size(s) != n) {
    fail("structure size " + std::to_string(structure_size(s)) +
         " does not match carrier size " + std::to_string(n));
  }
  if (kind == InstanceKind::Preord) {
    const auto& r = std::get<Relation>(s);
    if (!r.is_reflexive()) fail("Preord structure is not reflexive");
    if (!r.is_transitive()) fail("Preord structure is not transitive");
  }
  if (kind == InstanceKind::PMet && !std::get<Metric>(s).is_valid()) {
    fail("PMet structure violates zero diagonal, symmetry or the triangle inequality");
  }
}

StructureData discrete_structure(InstanceKind kind, std::size_t n) {
  switch (kind) {
    case InstanceKind::Set: return std::monostate{};
    case InstanceKind::Rel: return Relation(n);
    case InstanceKind::Preord: return Relation::identity(n);
    case InstanceKind::Simp: return Complex::discrete(n);
    case InstanceKind::PMet: return Metric(n);
  }
  return std::monostate{};
}

StructureData indiscrete_structure(InstanceKind kind, std::size_t n) {
  switch (kind) {
    case InstanceKind::Set: return std::monostate{};
    case InstanceKind::Rel:
    case InstanceKind::Preord: return Relation::full(n);
    case InstanceKind::Simp: return Complex::full(n);
    case InstanceKind::PMet: return Metric::zero(n);
  }
  return std::monostate{};
}

VObject make_vobject(InstanceKind kind, Carrier carrier, StructureData structure) {
  check_structure(kind, carrier.size(), structure);
  return VObject{kind, std::move(carrier), std::move(structure)};
}

VObject discrete_object(InstanceKind kind, Carrier carrier) {
  auto n = carrier.size();
  return VObject{kind, std::move(carrier), discrete_structure(kind, n)};
}

VObject indiscrete_object(InstanceKind kind, Carrier carrier) {
  auto n = carrier.size();
  return VObject{kind, std::move(carrier), indiscrete_structure(kind, n)};
}

VObject terminal_object(InstanceKind kind) {
  return indiscrete_object(kind, Carrier({"*"}));
}

// -------------------------------------------------------- admissibility

bool is_admissible(InstanceKind kind, const StructureData& dom,
                   std::span<const std::size_t> table, const StructureData& cod,
                   std::string* witness) {
  check_kind_matches(kind, dom);
  check_kind_matches(kind, cod);
  const std::size_t n = table.size();
  if (kind != InstanceKind::Set && structure_size(dom) != n) {
    fail("table size does not match domain structure");
  }
  const std::size_t m = structure_size(cod);
  for (auto v : table) {
    if (v != kUndefined && kind != InstanceKind::Set && v >= m) {
      fail("table value outside codomain");
    }
  }
  switch (kind) {
    case InstanceKind::Set: return true;
    case InstanceKind::Rel:
    case InstanceKind::Preord: {
      const auto& a = std::get<Relation>(dom);
      const auto& b = std::get<Relation>(cod);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!a.test(i, j) || table[i] == kUndefined || table[j] == kUndefined) continue;
          if (!b.test(table[i], table[j])) {
            if (witness) {
              *witness = "pair (" + std::to_string(i) + "," + std::to_string(j) +
                         ") maps to unrelated (" + std::to_string(table[i]) + "," +
                         std::to_string(table[j]) + ")";
            }
            return false;
          }
        }
      }
      return true;
    }
    case InstanceKind::Simp: {
      const auto& a = std::get<Complex>(dom);
      const auto& b = std::get<Complex>(cod);
      for (const auto& f : a.facets()) {
        Simplex image;
        for (auto p : f)
          if (table[p] != kUndefined) image.push_back(table[p]);
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        if (!b.contains(image)) {
          if (witness) {
            *witness = "simplex " + simplex_text(f) + " maps to non-simplex " +
                       simplex_text(image);
          }
          return false;
        }
      }
      return true;
    }
    case InstanceKind::PMet: {
      const auto& a = std::get<Metric>(dom);
      const auto& b = std::get<Metric>(cod);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (table[i] == kUndefined || table[j] == kUndefined) continue;
          if (!(b.at(table[i], table[j]) <= a.at(i, j))) {
            if (witness) {
              *witness = "distance grows on (" + std::to_string(i) + "," +
                         std::to_string(j) + "): " + to_string(a.at(i, j)) + " -> " +
                         to_string(b.at(table[i], table[j]));
            }
            return false;
          }
        }
      }
      return true;
    }
  }
  return false;
}

bool is_admissible(const StructuredMap& f) {
  if (f.dom.kind != f.cod.kind) fail("kind mismatch between domain and codomain");
  if (f.table.size() != f.dom.size()) fail("map table is not total on its domain");
  for (auto v : f.table) {
    if (v >= f.cod.size()) fail("map value outside codomain carrier");
  }
  return is_admissible(f.dom.kind, f.dom.structure, f.table, f.cod.structure);
}

// --------------------------------------------------------------- lattice

bool fib_leq(InstanceKind kind, const StructureData& a, const StructureData& b) {
  check_kind_matches(kind, a);
  check_kind_matches(kind, b);
  if (structure_size(a) != structure_size(b)) fail("fibre carrier mismatch");
  switch (kind) {
    case InstanceKind::Set: return true;
    case InstanceKind::Rel:
    case InstanceKind::Preord: return std::get<Relation>(a).subset_of(std::get<Relation>(b));
    case InstanceKind::Simp: return std::get<Complex>(a).subset_of(std::get<Complex>(b));
    case InstanceKind::PMet: {
      const auto& da = std::get<Metric>(a);
      const auto& db = std::get<Metric>(b);
      for (std::size_t i = 0; i < da.size(); ++i)
        for (std::size_t j = 0; j < da.size(); ++j)
          if (!(db.at(i, j) <= da.at(i, j))) return false;
      return true;
    }
  }
  return false;
}

StructureData fib_sup(InstanceKind kind, std::size_t n,
                      std::span<const StructureData> structures) {
  FinalLiftBuilder builder(kind, n);
  for (const auto& s : structures) {
    check_kind_matches(kind, s);
    if (kind != InstanceKind::Set && structure_size(s) != n) fail("fibre carrier mismatch");
    builder.add_structure(s);
  }
  return std::move(builder).finish();
}

StructureData fib_inf(InstanceKind kind, std::size_t n,
                      std::span<const StructureData> structures) {
  StructureData result = indiscrete_structure(kind, n);
  for (const auto& s : structures) {
    check_kind_matches(kind, s);
    if (kind != InstanceKind::Set && structure_size(s) != n) fail("fibre carrier mismatch");
    switch (kind) {
      case InstanceKind::Set: break;
      case InstanceKind::Rel:
      case InstanceKind::Preord: std::get<Relation>(result).intersect(std::get<Relation>(s)); break;
      case InstanceKind::Simp: {
        const auto& lhs = std::get<Complex>(result);
        const auto& rhs = std::get<Complex>(s);
        std::vector<Simplex> meets;
        for (const auto& f : lhs.facets()) {
          for (const auto& g : rhs.facets()) {
            Simplex m;
            std::set_intersection(f.begin(), f.end(), g.begin(), g.end(),
                                  std::back_inserter(m));
            if (!m.empty()) meets.push_back(std::move(m));
          }
        }
        result = Complex::generated(n, std::move(meets));
        break;
      }
      case InstanceKind::PMet: {
        auto& m = std::get<Metric>(result);
        const auto& other = std::get<Metric>(s);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (m.at(i, j) < other.at(i, j)) m.set(i, j, other.at(i, j));
        break;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------- lifts

FinalLiftBuilder::FinalLiftBuilder(InstanceKind kind, std::size_t target_size)
    : kind_(kind), n_(target_size) {
  if (is_relational(kind)) relation_ = Relation(n_);
  if (kind == InstanceKind::PMet) metric_ = Metric(n_);
}

void FinalLiftBuilder::add_simplex_image(std::vector<std::size_t> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() > 1) simplices_.push_back(std::move(points));
}

void FinalLiftBuilder::add_image(const VObject& source, std::span<const std::size_t> table) {
  if (source.kind != kind_) fail("kind mismatch in structured sink");
  if (table.size() != source.size()) fail("sink table is not defined on the whole source");
  for (auto v : table) {
    if (v != kUndefined && v >= n_) fail("sink table value outside target carrier");
  }
  switch (kind_) {
    case InstanceKind::Set: break;
    case InstanceKind::Rel:
    case InstanceKind::Preord:
      for (auto [i, j] : std::get<Relation>(source.structure).pairs()) {
        if (table[i] != kUndefined && table[j] != kUndefined) relation_.set(table[i], table[j]);
      }
      break;
    case InstanceKind::Simp:
      for (const auto& f : std::get<Complex>(source.structure).facets()) {
        std::vector<std::size_t> image;
        for (auto p : f)
          if (table[p] != kUndefined) image.push_back(table[p]);
        add_simplex_image(std::move(image));
      }
      break;
    case InstanceKind::PMet: {
      const auto& d = std::get<Metric>(source.structure);
      for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
          if (table[i] == kUndefined || table[j] == kUndefined) continue;
          if (d.at(i, j) < metric_.at(table[i], table[j])) metric_.set(table[i], table[j], d.at(i, j));
        }
      }
      break;
    }
  }
}

void FinalLiftBuilder::add_product_image(const ProductDomain& domain, const TupleMap& f) {
  if (domain.kind() != kind_) fail("kind mismatch in structured sink");
  auto check = [&](std::size_t v) {
    if (v != kUndefined && v >= n_) fail("sink map value outside target carrier");
    return v;
  };
  switch (kind_) {
    case InstanceKind::Set: break;
    case InstanceKind::Rel:
    case InstanceKind::Preord:
      domain.for_each_edge([&](auto from, auto to) {
        auto a = check(f(from));
        auto b = check(f(to));
        if (a != kUndefined && b != kUndefined) relation_.set(a, b);
        return true;
      });
      break;
    case InstanceKind::Simp:
      domain.for_each_facet([&](const std::vector<const Simplex*>& facets) {
        std::vector<std::size_t> radix;
        for (const auto* s : facets) radix.push_back(s->size());
        std::vector<std::size_t> digits(facets.size(), 0);
        std::vector<std::size_t> coords(facets.size());
        std::vector<std::size_t> image;
        do {
          for (std::size_t i = 0; i < facets.size(); ++i) coords[i] = (*facets[i])[digits[i]];
          auto v = check(f(coords));
          if (v != kUndefined) image.push_back(v);
        } while (next_digits(digits, radix));
        add_simplex_image(std::move(image));
        return true;
      });
      break;
    case InstanceKind::PMet:
      domain.for_each_pair([&](auto from, auto to, const Distance& d) {
        auto a = check(f(from));
        auto b = check(f(to));
        if (a != kUndefined && b != kUndefined && d < metric_.at(a, b)) metric_.set(a, b, d);
        return true;
      });
      break;
  }
}

void FinalLiftBuilder::add_structure(const StructureData& s) {
  check_kind_matches(kind_, s);
  switch (kind_) {
    case InstanceKind::Set: break;
    case InstanceKind::Rel:
    case InstanceKind::Preord: relation_.unite(std::get<Relation>(s)); break;
    case InstanceKind::Simp:
      for (const auto& f : std::get<Complex>(s).facets()) simplices_.push_back(f);
      break;
    case InstanceKind::PMet: {
      const auto& d = std::get<Metric>(s);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
          if (d.at(i, j) < metric_.at(i, j)) metric_.set(i, j, d.at(i, j));
      break;
    }
  }
}

StructureData FinalLiftBuilder::finish() && {
  switch (kind_) {
    case InstanceKind::Set: return std::monostate{};
    case InstanceKind::Rel: return std::move(relation_);
    case InstanceKind::Preord: relation_.close_preorder(); return std::move(relation_);
    case InstanceKind::Simp: return Complex::generated(n_, std::move(simplices_));
    case InstanceKind::PMet: metric_.close(); return std::move(metric_);
  }
  return std::monostate{};
}

StructureData final_lift(InstanceKind kind, const Carrier& target,
                         std::span<const SinkMap> sink) {
  FinalLiftBuilder builder(kind, target.size());
  for (const auto& g : sink) {
    for (auto v : g.table) {
      if (v >= target.size()) fail("sink table value outside target carrier");
    }
    builder.add_image(*g.source, g.table);
  }
  return std::move(builder).finish();
}

StructureData initial_lift(InstanceKind kind, const Carrier& source,
                           std::span<const SourceMap> maps) {
  const std::size_t n = source.size();
  for (const auto& f : maps) {
    if (f.target->kind != kind) fail("kind mismatch in structured source");
    if (f.table.size() != n) fail("source table is not defined on the whole source");
    for (auto v : f.table) {
      if (v >= f.target->size()) fail("source table value outside target carrier");
    }
  }
  switch (kind) {
    case InstanceKind::Set: return std::monostate{};
    case InstanceKind::Rel:
    case InstanceKind::Preord: {
      Relation r = Relation::full(n);
      for (const auto& f : maps) {
        const auto& e = as_relation(f.target->structure);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (!e.test(f.table[i], f.table[j])) r.reset(i, j);
      }
      return r;
    }
    case InstanceKind::Simp: {
      // Allowed simplices are the nonempty subsets of some intersection of
      // preimages of facets, one facet chosen per map.
      std::vector<Simplex> blocks;
      if (n > 0) {
        Simplex all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        blocks.push_back(std::move(all));
      }
      for (const auto& f : maps) {
        const auto& c = as_complex(f.target->structure);
        std::vector<Simplex> preimages;
        for (const auto& facet : c.facets()) {
          Simplex pre;
          for (std::size_t x = 0; x < n; ++x)
            if (std::binary_search(facet.begin(), facet.end(), f.table[x])) pre.push_back(x);
          if (!pre.empty()) preimages.push_back(std::move(pre));
        }
        std::vector<Simplex> next;
        for (const auto& b : blocks) {
          for (const auto& pre : preimages) {
            Simplex m;
            std::set_intersection(b.begin(), b.end(), pre.begin(), pre.end(),
                                  std::back_inserter(m));
            if (!m.empty()) next.push_back(std::move(m));
          }
        }
        blocks = Complex::generated(n, std::move(next)).facets();
      }
      return Complex::generated(n, std::move(blocks));
    }
    case InstanceKind::PMet: {
      Metric m = Metric::zero(n);
      for (const auto& f : maps) {
        const auto& d = as_metric(f.target->structure);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (m.at(i, j) < d.at(f.table[i], f.table[j])) m.set(i, j, d.at(f.table[i], f.table[j]));
      }
      return m;
    }
  }
  return std::monostate{};
}

VObject product(InstanceKind kind, std::span<const VObject> factors) {
  std::vector<std::size_t> radix;
  std::size_t total = 1;
  for (const auto& f : factors) {
    if (f.kind != kind) fail("kind mismatch among product factors");
    radix.push_back(f.size());
    total = saturating_mul(total, f.size());
  }
  if (total > (std::size_t{1} << 24)) unsupported("product carrier too large to materialize");

  std::vector<std::string> names;
  names.reserve(total);
  std::vector<std::vector<std::size_t>> projections(factors.size());
  for (auto& p : projections) p.reserve(total);
  if (total > 0) {
    std::vector<std::size_t> digits(factors.size(), 0);
    do {
      std::string name = "(";
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) name += ",";
        name += factors[i].carrier.name(digits[i]);
        projections[i].push_back(digits[i]);
      }
      names.push_back(name + ")");
    } while (next_digits(digits, radix));
  }
  Carrier carrier(std::move(names));
  std::vector<SourceMap> maps;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    maps.push_back(SourceMap{projections[i], &factors[i]});
  }
  auto structure = initial_lift(kind, carrier, maps);
  return VObject{kind, std::move(carrier), std::move(structure)};
}

// --------------------------------------------------------- ProductDomain

ProductDomain::ProductDomain(InstanceKind kind, std::vector<const VObject*> factors)
    : kind_(kind), factors_(std::move(factors)) {
  for (const auto* f : factors_) {
    if (f->kind != kind_) fail("kind mismatch among product factors");
  }
}

std::size_t ProductDomain::size() const {
  std::size_t total = 1;
  for (const auto* f : factors_) total = saturating_mul(total, f->size());
  return total;
}

std::string ProductDomain::tuple_name(std::span<const std::size_t> coords) const {
  std::string name = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) name += ",";
    name += factors_[i]->carrier.name(coords[i]);
  }
  return name + ")";
}

bool ProductDomain::for_each_edge(const std::function<bool(Coords, Coords)>& fn) const {
  if (!is_relational(kind_)) fail("edge enumeration needs a relational instance");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;
  std::vector<std::size_t> radix;
  for (const auto* f : factors_) {
    edges.push_back(as_relation(f->structure).pairs());
    if (edges.back().empty()) return true;
    radix.push_back(edges.back().size());
  }
  std::vector<std::size_t> digits(factors_.size(), 0);
  std::vector<std::size_t> from(factors_.size()), to(factors_.size());
  do {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      from[i] = edges[i][digits[i]].first;
      to[i] = edges[i][digits[i]].second;
    }
    if (!fn(from, to)) return false;
  } while (next_digits(digits, radix));
  return true;
}

bool ProductDomain::for_each_facet(
    const std::function<bool(const std::vector<const Simplex*>&)>& fn) const {
  if (kind_ != InstanceKind::Simp) fail("facet enumeration needs Simp");
  std::vector<std::size_t> radix;
  for (const auto* f : factors_) {
    radix.push_back(as_complex(f->structure).facets().size());
    if (radix.back() == 0) return true;
  }
  std::vector<std::size_t> digits(factors_.size(), 0);
  std::vector<const Simplex*> chosen(factors_.size());
  do {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      chosen[i] = &as_complex(factors_[i]->structure).facets()[digits[i]];
    }
    if (!fn(chosen)) return false;
  } while (next_digits(digits, radix));
  return true;
}

bool ProductDomain::for_each_pair(
    const std::function<bool(Coords, Coords, const Distance&)>& fn) const {
  if (kind_ != InstanceKind::PMet) fail("pair enumeration needs PMet");
  std::vector<std::size_t> radix;
  for (const auto* f : factors_) {
    radix.push_back(f->size());
    if (radix.back() == 0) return true;
  }
  // Odometer over (from, to) jointly.
  std::vector<std::size_t> joint_radix(radix);
  joint_radix.insert(joint_radix.end(), radix.begin(), radix.end());
  std::vector<std::size_t> digits(joint_radix.size(), 0);
  const std::size_t k = factors_.size();
  do {
    Distance d(0L);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& di = as_metric(factors_[i]->structure).at(digits[i], digits[k + i]);
      if (d < di) d = di;
    }
    Coords from(digits.data(), k);
    Coords to(digits.data() + k, k);
    if (!fn(from, to, d)) return false;
  } while (next_digits(digits, joint_radix));
  return true;
}

bool is_admissible_from_product(const ProductDomain& domain, const TupleMap& f,
                                const StructureData& cod, std::string* witness) {
  check_kind_matches(domain.kind(), cod);
  const std::size_t m = structure_size(cod);
  auto value = [&](ProductDomain::Coords c) {
    auto v = f(c);
    if (v != kUndefined && domain.kind() != InstanceKind::Set && v >= m) {
      fail("map value outside codomain carrier");
    }
    return v;
  };
  switch (domain.kind()) {
    case InstanceKind::Set: return true;
    case InstanceKind::Rel:
    case InstanceKind::Preord: {
      const auto& e = std::get<Relation>(cod);
      return domain.for_each_edge([&](auto from, auto to) {
        auto a = value(from);
        auto b = value(to);
        if (a == kUndefined || b == kUndefined || e.test(a, b)) return true;
        if (witness) {
          *witness = "related tuples " + domain.tuple_name(from) + " -> " +
                     domain.tuple_name(to) + " have unrelated images";
        }
        return false;
      });
    }
    case InstanceKind::Simp: {
      const auto& c = std::get<Complex>(cod);
      return domain.for_each_facet([&](const std::vector<const Simplex*>& facets) {
        std::vector<std::size_t> radix;
        for (const auto* s : facets) radix.push_back(s->size());
        std::vector<std::size_t> digits(facets.size(), 0);
        std::vector<std::size_t> coords(facets.size());
        Simplex image;
        do {
          for (std::size_t i = 0; i < facets.size(); ++i) coords[i] = (*facets[i])[digits[i]];
          auto v = value(coords);
          if (v != kUndefined) image.push_back(v);
        } while (next_digits(digits, radix));
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        if (c.contains(image)) return true;
        if (witness) {
          std::string text = "product simplex ";
          for (std::size_t i = 0; i < facets.size(); ++i) {
            if (i) text += " x ";
            text += "{";
            for (std::size_t j = 0; j < facets[i]->size(); ++j) {
              if (j) text += ",";
              text += domain.factor(i).carrier.name((*facets[i])[j]);
            }
            text += "}";
          }
          *witness = text + " has an image that is not a simplex";
        }
        return false;
      });
    }
    case InstanceKind::PMet: {
      const auto& d = std::get<Metric>(cod);
      return domain.for_each_pair([&](auto from, auto to, const Distance& dist) {
        auto a = value(from);
        auto b = value(to);
        if (a == kUndefined || b == kUndefined || d.at(a, b) <= dist) return true;
        if (witness) {
          *witness = "tuples " + domain.tuple_name(from) + ", " + domain.tuple_name(to) +
                     " at distance " + to_string(dist) + " map to distance " +
                     to_string(d.at(a, b));
        }
        return false;
      });
    }
  }
  return false;
}

// ------------------------------------------------------------ enumeration

FibreCaps FibreCaps::from_environment() {
  FibreCaps caps;
  if (const char* env = std::getenv("ENRALG_MAX_FIBRE"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != nullptr && *end == '\0') caps.rel = caps.preord = caps.simp = v;
  }
  return caps;
}

std::size_t FibreCaps::cap(InstanceKind kind) const {
  switch (kind) {
    case InstanceKind::Rel: return rel;
    case InstanceKind::Preord: return preord;
    case InstanceKind::Simp: return simp;
    case InstanceKind::Set: return std::numeric_limits<std::size_t>::max();
    case InstanceKind::PMet: return 0;
  }
  return 0;
}

void for_each_fibre_element(InstanceKind kind, std::size_t n, const FibreCaps& caps,
                            const std::function<bool(const StructureData&)>& fn) {
  if (kind == InstanceKind::PMet) {
    unsupported("PMet fibres are infinite and cannot be enumerated");
  }
  if (n > caps.cap(kind)) {
    unsupported("fibre enumeration refused: carrier of size " + std::to_string(n) +
                " exceeds the " + std::string(to_string(kind)) + " cap of " +
                std::to_string(caps.cap(kind)));
  }
  switch (kind) {
    case InstanceKind::Set: fn(std::monostate{}); return;
    case InstanceKind::Rel: {
      const std::size_t bits = n * n;
      if (bits >= 63) unsupported("relation fibre too large");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        Relation r(n);
        for (std::size_t b = 0; b < bits; ++b)
          if ((mask >> b) & 1u) r.set(b / n, b % n);
        if (!fn(r)) return;
      }
      return;
    }
    case InstanceKind::Preord: {
      std::vector<std::pair<std::size_t, std::size_t>> off;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) off.emplace_back(i, j);
      if (off.size() >= 63) unsupported("preorder fibre too large");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << off.size()); ++mask) {
        Relation r = Relation::identity(n);
        for (std::size_t b = 0; b < off.size(); ++b)
          if ((mask >> b) & 1u) r.set(off[b].first, off[b].second);
        if (r.is_transitive() && !fn(r)) return;
      }
      return;
    }
    case InstanceKind::Simp: {
      if (n > 16) unsupported("simplicial fibre too large");
      std::vector<std::uint32_t> candidates;
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
        if (std::popcount(mask) >= 2) candidates.push_back(mask);
      std::stable_sort(candidates.begin(), candidates.end(), [](auto a, auto b) {
        return std::popcount(a) < std::popcount(b);
      });
      std::vector<char> chosen(std::size_t{1} << n, 0);
      for (std::uint32_t p = 0; p < n; ++p) chosen[1u << p] = 1;
      bool stop = false;
      std::function<void(std::size_t)> recurse = [&](std::size_t idx) {
        if (stop) return;
        if (idx == candidates.size()) {
          std::vector<Simplex> simplices;
          for (auto mask : candidates) {
            if (!chosen[mask]) continue;
            Simplex s;
            for (std::size_t p = 0; p < n; ++p)
              if ((mask >> p) & 1u) s.push_back(p);
            simplices.push_back(std::move(s));
          }
          if (!fn(Complex::generated(n, std::move(simplices)))) stop = true;
          return;
        }
        recurse(idx + 1);
        const std::uint32_t mask = candidates[idx];
        for (std::size_t p = 0; p < n; ++p) {
          if (((mask >> p) & 1u) && !chosen[mask & ~(1u << p)]) return;
        }
        chosen[mask] = 1;
        recurse(idx + 1);
        chosen[mask] = 0;
      };
      recurse(0);
      return;
    }
    case InstanceKind::PMet: return;
  }
}

std::vector<StructureData> enumerate_fibre(InstanceKind kind, const Carrier& carrier,
                                           const FibreCaps& caps) {
  std::vector<StructureData> out;
  for_each_fibre_element(kind, carrier.size(), caps, [&](const StructureData& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::size_t fibre_size(InstanceKind kind, std::size_t n, const FibreCaps& caps) {
  if (kind == InstanceKind::Rel) {
    if (n > caps.cap(kind)) {
      unsupported("fibre enumeration refused: carrier of size " + std::to_string(n) +
                  " exceeds the Rel cap of " + std::to_string(caps.cap(kind)));
    }
    return n * n >= 64 ? std::numeric_limits<std::size_t>::max()
                       : std::size_t{1} << (n * n);
  }
  std::size_t count = 0;
  for_each_fibre_element(kind, n, caps, [&](const StructureData&) {
    ++count;
    return true;
  });
  return count;
}

}  // namespace enralg
