#include "enralg/term.hpp"

#include <cstdlib>
#include <limits>

#include "enralg/error.hpp"

namespace enralg {

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t mul_sat(std::size_t a, std::size_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::size_t add_sat(std::size_t a, std::size_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

}  // namespace

GenerationPolicy GenerationPolicy::from_environment() {
  GenerationPolicy policy;
  if (const char* env = std::getenv("ENRALG_MAX_TERMS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) policy.max_count = v;
  }
  return policy;
}

std::size_t TermUniverse::KeyHash::operator()(const std::vector<std::size_t>& k) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (auto v : k) h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

TermUniverse::TermUniverse(std::shared_ptr<const EnrichedSignature> sig,
                           std::vector<Carrier> generators, const GenerationPolicy& policy)
    : sig_(std::move(sig)), generators_(std::move(generators)) {
  const auto& s = *sig_;
  if (generators_.size() != s.sorts.size()) {
    fail("generator family has " + std::to_string(generators_.size()) + " sorts, signature has " +
         std::to_string(s.sorts.size()));
  }
  for (SortId k = 0; k < s.sorts.size(); ++k) {
    for (const auto& name : generators_[k].names()) {
      for (const auto& op : s.ops) {
        if (op.arity() == 0 && op.name == name) {
          fail("generator '" + name + "' of sort " + s.sorts[k] +
               " has the same name as a constant operation");
        }
      }
    }
  }
  by_sort_.resize(s.sorts.size());

  std::size_t total = 0;
  for (SortId k = 0; k < s.sorts.size(); ++k) total += generators_[k].size();
  if (total > policy.max_count) {
    fail("generators alone exceed the term cap of " + std::to_string(policy.max_count));
  }
  for (SortId k = 0; k < s.sorts.size(); ++k) {
    for (std::size_t e = 0; e < generators_[k].size(); ++e) {
      TermNode n;
      n.is_const = true;
      n.sort = k;
      n.element = e;
      add(std::move(n));
    }
  }
  upto_depth_.emplace_back();
  for (SortId k = 0; k < s.sorts.size(); ++k) upto_depth_.back().push_back(by_sort_[k].size());

  bool truncated = false;
  for (unsigned d = 1; d <= policy.max_depth; ++d) {
    const std::size_t count = stage_count(d);
    if (count == 0) {
      finite_ = true;
      break;
    }
    if (add_sat(nodes_.size(), count) > policy.max_count) {
      warnings_.push_back("term generation stopped before depth " + std::to_string(d) +
                          ": that stage adds " +
                          (count == kSaturated ? std::string("too many") : std::to_string(count)) +
                          " terms, over the cap of " + std::to_string(policy.max_count));
      truncated = true;
      break;
    }
    materialize(d);
    depth_reached_ = d;
  }
  if (!finite_ && !truncated) {
    finite_ = stage_count(policy.max_depth + 1) == 0;
    if (!finite_) {
      warnings_.push_back("term universe truncated at depth " + std::to_string(depth_reached_));
    }
  }
}

TermId TermUniverse::add(TermNode node) {
  const TermId id = nodes_.size();
  node.local = by_sort_[node.sort].size();
  by_sort_[node.sort].push_back(id);
  if (!node.is_const) {
    std::vector<std::size_t> key{node.op, node.point};
    key.insert(key.end(), node.args.begin(), node.args.end());
    apps_.emplace(std::move(key), id);
  }
  nodes_.push_back(std::move(node));
  return id;
}

// Number of terms of depth exactly d: tuples over depth <= d-1 minus those
// over depth <= d-2. Nullary symbols all sit at depth 1.
std::size_t TermUniverse::stage_count(unsigned d) const {
  std::size_t count = 0;
  for (const auto& op : sig_->ops) {
    std::size_t per_point = 0;
    if (op.arity() == 0) {
      per_point = d == 1 ? 1 : 0;
    } else if (d - 1 < upto_depth_.size()) {
      std::size_t upper = 1;
      std::size_t lower = d >= 2 ? 1 : 0;
      for (auto s : op.inputs) {
        upper = mul_sat(upper, upto_depth_[d - 1][s]);
        if (d >= 2) lower = mul_sat(lower, upto_depth_[d - 2][s]);
      }
      per_point = upper == kSaturated ? kSaturated : upper - lower;
    }
    count = add_sat(count, mul_sat(per_point, op.points()));
  }
  return count;
}

void TermUniverse::materialize(unsigned d) {
  const auto& s = *sig_;
  for (OpId o = 0; o < s.ops.size(); ++o) {
    const auto& op = s.ops[o];
    for (std::size_t p = 0; p < op.points(); ++p) {
      if (op.arity() == 0) {
        if (d != 1) continue;
        TermNode n;
        n.sort = op.output;
        n.op = o;
        n.point = p;
        n.depth = 1;
        add(std::move(n));
        continue;
      }
      std::vector<std::size_t> limit;
      for (auto in : op.inputs) limit.push_back(upto_depth_[d - 1][in]);
      bool empty = false;
      for (auto l : limit) empty = empty || l == 0;
      if (empty) continue;
      std::vector<std::size_t> digits(op.arity(), 0);
      for (bool more = true; more;) {
        std::vector<TermId> args(op.arity());
        bool fresh = false;
        for (std::size_t i = 0; i < op.arity(); ++i) {
          args[i] = by_sort_[op.inputs[i]][digits[i]];
          fresh = fresh || nodes_[args[i]].depth == d - 1;
        }
        if (fresh) {
          TermNode n;
          n.sort = op.output;
          n.op = o;
          n.point = p;
          n.args = std::move(args);
          n.depth = d;
          add(std::move(n));
        }
        more = false;
        for (std::size_t i = op.arity(); i-- > 0;) {
          if (++digits[i] < limit[i]) {
            more = true;
            break;
          }
          digits[i] = 0;
        }
      }
    }
  }
  upto_depth_.emplace_back();
  for (SortId k = 0; k < s.sorts.size(); ++k) upto_depth_.back().push_back(by_sort_[k].size());
}

std::optional<TermId> TermUniverse::find_const(SortId s, std::size_t element) const {
  if (s >= generators_.size() || element >= generators_[s].size()) return std::nullopt;
  // Constants come first in each sort list, in carrier order.
  return by_sort_[s][element];
}

std::optional<TermId> TermUniverse::find_app(OpId op, std::size_t point,
                                             std::span<const TermId> args) const {
  std::vector<std::size_t> key{op, point};
  key.insert(key.end(), args.begin(), args.end());
  auto it = apps_.find(key);
  if (it == apps_.end()) return std::nullopt;
  return it->second;
}

std::string TermUniverse::to_string(TermId t) const {
  const auto& n = nodes_.at(t);
  if (n.is_const) return generators_[n.sort].name(n.element);
  std::string out = symbol_name(*sig_, n.op, n.point);
  if (!n.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) out += ",";
      out += to_string(n.args[i]);
    }
    out += ")";
  }
  return out;
}

Carrier TermUniverse::carrier(SortId s) const {
  std::vector<std::string> names;
  names.reserve(by_sort_.at(s).size());
  for (auto t : by_sort_[s]) names.push_back(to_string(t));
  return Carrier(std::move(names));
}

int canonical_compare(const TermUniverse& u, TermId a, TermId b) {
  if (a == b) return 0;
  const auto& x = u.node(a);
  const auto& y = u.node(b);
  auto cmp = [](auto p, auto q) { return p < q ? -1 : (q < p ? 1 : 0); };
  if (int c = cmp(x.depth, y.depth)) return c;
  if (x.is_const != y.is_const) return x.is_const ? -1 : 1;
  if (x.is_const) {
    if (int c = cmp(x.sort, y.sort)) return c;
    return cmp(x.element, y.element);
  }
  if (int c = cmp(x.op, y.op)) return c;
  if (int c = cmp(x.point, y.point)) return c;
  for (std::size_t i = 0; i < x.args.size() && i < y.args.size(); ++i) {
    if (int c = canonical_compare(u, x.args[i], y.args[i])) return c;
  }
  return cmp(x.args.size(), y.args.size());
}

}  // namespace enralg
