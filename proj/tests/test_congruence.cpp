#include <gtest/gtest.h>

#include "enralg/congruence.hpp"
#include "enralg/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace enralg;

namespace {

std::set<std::set<std::string>> classes(const Carrier& names, const SortedCongruence& c, SortId s) {
  std::set<std::set<std::string>> out;
  for (std::size_t k = 0; k < c.class_count(s); ++k) {
    std::set<std::string> cls;
    for (auto m : c.members(s, k)) cls.insert(names.name(m));
    out.insert(cls);
  }
  return out;
}

// Preord chain 0 <= 1 <= 2 with the capped successor.
std::shared_ptr<const Algebra> capped_successor() {
  auto sig = std::make_shared<EnrichedSignature>();
  sig->kind = InstanceKind::Preord;
  auto x = sig->add_sort("X");
  sig->add_op("s", {x}, x);
  Relation chain = Relation::identity(3);
  chain.set(0, 1);
  chain.set(1, 2);
  chain.close_preorder();
  auto a = std::make_shared<Algebra>(sig, std::vector<VObject>{make_vobject(InstanceKind::Preord, Carrier({"0", "1", "2"}), chain)});
  for (std::size_t v = 0; v < 3; ++v) a->set(0, 0, std::vector<std::size_t>{v}, std::min<std::size_t>(v + 1, 2));
  return a;
}

// Every Set monoid-signature algebra on n elements (not necessarily monoids).
std::vector<std::shared_ptr<const Algebra>> all_small_algebras(std::shared_ptr<const EnrichedSignature> sig, std::size_t n) {
  std::vector<std::shared_ptr<const Algebra>> out;
  std::size_t cells = n * n;
  std::size_t tables = 1;
  for (std::size_t i = 0; i < cells; ++i) tables *= n;
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t code = 0; code < tables; ++code) {
      auto a = std::make_shared<Algebra>(sig, std::vector<VObject>{discrete_object(sig->kind, Carrier::numbered(n))});
      a->set(0, 0, {}, e);
      std::size_t rest = code;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          a->set(1, 0, std::vector<std::size_t>{x, y}, rest % n);
          rest /= n;
        }
      out.push_back(a);
    }
  return out;
}

}  // namespace

TEST(Generated, StratifiedSingleSeed) {
  auto l = support::load("stratified.json");
  TermUniverse u(l.sig, {Carrier({"a"}), Carrier()});
  auto c = generated_congruence(u, l.theory->equations);
  EXPECT_EQ(classes(u.carrier(1), c, 1), (std::set<std::set<std::string>>{{"f(a)", "g(a)"}}));
  EXPECT_EQ(c.class_count(0), 1u);
}

TEST(Generated, MonoidDepthTwoMatchesNaive) {
  auto l = support::load("monoid.json");
  GenerationPolicy policy;
  policy.max_depth = 2;
  TermUniverse u(l.sig, {Carrier({"x"})}, policy);
  auto c = generated_congruence(u, l.theory->equations);
  auto names = u.carrier(0);
  auto cls = classes(names, c, 0);
  auto same = [&](const std::string& a, const std::string& b) {
    for (const auto& k : cls)
      if (k.count(a)) return k.count(b) > 0;
    return false;
  };
  EXPECT_TRUE(same("m(e,x)", "x"));
  EXPECT_TRUE(same("x", "m(x,e)"));
  EXPECT_TRUE(same("m(m(x,x),e)", "m(x,x)"));
  EXPECT_FALSE(same("x", "e"));

  auto terms = oracle::classical_terms(*l.sig, {{"x"}}, 2);
  auto naive = oracle::naive_congruence(terms.algebra, l.theory->equations);
  EXPECT_EQ(cls, oracle::partition(terms.algebra, naive, 0));
  EXPECT_EQ(c.class_count(0), naive.classes(0));
}

TEST(Generated, NoEquationsGiveEquality) {
  auto l = support::load("monoid.json");
  auto z4 = support::algebra(l, "alg_z4.json");
  auto c = generated_congruence(*z4, {});
  EXPECT_EQ(c, SortedCongruence::identity({4}));
}

TEST(Generated, AlgebraLevelMatchesNaive) {
  auto l = support::load("monoid.json");
  auto z4 = support::algebra(l, "alg_z4.json");
  auto eqs = parse_equations(*l.sig, read_json_file(support::fixture("eq_square_unit.json")), "$");
  auto c = generated_congruence(*z4, eqs);
  EXPECT_EQ(classes(z4->carrier(0).carrier, c, 0),
            (std::set<std::set<std::string>>{{"0", "2"}, {"1", "3"}}));
  auto cl = oracle::classical_of(*z4);
  EXPECT_EQ(classes(z4->carrier(0).carrier, c, 0), oracle::partition(cl, oracle::naive_congruence(cl, eqs), 0));
}

TEST(Kernel, ParityInjectiveConstant) {
  auto l = support::load("monoid.json");
  auto z4 = support::algebra(l, "alg_z4.json");
  auto z2 = support::algebra(l, "alg_xor.json");
  auto one = support::algebra(l, "alg_trivial.json");
  auto k = kernel_congruence(Homomorphism{z4, z2, {{0, 1, 0, 1}}});
  EXPECT_EQ(classes(z4->carrier(0).carrier, k, 0), (std::set<std::set<std::string>>{{"0", "2"}, {"1", "3"}}));
  EXPECT_EQ(kernel_congruence(identity_homomorphism(z4)), SortedCongruence::identity({4}));
  EXPECT_EQ(kernel_congruence(Homomorphism{z4, one, {{0, 0, 0, 0}}}).class_count(0), 1u);
  EXPECT_THROW(kernel_congruence(Homomorphism{z4, z2, {{0, 1, 1, 0}}}), Error);
}

TEST(IsCongruence, Examples) {
  auto l = support::load("monoid.json");
  auto z4 = support::algebra(l, "alg_z4.json");
  EXPECT_TRUE(is_congruence(*z4, SortedCongruence::identity({4})).ok);
  EXPECT_TRUE(is_congruence(*z4, SortedCongruence::from_labels({{0, 0, 0, 0}})).ok);
  auto r = is_congruence(*z4, SortedCongruence::from_labels({{0, 0, 1, 1}}));
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.witness.find("m"), std::string::npos) << r.witness;
  EXPECT_THROW(quotient(z4, SortedCongruence::from_labels({{0, 0, 1, 1}})), Error);
}

TEST(Quotient, IdentityIsACopy) {
  auto l = support::load("monoid_preord.json");
  auto a = support::algebra(l, "alg_and_chain.json");
  auto q = quotient(a, SortedCongruence::identity({2}));
  EXPECT_EQ(q.q.tables[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(q.algebra->carrier(0), a->carrier(0));
  EXPECT_TRUE(is_homomorphism(q.q).ok);
}

TEST(Quotient, CollapsedChainIsFinal) {
  auto a = capped_successor();
  auto c = SortedCongruence::from_labels({{0, 1, 1}});
  ASSERT_TRUE(is_congruence(*a, c).ok);
  auto q = quotient(a, c);
  ASSERT_EQ(q.algebra->carrier(0).size(), 2u);
  const auto& rel = std::get<Relation>(q.algebra->carrier(0).structure);
  EXPECT_TRUE(rel.test(0, 1));
  EXPECT_FALSE(rel.test(1, 0));
  EXPECT_TRUE(is_homomorphism(q.q).ok);
  EXPECT_TRUE(validate_algebra(*q.algebra).valid());

  // Independent final lift: meet of every preorder on two points making q monotone.
  auto src = oracle::encode(InstanceKind::Preord, 3, a->carrier(0).structure);
  auto expect = oracle::final_lift(InstanceKind::Preord, 2, {{3, src, q.q.tables[0]}});
  EXPECT_EQ(oracle::encode(InstanceKind::Preord, 2, q.algebra->carrier(0).structure), expect);
}

TEST(Quotient, SingleClass) {
  auto a = capped_successor();
  auto q = quotient(a, SortedCongruence::from_labels({{0, 0, 0}}));
  ASSERT_EQ(q.algebra->carrier(0).size(), 1u);
  auto src = oracle::encode(InstanceKind::Preord, 3, a->carrier(0).structure);
  EXPECT_EQ(oracle::encode(InstanceKind::Preord, 1, q.algebra->carrier(0).structure),
            oracle::final_lift(InstanceKind::Preord, 1, {{3, src, {0, 0, 0}}}));
}

TEST(Quotient, GeneratedIsBelowEveryKernel) {
  auto l = support::load("monoid.json");
  auto z4 = support::algebra(l, "alg_z4.json");
  auto eqs = parse_equations(*l.sig, read_json_file(support::fixture("eq_square_unit.json")), "$");
  auto c = generated_congruence(*z4, eqs);
  auto q = quotient(z4, c);
  std::size_t targets = 0;
  std::size_t homs = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    for (const auto& b : all_small_algebras(l.sig, n)) {
      bool model = true;
      for (const auto& eq : eqs) model = model && satisfies(*b, eq).holds;
      if (!model) continue;
      ++targets;
      for (std::size_t code = 0; code < n * n * n * n; ++code) {
        std::vector<std::size_t> table(4);
        std::size_t rest = code;
        for (auto& t : table) {
          t = rest % n;
          rest /= n;
        }
        Homomorphism h{z4, b, {table}};
        if (!is_homomorphism(h).ok) continue;
        ++homs;
        EXPECT_TRUE(c.refines(kernel_congruence(h)));
        // Factorization through the quotient.
        std::vector<std::size_t> induced(q.algebra->carrier(0).size());
        for (std::size_t x = 0; x < 4; ++x) induced[q.q.tables[0][x]] = table[x];
        Homomorphism k{q.algebra, b, {induced}};
        EXPECT_TRUE(is_homomorphism(k).ok);
        EXPECT_EQ(compose(k, q.q).tables, h.tables);
      }
    }
  }
  EXPECT_GT(targets, 0u);
  EXPECT_GT(homs, 0u);
}

TEST(Quotient, TermQuotientSatisfiesTheEquations) {
  auto l = support::load("stratified.json");
  auto f = free_theory(l.theory, {discrete_object(InstanceKind::Preord, Carrier({"a", "b"})),
                                  discrete_object(InstanceKind::Preord, Carrier())});
  ASSERT_TRUE(f.exact);
  for (const auto& eq : l.theory->equations) EXPECT_TRUE(satisfies(*f.algebra, eq).holds);
  EXPECT_FALSE(satisfies(*f.term_algebra, l.theory->equations[0]).holds);
}

TEST(Quotient, ForgetThenQuotientEqualsQuotientThenForget) {
  auto l = support::load("monoid.json");
  auto z4 = support::algebra(l, "alg_z4.json");
  auto c = SortedCongruence::from_labels({{0, 1, 0, 1}});
  auto q = quotient(z4, c);
  auto before = oracle::classical_of(*z4);
  auto after = oracle::classical_of(*q.algebra);
  // Classical quotient: the class of sigma(args) for any representatives.
  for (std::size_t k = 0; k < before.symbols.size(); ++k)
    for (const auto& [args, v] : before.tables[k]) {
      std::vector<std::size_t> image;
      for (auto x : args) image.push_back(q.q.tables[0][x]);
      ASSERT_TRUE(after.apply(k, image));
      EXPECT_EQ(*after.apply(k, image), q.q.tables[0][v]);
    }
}
