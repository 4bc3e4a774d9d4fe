#include <gtest/gtest.h>

#include "enralg/error.hpp"
#include "enralg/free.hpp"
#include "enralg/oracle.hpp"
#include "support.hpp"

using namespace enralg;

namespace {

GenerationPolicy depth(unsigned d) {
  GenerationPolicy p;
  p.max_depth = d;
  return p;
}

std::size_t index_of(const Carrier& c, const std::string& name) {
  auto i = c.find(name);
  EXPECT_TRUE(i.has_value()) << name;
  return i.value_or(0);
}

bool related(const VObject& v, const std::string& a, const std::string& b) {
  return std::get<Relation>(v.structure).test(index_of(v.carrier, a), index_of(v.carrier, b));
}

VObject chain_ab(InstanceKind kind) {
  Relation r = Relation::identity(2);
  r.set(0, 1);
  return make_vobject(kind, Carrier({"a", "b"}), r);
}

}  // namespace

TEST(Omega, EmptySignatureStopsAtStageZero) {
  auto sig = std::make_shared<EnrichedSignature>();
  sig->kind = InstanceKind::Preord;
  sig->add_sort("A");
  std::vector<VObject> gens{chain_ab(InstanceKind::Preord)};
  TermUniverse u(sig, {gens[0].carrier});
  auto chain = omega_chain(*sig, gens, u, 100);
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0][0], gens[0].structure);
}

TEST(Omega, RelUnaryParameterStages) {
  auto l = support::load("rel_unary.json");
  auto gens = support::generators(l, "gens_star.json");
  TermUniverse u(l.sig, {gens[0].carrier}, depth(2));
  auto chain = omega_chain(*l.sig, gens, u, 100);
  ASSERT_EQ(chain.size(), 3u);
  auto names = u.carrier(0);
  auto pairs = [&](const StructureData& s) {
    std::set<std::pair<std::string, std::string>> out;
    for (auto [x, y] : std::get<Relation>(s).pairs()) out.insert({names.name(x), names.name(y)});
    return out;
  };
  using P = std::set<std::pair<std::string, std::string>>;
  EXPECT_EQ(pairs(chain[0][0]), (P{{"*", "*"}}));
  EXPECT_EQ(pairs(chain[1][0]), (P{{"*", "*"}, {"f[p](*)", "f[q](*)"}}));
  EXPECT_EQ(pairs(chain[2][0]), (P{{"*", "*"}, {"f[p](*)", "f[q](*)"}, {"f[p](f[p](*))", "f[q](f[q](*))"}}));
}

TEST(Omega, PreordBinaryOnChain) {
  auto l = support::load("monoid_preord.json");
  std::vector<VObject> gens{chain_ab(InstanceKind::Preord)};
  TermUniverse u(l.sig, {gens[0].carrier}, depth(1));
  auto chain = omega_chain(*l.sig, gens, u, 100);
  ASSERT_GE(chain.size(), 2u);
  VObject stage1{InstanceKind::Preord, u.carrier(0), chain[1][0]};
  EXPECT_TRUE(related(stage1, "m(a,a)", "m(b,b)"));
  EXPECT_TRUE(related(stage1, "m(a,a)", "m(a,b)"));
  EXPECT_FALSE(related(stage1, "m(b,b)", "m(a,a)"));
  EXPECT_FALSE(related(stage1, "e", "m(a,a)"));
  VObject stage0{InstanceKind::Preord, u.carrier(0), chain[0][0]};
  EXPECT_FALSE(related(stage0, "m(a,a)", "m(b,b)"));
}

TEST(Omega, ChainIsIncreasing) {
  for (const char* file : {"rel_unary.json", "monoid_preord.json", "presheaf.json"}) {
    auto l = support::load(file);
    std::vector<VObject> gens;
    for (const auto& s : l.sig->sorts) {
      (void)s;
      gens.push_back(make_vobject(l.sig->kind, Carrier({"g0", "g1"}), indiscrete_structure(l.sig->kind, 2)));
    }
    std::vector<Carrier> carriers;
    for (const auto& g : gens) carriers.push_back(g.carrier);
    TermUniverse u(l.sig, carriers, depth(2));
    auto chain = omega_chain(*l.sig, gens, u, 100);
    for (std::size_t n = 1; n < chain.size(); ++n)
      for (SortId s = 0; s < l.sig->sorts.size(); ++s)
        EXPECT_TRUE(fib_leq(l.sig->kind, chain[n - 1][s], chain[n][s])) << file << " stage " << n;
  }
}

TEST(Omega, RefusesPMet) {
  auto l = support::load("pmet.json");
  auto gens = support::generators(l, "gens_pmet.json");
  TermUniverse u(l.sig, {gens[0].carrier}, depth(1));
  try {
    omega_chain(*l.sig, gens, u, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
    EXPECT_NE(std::string(e.what()).find("not cartesian closed"), std::string::npos);
  }
  EXPECT_THROW(free_theory(l.theory, gens), Error);
}

TEST(FreeSigma, EmptySignatureIsTheGenerators) {
  auto sig = std::make_shared<EnrichedSignature>();
  sig->kind = InstanceKind::Simp;
  sig->add_sort("A");
  auto g = make_vobject(InstanceKind::Simp, Carrier({"a", "b", "c"}), Complex::generated(3, {{0, 1}}));
  auto f = free_sigma(sig, {g});
  EXPECT_TRUE(f.exact);
  EXPECT_EQ(f.algebra->carrier(0), g);
  EXPECT_EQ(f.unit[0], (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(is_admissible(unit(f, 0)));
}

TEST(FreeSigma, SetMonoidDepthTwo) {
  auto l = support::load("monoid.json");
  auto f = free_sigma(l.sig, {discrete_object(InstanceKind::Set, Carrier({"x"}))}, depth(2));
  EXPECT_EQ(f.algebra->carrier(0).size(), 11u);
  EXPECT_FALSE(f.exact);
  EXPECT_TRUE(f.algebra->partial());
  EXPECT_TRUE(validate_algebra(*f.algebra).valid());
}

TEST(FreeTheory, StratifiedCollapsesToOneClass) {
  auto l = support::load("stratified.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_a.json"));
  EXPECT_TRUE(f.exact);
  ASSERT_EQ(f.algebra->carrier(1).size(), 1u);
  EXPECT_EQ(f.algebra->carrier(1).carrier.name(0), "f(a)");
}

TEST(FreeTheory, TruncatedMonoidIsFlagged) {
  auto l = support::load("monoid.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_x.json"), depth(2));
  EXPECT_FALSE(f.exact);
  EXPECT_FALSE(f.warnings.empty());
  EXPECT_EQ(f.unit[0], std::vector<std::size_t>{f.algebra->carrier(0).carrier.find("x").value()});
}

TEST(FreeTheory, PreordMonoidOrderSurvivesTheQuotient) {
  auto l = support::load("monoid_preord.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_chain.json"), depth(2));
  const auto& carrier = f.algebra->carrier(0);
  EXPECT_TRUE(related(carrier, "m(a,a)", "m(b,b)"));
  EXPECT_TRUE(related(carrier, "a", "b"));
  EXPECT_FALSE(related(carrier, "b", "a"));
  EXPECT_TRUE(is_admissible(unit(f, 0)));
  EXPECT_TRUE(validate_algebra(*f.algebra).valid());
}

TEST(FreeTheory, UnitCanIdentifyGenerators) {
  Theory t;
  t.signature.kind = InstanceKind::Rel;
  auto a = t.signature.add_sort("A");
  t.signature.add_op("k", {}, a);
  t.equations.push_back({{{"x", a}}, a, parse_term("x"), parse_term("k")});
  auto f = free_theory(std::make_shared<const Theory>(t),
                       {make_vobject(InstanceKind::Rel, Carrier({"u", "v"}), Relation::full(2))});
  EXPECT_TRUE(f.exact);
  EXPECT_EQ(f.algebra->carrier(0).size(), 1u);
  EXPECT_EQ(f.unit[0][0], f.unit[0][1]);
  EXPECT_TRUE(is_admissible(unit(f, 0)));
}

TEST(Extend, IntoXor) {
  auto l = support::load("monoid.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_x.json"), depth(2));
  auto target = support::algebra(l, "alg_xor.json");
  auto h = extend(f, target, {{1}});
  const auto& names = f.algebra->carrier(0).carrier;
  EXPECT_EQ(h.tables[0][index_of(names, "m(x,x)")], 0u);
  EXPECT_EQ(h.tables[0][index_of(names, "x")], 1u);
  EXPECT_EQ(h.tables[0][index_of(names, "e")], 0u);
}

TEST(Extend, AlongTheUnitIsTheIdentity) {
  auto l = support::load("stratified.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_a_chain.json"));
  ASSERT_TRUE(f.exact);
  auto h = extend(f, f.algebra, f.unit);
  for (SortId s = 0; s < h.tables.size(); ++s)
    for (std::size_t x = 0; x < h.tables[s].size(); ++x) EXPECT_EQ(h.tables[s][x], x);
}

TEST(Extend, PreordAndChain) {
  auto l = support::load("monoid_preord.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_chain.json"), depth(2));
  auto target = support::algebra(l, "alg_and_chain.json");
  auto h = extend(f, target, {{0, 1}});
  EXPECT_TRUE(is_homomorphism(h).ok);
  // a <= b must land on 0 <= 1, not the other way round.
  EXPECT_THROW(extend(f, target, {{1, 0}}), Error);
}

TEST(Extend, RefusesNonModels) {
  auto l = support::load("monoid.json");
  auto f = free_theory(l.theory, support::generators(l, "gens_x.json"), depth(2));
  Algebra zero(l.sig, {discrete_object(InstanceKind::Set, Carrier({"0", "1"}))});
  zero.set(0, 0, {}, 0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) zero.set(1, 0, std::vector<std::size_t>{x, y}, 0);
  try {
    extend(f, std::make_shared<const Algebra>(zero), {{1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("x=1"), std::string::npos) << e.what();
  }
}

TEST(Truncation, DeeperUniversesOnlyAdd) {
  auto l = support::load("rel_unary.json");
  auto gens = support::generators(l, "gens_star.json");
  for (unsigned d = 1; d < 4; ++d) {
    auto small = free_sigma(l.sig, gens, depth(d));
    auto big = free_sigma(l.sig, gens, depth(d + 1));
    const auto& sc = small.algebra->carrier(0);
    const auto& bc = big.algebra->carrier(0);
    for (std::size_t x = 0; x < sc.size(); ++x)
      for (std::size_t y = 0; y < sc.size(); ++y)
        if (std::get<Relation>(sc.structure).test(x, y))
          EXPECT_TRUE(related(bc, sc.carrier.name(x), sc.carrier.name(y)));
  }
  auto m = support::load("monoid.json");
  auto mg = support::generators(m, "gens_x.json");
  for (unsigned d = 1; d < 3; ++d) {
    auto small = free_theory(m.theory, mg, depth(d));
    auto big = free_theory(m.theory, mg, depth(d + 1));
    const auto& su = small.term_algebra->carrier(0).carrier;
    const auto& bu = big.term_algebra->carrier(0).carrier;
    for (std::size_t x = 0; x < su.size(); ++x)
      for (std::size_t y = 0; y < su.size(); ++y)
        if (small.congruence.related(0, x, y))
          EXPECT_TRUE(big.congruence.related(0, index_of(bu, su.name(x)), index_of(bu, su.name(y))));
  }
}

TEST(Compatibility, FreeResultIsCompatible) {
  auto l = support::load("rel_unary_stratified.json");
  auto gens = support::generators(l, "gens_star_x.json");
  auto f = free_sigma(l.sig, gens);
  ASSERT_TRUE(f.exact);
  SortedStructure b;
  for (SortId s = 0; s < 2; ++s) b.push_back(f.algebra->carrier(s).structure);
  EXPECT_TRUE(is_sigma_compatible(b, *l.sig, gens, *f.universe).compatible);
}
