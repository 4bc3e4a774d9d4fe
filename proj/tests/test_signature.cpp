#include <gtest/gtest.h>

#include "enralg/error.hpp"
#include "enralg/io.hpp"
#include "enralg/signature.hpp"
#include "enralg/syntax.hpp"
#include "support.hpp"

using namespace enralg;

namespace {

VObject points(InstanceKind kind, std::vector<std::string> names) {
  return discrete_object(kind, Carrier(std::move(names)));
}

EnrichedSignature unary_pq() {
  EnrichedSignature sig;
  sig.kind = InstanceKind::Preord;
  auto a = sig.add_sort("A");
  sig.add_op("s", {a}, a, points(InstanceKind::Preord, {"p", "q"}), "P");
  return sig;
}

std::size_t count_errors(const ValidationReport& r) { return r.errors(); }

}  // namespace

TEST(Classical, OneSymbolPerPoint) {
  auto sig = unary_pq();
  auto symbols = underlying_classical(sig);
  ASSERT_EQ(symbols.size(), 2u);
  EXPECT_EQ(symbols[0].name, "s[p]");
  EXPECT_EQ(symbols[1].name, "s[q]");
  EXPECT_EQ(symbols[0].inputs, std::vector<SortId>{0});
}

TEST(Classical, OrdinaryAndNullary) {
  EnrichedSignature sig;
  sig.kind = InstanceKind::Rel;
  auto a = sig.add_sort("A");
  sig.add_op("m", {a, a}, a);
  sig.add_op("c", {}, a, points(InstanceKind::Rel, {"0", "1", "2"}), "");
  auto symbols = underlying_classical(sig);
  ASSERT_EQ(symbols.size(), 4u);
  EXPECT_EQ(symbols[0].name, "m");
  EXPECT_EQ(symbols[1].name, "c[0]");
  EXPECT_EQ(symbols[3].name, "c[2]");
  std::size_t total = 0;
  for (const auto& op : sig.ops) total += op.points();
  EXPECT_EQ(symbols.size(), total);
}

TEST(Classical, SymbolsResolveBack) {
  auto sig = unary_pq();
  Context ctx{{"v", 0}};
  for (const auto& s : underlying_classical(sig)) {
    auto t = resolve_term(sig, ctx, parse_term(s.name + "(v)"));
    EXPECT_EQ(t.op, s.op);
    EXPECT_EQ(t.point, s.point);
  }
}

TEST(Validate, MonoidFixtureClean) {
  auto parsed = read_theory_file(support::fixture("monoid.json"));
  EXPECT_TRUE(parsed.report.valid());
  EXPECT_TRUE(parsed.report.issues.empty());
  EXPECT_EQ(parsed.theory.signature.sorts.size(), 1u);
  EXPECT_EQ(parsed.theory.signature.ops.size(), 2u);
  EXPECT_EQ(parsed.theory.equations.size(), 3u);
}

TEST(Validate, VariableOutOfScope) {
  Theory t;
  t.signature = unary_pq();
  t.equations.push_back({{{"x", 0}}, 0, parse_term("s[p](y)"), parse_term("x")});
  auto report = validate_theory(t);
  EXPECT_EQ(count_errors(report), 1u);
  EXPECT_EQ(report.issues[0].path, "equations[0].lhs");
}

TEST(Validate, UnknownPoint) {
  Theory t;
  t.signature = unary_pq();
  t.equations.push_back({{{"x", 0}}, 0, parse_term("s[r](x)"), parse_term("x")});
  EXPECT_EQ(count_errors(validate_theory(t)), 1u);
}

TEST(Validate, MissingPointNeedsBracket) {
  Theory t;
  t.signature = unary_pq();
  t.equations.push_back({{{"x", 0}}, 0, parse_term("s(x)"), parse_term("x")});
  EXPECT_EQ(count_errors(validate_theory(t)), 1u);
}

TEST(Validate, IllSortedArgument) {
  Theory t;
  t.signature.kind = InstanceKind::Set;
  auto a = t.signature.add_sort("A");
  auto b = t.signature.add_sort("B");
  t.signature.add_op("f", {a}, b);
  t.equations.push_back({{{"y", b}}, b, parse_term("f(y)"), parse_term("y")});
  EXPECT_EQ(count_errors(validate_theory(t)), 1u);
}

TEST(Validate, SignatureProblems) {
  EnrichedSignature sig;
  sig.kind = InstanceKind::Preord;
  sig.sorts = {"A", "A"};
  sig.ops.push_back({"f", {0, 7}, 0, terminal_object(InstanceKind::Rel), ""});
  sig.ops.push_back({"f", {}, 0, points(InstanceKind::Preord, {}), "E"});
  auto report = validate_signature(sig);
  // duplicate sort, undeclared input, kind mismatch, duplicate op
  EXPECT_EQ(report.errors(), 4u);
  EXPECT_EQ(report.warnings(), 1u);
  EXPECT_NE(report.to_string().find("ops[0].inputs[1]"), std::string::npos);
}

TEST(Validate, EmptyParameterIsOnlyAWarning) {
  auto parsed = read_theory_file(support::fixture("presheaf.json"));
  EXPECT_TRUE(parsed.report.valid());
  EXPECT_EQ(parsed.report.warnings(), 1u);
}

TEST(Syntax, ParsesApplicationsAndPoints) {
  auto t = parse_term(" s[p]( m(x, e) ) ");
  EXPECT_EQ(t.head, "s");
  ASSERT_TRUE(t.point);
  EXPECT_EQ(*t.point, "p");
  ASSERT_EQ(t.args.size(), 1u);
  EXPECT_EQ(t.args[0].head, "m");
  EXPECT_EQ(t.args[0].args.size(), 2u);
  EXPECT_FALSE(t.args[0].args[1].applied);
  EXPECT_EQ(to_string(t), "s[p](m(x,e))");
  EXPECT_TRUE(parse_term("k()").applied);
}

TEST(Syntax, ErrorsCarryColumns) {
  try {
    parse_term("m(x,");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_term("f[p(x)"), Error);
  EXPECT_THROW(parse_term(""), Error);
  EXPECT_THROW(parse_term("m(x) y"), Error);
}

TEST(TheoryFile, UnknownInstanceTag) {
  try {
    parse_theory(parse_json(R"({"instance": "Top", "sorts": [], "ops": []})", "t"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("'Top'"), std::string::npos);
  }
}

TEST(TheoryFile, MalformedJsonHasLineAndColumn) {
  try {
    parse_json("{\n  \"instance\": \"Set\",\n  \"sorts\": [,]\n}", "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("bad.json:3:13"), std::string::npos) << e.what();
  }
}

TEST(TheoryFile, UnknownNamesReportedWithPaths) {
  auto j = parse_json(R"J({
    "instance": "Rel", "sorts": ["A"],
    "ops": [{"name": "f", "inputs": ["B"], "output": "A", "parameter": "nope"}],
    "equations": [{"context": [["x", "A"]], "sort": "A", "lhs": "f(x)", "rhs": "g(x)"}]
  })J", "t");
  auto parsed = parse_theory(j);
  EXPECT_FALSE(parsed.report.valid());
  auto text = parsed.report.to_string();
  EXPECT_NE(text.find("$.ops[0].inputs[0]"), std::string::npos) << text;
  EXPECT_NE(text.find("$.ops[0].parameter"), std::string::npos) << text;
}

TEST(TheoryFile, EquationErrorsAfterCleanSignature) {
  auto j = parse_json(R"J({
    "instance": "Set", "sorts": ["A"],
    "ops": [{"name": "f", "inputs": ["A"], "output": "A"}],
    "equations": [{"context": [["x", "A"]], "sort": "A", "lhs": "f(x)", "rhs": "g(x)"}]
  })J", "t");
  auto parsed = parse_theory(j);
  ASSERT_EQ(parsed.report.errors(), 1u);
  EXPECT_EQ(parsed.report.issues[0].path, "$.equations[0].rhs");
}

TEST(TheoryFile, InlineParameterAndNamedObjects) {
  auto parsed = read_theory_file(support::fixture("rel_unary.json"));
  ASSERT_TRUE(parsed.report.valid());
  const auto& op = parsed.theory.signature.ops[0];
  EXPECT_EQ(op.parameter_name, "edge");
  EXPECT_EQ(op.points(), 2u);
  EXPECT_TRUE(std::get<Relation>(op.parameter.structure).test(0, 1));
  EXPECT_FALSE(std::get<Relation>(op.parameter.structure).test(0, 0));
}

TEST(TheoryFile, VObjectRoundTrip) {
  auto j = parse_json(R"({"elements": ["a", "b", "c"], "relation": [["a", "b"], ["b", "c"]]})", "v");
  auto v = parse_vobject(InstanceKind::Preord, j, "$");
  EXPECT_TRUE(std::get<Relation>(v.structure).test(0, 2));  // closed
  EXPECT_EQ(parse_vobject(InstanceKind::Preord, to_json(v), "$"), v);

  auto s = parse_vobject(InstanceKind::Simp,
                         parse_json(R"({"elements": ["a", "b", "c"], "simplices": [["a", "b", "c"]]})", "v"), "$");
  EXPECT_TRUE(std::get<Complex>(s.structure).contains({0, 2}));
  EXPECT_EQ(parse_vobject(InstanceKind::Simp, to_json(s), "$"), s);

  auto m = parse_vobject(InstanceKind::PMet, parse_json(R"({"elements": ["a", "b", "c"],
      "distances": [{"x": "a", "y": "b", "distance": "1/3"}, {"x": "b", "y": "c", "distance": 2}]})", "v"), "$");
  EXPECT_EQ(std::get<Metric>(m.structure).at(0, 1), Distance(Rational(1, 3)));
  EXPECT_EQ(std::get<Metric>(m.structure).at(0, 2), Distance(Rational(7, 3)));  // by the path
  EXPECT_EQ(parse_vobject(InstanceKind::PMet, to_json(m), "$"), m);
}

TEST(TheoryFile, VObjectSchemaErrors) {
  EXPECT_THROW(parse_vobject(InstanceKind::Rel, parse_json(R"({"elements": ["a"], "relation": [["a", "z"]]})", "v"), "$"), Error);
  EXPECT_THROW(parse_vobject(InstanceKind::Set, parse_json(R"({"elements": ["a"], "relation": []})", "v"), "$"), Error);
  EXPECT_THROW(parse_vobject(InstanceKind::PMet, parse_json(R"({"elements": ["a", "b"],
      "distances": [{"x": "a", "y": "b", "distance": 0.5}]})", "v"), "$"), Error);
  EXPECT_THROW(parse_vobject(InstanceKind::PMet, parse_json(R"({"elements": ["a", "b", "c"],
      "distances": [{"x": "a", "y": "b", "distance": 1}, {"x": "b", "y": "c", "distance": 1},
                    {"x": "a", "y": "c", "distance": 3}]})", "v"), "$"), Error);
  EXPECT_THROW(parse_vobject(InstanceKind::Rel, parse_json(R"({"elements": ["a", "a"]})", "v"), "$"), Error);
}
