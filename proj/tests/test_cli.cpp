#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "enralg/cli.hpp"
#include "enralg/io.hpp"
#include "support.hpp"

using namespace enralg;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "enralg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return support::fixture(name); }

std::string scratch(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "enralg_test_cli";
  std::filesystem::create_directories(dir);
  auto path = (dir / name).string();
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, Usage) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"free", "--theory", fx("monoid.json")}).code, 2);
  EXPECT_EQ(run({"info", "--theory", "/no/such/file.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Info) {
  auto r = run({"info", "--theory", fx("monoid.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("valid: Set, 1 sorts, 2 ops, 3 equations", 0), 0u) << r.out;
  auto bad = run({"info", "--theory", scratch("bad_eq.json", R"J({"instance": "Set", "sorts": ["A"],
      "ops": [{"name": "f", "inputs": ["A"], "output": "A"}],
      "equations": [{"context": [["x", "A"]], "sort": "A", "lhs": "f(x)", "rhs": "g(x)"}]})J")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("$.equations[0].rhs"), std::string::npos) << bad.out;
}

TEST(Cli, ParseErrorsHaveLocations) {
  auto path = scratch("broken.json", "{\n  \"instance\": \"Set\",\n  \"sorts\": [,]\n}");
  auto r = run({"info", "--theory", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("broken.json:3:13"), std::string::npos) << r.err;

  auto tag = run({"info", "--theory", scratch("tag.json", R"({"instance": "Top", "sorts": [], "ops": []})")});
  EXPECT_EQ(tag.code, 2);
  EXPECT_NE(tag.err.find("Top"), std::string::npos) << tag.err;
}

TEST(Cli, PartialTableListsMissingTuples) {
  auto path = scratch("partial.json", R"({"carriers": {"M": {"elements": ["0", "1"]}},
      "ops": {"e": [{"args": [], "value": "0"}],
              "m": [{"args": ["0", "0"], "value": "0"}, {"args": ["1", "1"], "value": "0"}]}})");
  auto r = run({"check-model", "--theory", fx("monoid.json"), "--algebra", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("(0,1)"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("(1,0)"), std::string::npos) << r.err;
}

TEST(Cli, CheckModel) {
  auto ok = run({"check-model", "--theory", fx("monoid.json"), "--algebra", fx("alg_z4.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("\nmodel\n"), std::string::npos) << ok.out;
  auto bad = run({"check-model", "--theory", fx("negation.json"), "--algebra", fx("alg_neg_chain.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("not admissible"), std::string::npos) << bad.out;
  EXPECT_NE(bad.out.find("not a model"), std::string::npos);
}

TEST(Cli, CheckHom) {
  auto ok = run({"check-hom", "--theory", fx("monoid.json"), "--dom", fx("alg_z4.json"), "--cod",
                 fx("alg_xor.json"), "--hom", fx("hom_parity.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "homomorphism\n");
  auto path = scratch("hom_bad.json", R"({"tables": {"M": {"0": "0", "1": "1", "2": "1", "3": "0"}}})");
  auto bad = run({"check-hom", "--theory", fx("monoid.json"), "--dom", fx("alg_z4.json"), "--cod",
                  fx("alg_xor.json"), "--hom", path});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("not a homomorphism: ", 0), 0u) << bad.out;
}

TEST(Cli, Quotient) {
  auto r = run({"quotient", "--theory", fx("monoid.json"), "--algebra", fx("alg_z4.json"), "--equations",
                fx("eq_square_unit.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = parse_json(r.out, "out");
  ASSERT_TRUE(j.contains("classes"));
  ASSERT_TRUE(j.contains("algebra"));
  EXPECT_EQ(j["classes"]["M"].size(), 2u);
}

TEST(Cli, Eval) {
  auto r = run({"eval", "--theory", fx("monoid.json"), "--algebra", fx("alg_z4.json"), "--term", "m(x, m(x, y))",
                "--env", "x=1", "--env", "y=3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\n");
  auto unbound = run({"eval", "--theory", fx("monoid.json"), "--algebra", fx("alg_z4.json"), "--term", "m(x, y)",
                      "--env", "x=1"});
  EXPECT_NE(unbound.code, 0);
  EXPECT_FALSE(unbound.err.empty());
}

TEST(Cli, FreeJsonMatchesLibrary) {
  auto r = run({"free", "--theory", fx("monoid_preord.json"), "--generators", fx("gens_chain.json"), "--depth", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = parse_json(r.out, "out");
  auto l = support::load("monoid_preord.json");
  GenerationPolicy p;
  p.max_depth = 2;
  auto f = free_theory(l.theory, support::generators(l, "gens_chain.json"), p);
  EXPECT_EQ(j, to_json(f));
  EXPECT_EQ(j["exact"], false);
  EXPECT_FALSE(r.err.empty());  // truncation warning
  auto carrier = parse_vobject(InstanceKind::Preord, j["sorts"]["M"]["carrier"], "$");
  EXPECT_EQ(carrier, f.algebra->carrier(0));
}

TEST(Cli, FreeTextAndFormats) {
  auto r = run({"free", "--theory", fx("stratified.json"), "--generators", fx("gens_a.json"), "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("f(a)"), std::string::npos) << r.out;
  EXPECT_EQ(run({"free", "--theory", fx("stratified.json"), "--generators", fx("gens_a.json"), "--format", "xml"}).code, 2);
}

TEST(Cli, FreePMetIsUnsupported) {
  auto r = run({"free", "--theory", fx("pmet.json"), "--generators", fx("gens_pmet.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("unsupported: ", 0), 0u) << r.err;
}

TEST(Cli, Oracle) {
  auto eq = run({"oracle", "--theory", fx("stratified.json"), "--generators", fx("gens_a_chain.json")});
  EXPECT_EQ(eq.code, 0) << eq.err;
  auto j = parse_json(eq.out, "out");
  EXPECT_EQ(j["verdict"], "equal");
  auto unsupported = run({"oracle", "--theory", fx("monoid.json"), "--generators", fx("gens_x.json")});
  EXPECT_EQ(unsupported.code, 2);
}

TEST(Cli, Deterministic) {
  std::vector<std::string> args{"free", "--theory", fx("presheaf.json"), "--generators",
                                scratch("gens_presheaf.json", R"({"generators": {"A": {"elements": ["a"]},
                                    "B": {"elements": ["b0", "b1"], "relation": [["b0", "b1"]]}}})")};
  auto first = run(args);
  auto second = run(args);
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.err, second.err);
}
