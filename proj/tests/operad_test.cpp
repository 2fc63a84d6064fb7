#include <gtest/gtest.h>

#include "dbmorph/errors.hpp"
#include "dbmorph/logic/parser.hpp"
#include "dbmorph/logic/transform.hpp"
#include "dbmorph/operad.hpp"
#include "support.hpp"

using namespace dbmorph;
using namespace testing_support;

namespace {

std::vector<PlaceSymbol> places(std::vector<std::pair<std::string, std::vector<std::string>>> atoms) {
  std::vector<PlaceSymbol> out;
  for (auto& [rel, args] : atoms) out.push_back({rel, false, args});
  return out;
}

OperadArrow compile_text(const std::string& text, const Schema& a, const Schema& b) {
  MappingContext ctx{&a, &b, {}};
  auto impls = normalize(parse_mapping(text, ctx));
  return make_operads(impls, a, b);
}

}  // namespace

// Three joined atoms: the joined-variable set and the compaction.
TEST(Operad, JoinedExampleEqualVarSet) {
  Project p = load_fixture("joined");
  OperadArrow arrow = compile_mapping(p, "M");
  ASSERT_EQ(arrow.operations.size(), 1u);
  const OperadOperation& op = arrow.operations[0];
  EqualVarSet expected{{{{1, 1}, {2, 2}}, {{2, 1}, {1, 3}}, {{3, 1}, {2, 3}}, {{3, 2}, {4, 3}}}};
  EXPECT_EQ(op.equal, expected);
  EXPECT_EQ(op.variables, (std::vector<std::string>{"x", "y", "z", "v", "w", "w2"}));
  EXPECT_EQ(op.simple_positions, (std::vector<std::size_t>{1, 2, 3}));
  ASSERT_EQ(op.places.size(), 3u);
  EXPECT_EQ(op.places[2].relation, "r3");
  ASSERT_EQ(op.literals().size(), 1u);

  std::vector<Tuple> ds = {{"a1", "a2", "a3"}, {"b1", "b2", "b3"}, {"c1", "c2", "c3", "c4"}};
  EXPECT_EQ(cmp(op.equal, ds), (Tuple{"a1", "a2", "a3", "b1", "b3", "c3"}));
}

TEST(Operad, SingleContactsOperation) {
  Project p = load_fixture("contacts");
  OperadArrow arrow = compile_mapping(p, "M_AB");
  ASSERT_EQ(arrow.operations.size(), 1u);
  const OperadOperation& op = arrow.operations[0];
  EXPECT_EQ(render_expression(op), "(_)_1(x1, x2, x3, x4, x5) => (_)(x1, f1(x1))");
  EXPECT_EQ(op.simple_positions, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(op.equal.empty());
  EXPECT_EQ(op.query_symbol, "r_q1");
  EXPECT_TRUE(op.has_skolem_head());
}

TEST(Operad, ComposedMappingHasFourOperations) {
  Project p = load_fixture("employees");
  OperadArrow arrow = compile_mapping(p, "M_AC");
  ASSERT_EQ(arrow.operations.size(), 4u);
  const OperadOperation& third = arrow.operations[2];
  ASSERT_EQ(third.places.size(), 1u);
  EXPECT_EQ(third.places[0].relation, "EmpAcme");
  const std::vector<Literal> lits = third.literals();
  ASSERT_EQ(lits.size(), 1u);
  const auto& c = std::get<Comparison>(lits[0].body);
  EXPECT_EQ(c.lhs.application().symbol, "f_Over65");
  EXPECT_EQ(c.lhs.application().kind, FunctionKind::Characteristic);
  EXPECT_FALSE(third.has_skolem_head());
  EXPECT_TRUE(arrow.operations[0].has_skolem_head());
}

TEST(Operad, TautologyGivesOnlyIdentity) {
  Schema a("A"), b("B");
  a.add_symbol({"R", {"x"}});
  OperadArrow arrow = compile_text("taut", a, b);
  EXPECT_TRUE(arrow.operations.empty());
}

TEST(Operad, SwappedJoin) {
  EqualVarSet s = build_equal_var_set(places({{"r1", {"x", "y"}}, {"r2", {"y", "x"}}}));
  EXPECT_EQ(s, (EqualVarSet{{{{1, 1}, {2, 2}}, {{2, 1}, {1, 2}}}}));
  EXPECT_TRUE(build_equal_var_set(places({{"r1", {"x"}}, {"r2", {"y"}}})).empty());
}

TEST(Operad, CompactionDropsLaterOccurrences) {
  EqualVarSet s{{{{1, 1}, {1, 2}}}};
  std::vector<Tuple> ts = {{1}, {1, 2}};
  EXPECT_EQ(cmp(s, ts), (Tuple{1, 2}));
  std::vector<Tuple> one = {{"a", "b"}};
  EXPECT_EQ(cmp(EqualVarSet{}, one), (Tuple{"a", "b"}));
}

TEST(Operad, RepeatWithinOneAtom) {
  EqualVarSet s = build_equal_var_set(places({{"r", {"x", "x", "y"}}}));
  EXPECT_EQ(s, (EqualVarSet{{{{1, 1}, {2, 1}}}}));
  std::vector<Tuple> ts = {{"a", "a", "b"}};
  EXPECT_EQ(cmp(s, ts), (Tuple{"a", "b"}));
}

TEST(Operad, SimplePositions) {
  std::vector<Term> head = {Term::var("x"), Term::apply("f", FunctionKind::Skolem, {Term::var("x")}),
                            Term::constant(3), Term::var("y")};
  EXPECT_EQ(simple_var_positions(head), (std::vector<std::size_t>{1, 4}));
}

TEST(Operad, CompileErrors) {
  Schema a("A"), b("B");
  a.add_symbol({"R", {"x"}});
  b.add_symbol({"S", {"x"}});
  Schema other("C");
  other.add_symbol({"S", {"x", "y"}});
  MappingContext ctx{&a, &b, {}};
  auto impls = normalize(parse_mapping("forall x . R(x) -> S(x)", ctx));
  EXPECT_THROW(make_operads(impls, a, other), SchemaError);
  Schema empty_target("E");
  EXPECT_THROW(make_operads(impls, a, empty_target), SchemaError);
}

// Property: compaction equals the first-occurrence scan, and has one value per variable.
TEST(Operad, CompactionMatchesOccurrenceScan) {
  const std::vector<std::string> pool = {"u", "v", "w", "x"};
  for_seeds(500, 300, [&](std::uint64_t, Rng& rng) {
    std::vector<std::vector<std::string>> args;
    std::vector<PlaceSymbol> ps;
    std::vector<Tuple> tuples;
    const std::size_t k = rng.between(1, 3);
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::string> a;
      Tuple t;
      const std::size_t n = rng.between(1, 4);
      for (std::size_t i = 0; i < n; ++i) {
        a.push_back(rng.pick(pool));
        t.push_back(Value("v" + std::to_string(j) + "_" + std::to_string(i)));
      }
      ps.push_back({"r" + std::to_string(j), false, a});
      args.push_back(a);
      tuples.push_back(t);
    }
    EqualVarSet s = build_equal_var_set(ps);
    Tuple got = cmp(s, tuples);
    EXPECT_EQ(got, first_occurrence_scan(args, tuples));
    std::set<std::string> distinct;
    for (const auto& a : args) distinct.insert(a.begin(), a.end());
    EXPECT_EQ(got.size(), distinct.size());
    for (const auto& member : s.members) EXPECT_GE(member.size(), 2u);
  });
}

// Property: putting the relations back into the places gives the body again.
TEST(Operad, SubstitutionRestoresBody) {
  for_seeds(900, 200, [](std::uint64_t, Rng& rng) {
    RandomFixture f = random_fixture(rng);
    ASSERT_EQ(f.arrow.operations.size(), f.impls.size());
    for (std::size_t i = 0; i < f.impls.size(); ++i) {
      const OperadOperation& op = f.arrow.operations[i];
      EXPECT_EQ(substituted(op), f.impls[i].lhs);
      for (const auto& v : op.head) {
        if (v.is_variable()) {
          EXPECT_NE(std::find(op.variables.begin(), op.variables.end(), v.variable()), op.variables.end());
        }
      }
    }
  });
}
