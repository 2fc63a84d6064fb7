#include <gtest/gtest.h>

#include "dbmorph/errors.hpp"
#include "dbmorph/spjru.hpp"
#include "support.hpp"

using namespace dbmorph;
using namespace testing_support;

namespace {

const std::vector<Table> kGens = {Table{2, {{1, "a"}, {2, "b"}, {3, "a"}}}, Table{1, {{"a"}, {"c"}}}};

}  // namespace

TEST(Spjru, Operators) {
  auto g1 = generator_expr(0), g2 = generator_expr(1);
  EXPECT_EQ(evaluate(*g1, kGens), kGens[0]);
  EXPECT_EQ(evaluate(*select_const(g1, 2, "a"), kGens), (Table{2, {{1, "a"}, {3, "a"}}}));
  EXPECT_EQ(evaluate(*project_expr(g1, {2}), kGens), (Table{1, {{"a"}, {"b"}}}));
  EXPECT_EQ(evaluate(*swap_expr(g1, 1, 2), kGens), (Table{2, {{"a", 1}, {"b", 2}, {"a", 3}}}));
  EXPECT_EQ(evaluate(*union_expr(project_expr(g1, {2}), g2), kGens), (Table{1, {{"a"}, {"b"}, {"c"}}}));
  Table joined = evaluate(*select_cols(product_expr(g1, g2), 2, 3), kGens);
  EXPECT_EQ(joined, (Table{3, {{1, "a", "a"}, {3, "a", "a"}}}));
  EXPECT_EQ(evaluate(*product_expr(g2, g2), kGens).rows.size(), 4u);
}

TEST(Spjru, ErrorsOnBadTerms) {
  EXPECT_THROW(evaluate(*generator_expr(2), kGens), IndexError);
  EXPECT_THROW(evaluate(*select_const(generator_expr(1), 2, "a"), kGens), IndexError);
  EXPECT_THROW(evaluate(*union_expr(generator_expr(0), generator_expr(1)), kGens), SchemaError);
}

TEST(Spjru, RenderAndDepth) {
  auto e = union_expr(project_expr(select_const(generator_expr(0), 2, "a"), {1}), generator_expr(1));
  EXPECT_EQ(depth(*e), 3u);
  EXPECT_EQ(depth(*generator_expr(0)), 0u);
  EXPECT_EQ(render(*e), "(project[1](select[2=\"a\"](G1)) u G2)");
}

TEST(Spjru, ClosureContainsGeneratorsAndRespectsBounds) {
  ClosureBounds b{2, 3, 100000};
  Closure c = enumerate_closure(kGens, b);
  ASSERT_NE(c.find(kGens[0]), nullptr);
  EXPECT_EQ(c.find(kGens[0])->depth, 0u);
  std::set<Value> adom = {1, 2, 3, "a", "b", "c"};
  for (const auto& e : c.entries) {
    EXPECT_LE(e.table.arity, 3u);
    EXPECT_LE(e.depth, 2u);
    EXPECT_EQ(evaluate(*e.expr, kGens), e.table);
    EXPECT_LE(depth(*e.expr), e.depth);
    for (const auto& v : active_domain(e.table)) EXPECT_TRUE(adom.contains(v));
  }
  EXPECT_FALSE(c.capped);
}

TEST(Spjru, CapIsReported) {
  ClosureBounds b{3, 6, 50};
  Closure c = enumerate_closure(kGens, b);
  EXPECT_TRUE(c.capped);
}

TEST(Spjru, ClosureSerialAndParallelAgree) {
  for_seeds(4000, 20, [](std::uint64_t, Rng& rng) {
    const std::vector<Value> values = {1, 2, 3};
    std::vector<Table> gens = {random_table(rng, rng.between(1, 2), values, 3),
                               random_table(rng, rng.between(1, 2), values, 3)};
    ClosureBounds b{2, 4, 20000};
    Closure s = enumerate_closure(gens, b, Execution::Serial);
    Closure p = enumerate_closure(gens, b, Execution::Parallel);
    ASSERT_EQ(s.entries.size(), p.entries.size());
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      EXPECT_EQ(s.entries[i].table, p.entries[i].table);
      EXPECT_EQ(render(*s.entries[i].expr), render(*p.entries[i].expr));
    }
    EXPECT_EQ(s.capped, p.capped);
  });
}

// Property: the constructive derivation evaluates to its goal whenever all
// goal values occur in some generator.
TEST(Spjru, ConstructedDerivationsEvaluateToGoal) {
  for_seeds(4100, 200, [](std::uint64_t, Rng& rng) {
    const std::vector<Value> values = {1, 2, "x"};
    std::vector<Table> gens;
    const std::size_t k = rng.between(1, 3);
    for (std::size_t i = 0; i < k; ++i) gens.push_back(random_table(rng, rng.between(1, 3), values, 3));
    std::set<Value> adom;
    for (const auto& g : gens)
      for (const auto& v : active_domain(g)) adom.insert(v);
    std::vector<Value> usable(adom.begin(), adom.end());
    if (usable.empty()) {
      EXPECT_FALSE(construct_derivation(Table{1, {{1}}}, gens).has_value());
      return;
    }
    Table goal = random_table(rng, rng.between(1, 3), usable, 4);
    auto d = construct_derivation(goal, gens);
    if (goal.rows.empty() && usable.size() < 2) return;  // no contradictory selection available
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(evaluate(**d, gens), goal);
    Table outside{1, {{"never"}}};
    EXPECT_FALSE(construct_derivation(outside, gens).has_value());
  });
}
