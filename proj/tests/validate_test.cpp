#include <gtest/gtest.h>

#include "dbmorph/logic/parser.hpp"
#include "dbmorph/logic/validate.hpp"
#include "support.hpp"

using namespace dbmorph;
using namespace testing_support;

namespace {

Schema keyed_schema() {
  Schema s("A");
  s.add_symbol({"Emp", {"id", "dept"}});
  s.add_symbol({"Dept", {"id"}});
  s.set_constraints(parse_constraints(
      "forall i, d1, d2 . Emp(i, d1) & Emp(i, d2) -> d1 = d2 && forall i, d . Emp(i, d) -> Dept(d)", s));
  return s;
}

}  // namespace

TEST(Validate, ContactsFixtureIsValid) {
  Project p = load_fixture("contacts");
  EXPECT_TRUE(validate_instance(p.instance("A")).valid());
}

TEST(Validate, KeyViolationHasWitness) {
  Instance inst(keyed_schema());
  inst.insert("Dept", {"d1"});
  inst.insert("Dept", {"d2"});
  inst.insert("Emp", {1, "d1"});
  inst.insert("Emp", {1, "d2"});
  ValidationReport r = validate_instance(inst);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].constraint, 0u);
  EXPECT_EQ(r.violations[0].witness.at("i"), Value(1));
}

TEST(Validate, InclusionViolation) {
  Instance inst(keyed_schema());
  inst.insert("Emp", {1, "d9"});
  ValidationReport r = validate_instance(inst);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].constraint, 1u);
  EXPECT_EQ(r.violations[0].witness.at("d"), Value("d9"));
}

TEST(Validate, ExistentialWitnessSearch) {
  Schema s("A");
  s.add_symbol({"P", {"a"}});
  s.add_symbol({"Q", {"a", "b"}});
  s.set_constraints(parse_constraints("forall x . P(x) -> exists y . Q(x, y) & P(y)", s));
  Instance ok(s);
  ok.insert("P", {1});
  ok.insert("Q", {1, 1});
  EXPECT_TRUE(validate_instance(ok).valid());
  Instance bad(s);
  bad.insert("P", {1});
  bad.insert("Q", {1, 2});
  EXPECT_FALSE(validate_instance(bad).valid());
}

// Property: a key constraint holds exactly when no two rows share a key.
TEST(Validate, KeyMatchesDirectCheck) {
  Schema s("A");
  s.add_symbol({"R", {"k", "v"}});
  s.set_constraints(parse_constraints("forall k, v1, v2 . R(k, v1) & R(k, v2) -> v1 = v2", s));
  const std::vector<Value> values = {1, 2, 3};
  for_seeds(7000, 100, [&](std::uint64_t, Rng& rng) {
    Instance inst = random_instance(rng, s, values, 5);
    std::map<Value, std::set<Value>> by_key;
    for (const auto& r : inst.relation("R").rows()) by_key[r[0]].insert(r[1]);
    bool key = true;
    for (const auto& [k, vs] : by_key) key = key && vs.size() == 1;
    EXPECT_EQ(validate_instance(inst).valid(), key);
  });
}
