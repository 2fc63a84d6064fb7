#include <gtest/gtest.h>

#include "dbmorph/errors.hpp"
#include "dbmorph/io.hpp"
#include "dbmorph/saturation.hpp"
#include "support.hpp"

using namespace dbmorph;
using namespace testing_support;

namespace {

struct Contacts {
  Project project = load_fixture("contacts");
  OperadArrow arrow = compile_mapping(project, "M_AB");
  ProjectInterpretation it{project, arrow, project.mapping("M_AB"),
                           skolem_from_json(Json::parse(read_text(project.base_dir / "interp.json")))};
};

const Tuple kD1 = {132, "Zoran", "Majkic", "Appia", "0187"};

}  // namespace

TEST(Saturation, ContactsGetsThreeExtras) {
  Contacts c;
  SaturatedMorphism sat = saturate(c.it.get(), c.arrow);
  ASSERT_EQ(sat.extras.size(), 3u);
  EXPECT_TRUE(sat.skipped.empty());
  std::set<Tuple> bs;
  for (const auto& e : sat.extras) {
    EXPECT_EQ(e.trigger, Args{kD1});
    bs.insert(e.b);
    EXPECT_EQ(e.component(sat.base)({kD1}), e.b);
    ASSERT_EQ(e.delta.size(), 1u);
    EXPECT_EQ(e.delta.begin()->first, (std::pair<std::string, Tuple>{"f1", {132}}));
  }
  EXPECT_EQ(bs, (std::set<Tuple>{{132, "photography"}, {132, "music"}, {132, "travel"}}));
  EXPECT_EQ(sat.components().size(), 4u);
}

TEST(Saturation, ContactsPFunction) {
  Contacts c;
  PFunction f = derive_pfunction(saturate(c.it.get(), c.arrow), 0);
  ASSERT_EQ(f.graph.size(), 1u);
  const auto& values = f.graph.at({kD1});
  EXPECT_EQ(values, (std::set<Tuple>{{132, "art"}, {132, "photography"}, {132, "music"}, {132, "travel"}}));
  std::set<Value> hobbies;
  for (const auto& t : values) hobbies.insert(t[1]);
  EXPECT_EQ(hobbies, (std::set<Value>{"photography", "art", "music", "travel"}));
  EXPECT_EQ(f.codomain, "Hobbies");
}

TEST(Saturation, ContactsExtensionRelation) {
  Contacts c;
  Relation r = extension_relation(c.it.get(), c.arrow.operations[0], {132, "art"});
  EXPECT_EQ(r.rows(), (std::set<Tuple>{{132, "photography"}, {132, "music"}, {132, "travel"}}));
}

TEST(Saturation, ContactsFluxInvariance) {
  Contacts c;
  FluxInvarianceReport r = check_flux_invariance(c.it.get(), c.arrow);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.failures.empty());
}

TEST(Saturation, RequiresSatisfaction) {
  Project p = load_fixture("contacts");
  OperadArrow arrow = compile_mapping(p, "M_AB_missing");
  ProjectInterpretation it(p, arrow, p.mapping("M_AB_missing"),
                           skolem_from_json(Json::parse(read_text(p.base_dir / "interp.json"))));
  EXPECT_THROW(saturate(it.get(), arrow), PreconditionError);
}

TEST(Saturation, OppositeMappingHasNoExtras) {
  Project p = load_fixture("vector");
  OperadArrow arrow = compile_mapping(p, "M_OP");
  ProjectInterpretation it(p, arrow, p.mapping("M_OP"), {});
  SaturatedMorphism sat = saturate(it.get(), arrow);
  EXPECT_TRUE(sat.extras.empty());
  EXPECT_TRUE(sat.skipped.empty());
  EXPECT_TRUE(check_flux_invariance(sat, arrow).holds);
}

TEST(Saturation, UnsaturatedOperationGivesSingletons) {
  Project p = load_fixture("employees");
  OperadArrow arrow = compile_mapping(p, "M_AB");
  ProjectInterpretation it(p, arrow, p.mapping("M_AB"), {});
  SaturatedMorphism sat = saturate(it.get(), arrow);
  EXPECT_TRUE(sat.extras.empty());
  PFunction f = derive_pfunction(sat, 0);
  EXPECT_EQ(f.graph.size(), 2u);
  for (const auto& [args, values] : f.graph) EXPECT_EQ(values, (std::set<Tuple>{args[0]}));
}

// Properties over random satisfying fixtures: the extras are exactly the
// extension candidates, each differs from its base at one point, and the
// p-functions equal the positional selection of the target relation.
TEST(Saturation, RandomFixtureProperties) {
  for_seeds(6000, 250, [](std::uint64_t, Rng& rng) {
    RandomFixture f = random_fixture(rng);
    TarskiInterpretation it(f.src, f.tgt, f.tables, f.domain);
    SaturatedMorphism sat = saturate(it, f.arrow);
    const auto& target_rows = f.tgt.relation("B").rows();

    std::size_t candidates = 0;
    for (std::size_t i = 0; i < f.arrow.operations.size(); ++i) {
      const OperadOperation& op = f.arrow.operations[i];
      PFunction pf = derive_pfunction(sat, i, PFunctionScope::Operation);
      std::set<Tuple> skipped_here;
      for (const auto& [args, out] : *sat.base.components[i].graph) {
        if (out.empty()) continue;
        std::set<Tuple> expected = {out};
        if (op.has_skolem_head()) {
          auto sel = positional_selection(target_rows, op.simple_positions, out);
          candidates += sel.size() - 1;
          for (const auto& s : sat.skipped)
            if (s.operation == i && s.trigger == args) sel.erase(s.b);
          expected = sel;
        }
        EXPECT_EQ(pf.graph.at(args), expected) << f.text;
      }
    }
    EXPECT_EQ(sat.extras.size() + sat.skipped.size(), candidates) << f.text;

    for (const auto& e : sat.extras) {
      ComponentFunction fb = e.component(sat.base);
      const ComponentFunction& base = sat.base.components[e.operation];
      for (const auto& [args, out] : *base.graph) {
        if (args == e.trigger) {
          EXPECT_EQ(fb(args), e.b);
          EXPECT_NE(out, e.b);
        } else {
          EXPECT_EQ(fb(args), out);
        }
      }
    }
    EXPECT_TRUE(check_flux_invariance(sat, f.arrow).holds) << f.text;
  });
}

// The signature-wide function is the union of the per-operation ones over
// operations with the same domain and codomain.
TEST(Saturation, SignatureScopeUnitesOperations) {
  for_seeds(6300, 150, [](std::uint64_t, Rng& rng) {
    RandomFixture f = random_fixture(rng);
    TarskiInterpretation it(f.src, f.tgt, f.tables, f.domain);
    SaturatedMorphism sat = saturate(it, f.arrow);
    for (std::size_t i = 0; i < f.arrow.operations.size(); ++i) {
      const ComponentFunction& base = sat.base.components[i];
      std::map<Args, std::set<Tuple>> expected;
      for (std::size_t j = 0; j < f.arrow.operations.size(); ++j) {
        const ComponentFunction& other = sat.base.components[j];
        if (other.domain != base.domain || other.codomain != base.codomain) continue;
        for (const auto& [args, values] : derive_pfunction(sat, j, PFunctionScope::Operation).graph)
          expected[args].insert(values.begin(), values.end());
      }
      EXPECT_EQ(derive_pfunction(sat, i).graph, expected) << f.text;
    }
  });
}

// Each column operation of the opposite mapping shares its signature with the
// others of the same relation, so the union at a row is that row's PARSE.
TEST(Saturation, OppositeMappingUnionIsParse) {
  Project p = load_fixture("vector");
  OperadArrow arrow = compile_mapping(p, "M_OP");
  ProjectInterpretation it(p, arrow, p.mapping("M_OP"), {});
  SaturatedMorphism sat = saturate(it.get(), arrow);
  const Tuple row = {132, "Zoran", "Majkic", "Appia", "00187"};
  for (std::size_t i = 0; i < arrow.operations.size(); ++i) {
    if (arrow.operations[i].places[0].relation != "Contacts") continue;
    PFunction f = derive_pfunction(sat, i);
    ASSERT_EQ(f.graph.size(), 1u);
    EXPECT_EQ(f.graph.at({row}).size(), 5u);
    EXPECT_EQ(derive_pfunction(sat, i, PFunctionScope::Operation).graph.at({row}).size(), 1u);
  }
}

TEST(Saturation, SerialAndParallelAgree) {
  for_seeds(6500, 60, [](std::uint64_t, Rng& rng) {
    RandomFixture f = random_fixture(rng);
    TarskiInterpretation it(f.src, f.tgt, f.tables, f.domain);
    SaturatedMorphism a = saturate(it, f.arrow, Execution::Serial);
    SaturatedMorphism b = saturate(it, f.arrow, Execution::Parallel);
    EXPECT_EQ(canonical_dump(saturated_to_json(a, f.arrow)), canonical_dump(saturated_to_json(b, f.arrow)));
  });
}
