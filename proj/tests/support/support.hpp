#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/interpretation.hpp"
#include "dbmorph/logic/ast.hpp"
#include "dbmorph/operad.hpp"
#include "dbmorph/project.hpp"

namespace dbmorph {
// Readable gtest failure output.
inline void PrintTo(const Value& v, std::ostream* os) { *os << v.render(); }
inline void PrintTo(const Table& t, std::ostream* os) { *os << render(t); }
}  // namespace dbmorph

namespace testing_support {

using namespace dbmorph;

std::string fixture_path(const std::string& relative);
Project load_fixture(const std::string& name);

/// Seeded random source for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

/// Runs `body` for seeds base..base+count-1; the seed is part of every
/// failure message through SCOPED_TRACE in the caller's lambda.
void for_seeds(std::uint64_t base, std::size_t count, const std::function<void(std::uint64_t, Rng&)>& body);

// ---- independent oracles -------------------------------------------------

/// FNV-1a/64 written out longhand, for pinning the library's tuple hash.
std::string fnv_reference(const Tuple& values);

/// All head tuples of an implication, found by enumerating every assignment
/// of its universals over `domain` and checking the body literal by literal.
std::set<Tuple> naive_image(const NormalizedImplication& impl, const Instance& source, const Instance& target,
                            const SkolemTables& tables, const std::vector<Value>& domain);

/// Values of each variable at its first occurrence, scanning the places
/// left to right.
Tuple first_occurrence_scan(const std::vector<std::vector<std::string>>& place_args, const std::vector<Tuple>& tuples);

/// SELECT * FROM rows WHERE the simple-variable positions agree with `output`.
std::set<Tuple> positional_selection(const std::set<Tuple>& rows, const std::vector<std::size_t>& positions,
                                     const Tuple& output);

// ---- generators ----------------------------------------------------------

struct FixtureShape {
  std::size_t max_domain = 5;
  std::size_t max_rows = 4;
  std::size_t max_skolem = 2;
  std::size_t max_conjuncts = 2;
  double extra_target_rows = 0.6;
};

/// A source/target pair, an SOtgd over them and total Skolem tables, with
/// the target built as the image of the mapping plus random extra rows, so
/// that the interpretation satisfies the mapping.
struct RandomFixture {
  Schema source;
  Schema target;
  Instance src;
  Instance tgt;
  std::vector<Value> domain;
  std::string text;
  std::vector<NormalizedImplication> impls;
  OperadArrow arrow;
  SkolemTables tables;
};

RandomFixture random_fixture(Rng& rng, const FixtureShape& shape = {});

/// A random table of the given arity over `values`.
Table random_table(Rng& rng, std::size_t arity, const std::vector<Value>& values, std::size_t max_rows);

/// Relation rows of a random instance over `schema`.
Instance random_instance(Rng& rng, const Schema& schema, const std::vector<Value>& values, std::size_t max_rows);

}  // namespace testing_support
