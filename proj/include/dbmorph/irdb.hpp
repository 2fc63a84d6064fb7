#pragma once

#include <compare>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/kernels.hpp"
#include "dbmorph/logic/ast.hpp"

namespace dbmorph {

/// Name of the vector relation r_V(r-name, t-index, a-name, value).
inline constexpr const char* kVectorRelation = "r_V";

/// 64-bit FNV-1a over the values rendered as text (NULL as "NUL0") joined by
/// the byte 0x1F, as 16 lowercase hex digits.
std::string hash_tuple(std::span<const Value> values);

/// One fact of the vector relation.
struct VectorTuple {
  std::string relation;
  std::string index;
  std::string attribute;
  Value value;

  Tuple row() const { return {relation, index, attribute, value}; }
  auto operator<=>(const VectorTuple&) const = default;
};

RelationSymbol vector_symbol();

/// The schema holding just r_V (and r_∅).
Schema vector_schema(std::string name = "V");

/// PARSE(r, d): one vector tuple per non-NULL value of d.
std::set<VectorTuple> parse_tuple(const RelationSymbol& symbol, const Tuple& row);

/// Union of PARSE over every row of every ordinary relation of `inst`.
Relation parse_database(const Instance& inst, Execution exec = Execution::Serial);

/// The tgds r(x1..xn) & notnull(xi) -> r_V("r", hash(x1..xn), "col_i", xi),
/// one per relation of `schema` and column.
std::vector<Tgd> opposite_mapping(const Schema& schema);

/// Inverse of parse_database: groups r_V by (r-name, t-index) and rebuilds
/// each row, filling columns without a vector tuple with NULL. Throws
/// SchemaError on facts naming unknown relations or columns, or on a group
/// that assigns two values to one column.
Instance reconstruct(const Relation& vector, const Schema& schema);

}  // namespace dbmorph
