#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/logic/ast.hpp"

namespace dbmorph {

/// A positional hole (_)_n of an operation, standing for a source relation.
/// Its arguments are variables only.
struct PlaceSymbol {
  std::string relation;
  bool negated = false;
  std::vector<std::string> args;

  bool operator==(const PlaceSymbol&) const = default;
};

/// An occurrence (position in atom, atom index), both 1-based.
using Occurrence = std::pair<std::size_t, std::size_t>;

/// S: one member per variable shared between occurrences, listing all of
/// its occurrences in place atoms.
struct EqualVarSet {
  std::vector<std::vector<Occurrence>> members;

  bool empty() const noexcept { return members.empty(); }
  bool operator==(const EqualVarSet&) const = default;
};

/// One item of an operation's expression: a place symbol (by 0-based index)
/// or a literal kept verbatim.
using ExpressionItem = std::variant<std::size_t, Literal>;

/// One compiled implication: a query into a fresh symbol of the target
/// arity, followed by a copy into the target relation.
struct OperadOperation {
  std::size_t index = 0;  // 1-based position in the arrow
  std::vector<PlaceSymbol> places;
  std::vector<ExpressionItem> expression;
  std::string target;
  std::vector<Term> head;
  std::vector<std::string> variables;
  EqualVarSet equal;
  std::vector<std::size_t> simple_positions;  // head positions holding a variable, 1-based
  std::string query_symbol;
  NormalizedImplication implication;

  /// Literals of the expression that are not place symbols, in order.
  std::vector<Literal> literals() const;
  /// True when some head term applies a Skolem symbol.
  bool has_skolem_head() const;
};

/// A compiled mapping: its operations plus the identity on the empty relation, which is
/// implicit and always present.
struct OperadArrow {
  std::string name;
  Schema source;
  Schema target;
  std::vector<OperadOperation> operations;
};

/// Compiles normalized implications. Source-schema atoms and characteristic
/// literals f_R(vars) = 1 over source relations become place symbols;
/// body atoms over other relations become characteristic literals. The
/// tautology contributes no operation.
OperadArrow make_operads(std::span<const NormalizedImplication> impls, const Schema& source, const Schema& target,
                         std::string name = "M");

EqualVarSet build_equal_var_set(std::span<const PlaceSymbol> places);

/// Concatenates the tuples, dropping every value whose occurrence S links to
/// an earlier occurrence (earlier atom, or same atom at an earlier position).
Tuple cmp(const EqualVarSet& s, std::span<const Tuple> tuples);

/// Head positions holding a plain variable, 1-based.
std::vector<std::size_t> simple_var_positions(std::span<const Term> head);

/// e[(_)_n / r_n]: the expression with every place symbol replaced by its
/// relational atom.
std::vector<Literal> substituted(const OperadOperation& op);

/// Renders the operation as "e => (_)(t)" with place symbols (_)_n.
std::string render_expression(const OperadOperation& op);

/// Constants occurring in the operations' literals and heads.
std::vector<Value> arrow_constants(const OperadArrow& arrow);

}  // namespace dbmorph
