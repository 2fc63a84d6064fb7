#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/kernels.hpp"

namespace dbmorph {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// An SPJRU view term over numbered generator relations. Joins are products
/// followed by column-equality selections; renaming is a column swap.
struct Expr {
  enum class Kind { Generator, SelectConst, SelectCols, Project, Swap, Product, Union };

  Kind kind = Kind::Generator;
  std::size_t generator = 0;           // Generator
  std::size_t column = 0;              // SelectConst, SelectCols, Swap (1-based)
  std::size_t column2 = 0;             // SelectCols, Swap (1-based)
  Value constant;                      // SelectConst
  std::vector<std::size_t> positions;  // Project (1-based, increasing)
  ExprPtr left;
  ExprPtr right;  // Product, Union
};

/// Generator by 0-based index; rendered as G1, G2, ...
ExprPtr generator_expr(std::size_t index);
ExprPtr select_const(ExprPtr e, std::size_t column, Value constant);
ExprPtr select_cols(ExprPtr e, std::size_t column, std::size_t column2);
ExprPtr project_expr(ExprPtr e, std::vector<std::size_t> positions);
ExprPtr swap_expr(ExprPtr e, std::size_t column, std::size_t column2);
ExprPtr product_expr(ExprPtr a, ExprPtr b);
ExprPtr union_expr(ExprPtr a, ExprPtr b);

Table evaluate(const Expr& e, std::span<const Table> generators);
std::string render(const Expr& e);
std::size_t depth(const Expr& e);

struct ClosureBounds {
  std::size_t max_depth = 3;
  std::size_t max_arity = 6;
  std::size_t max_relations = 100000;
};

struct ClosureEntry {
  Table table;
  ExprPtr expr;
  std::size_t depth = 0;
};

/// The relations reachable from the generators by terms within the bounds,
/// each with a minimal-depth derivation.
struct Closure {
  std::vector<ClosureEntry> entries;
  std::map<Table, std::size_t> index;
  std::size_t candidates = 0;
  bool capped = false;

  const ClosureEntry* find(const Table& t) const;
};

/// Breadth-first semi-naive enumeration. Every candidate term counts against
/// bounds.max_relations; when that cap is reached the result is flagged
/// capped. With a goal, enumeration stops as soon as the goal is produced.
Closure enumerate_closure(std::span<const Table> generators, const ClosureBounds& bounds,
                          Execution exec = Execution::Serial, const Table* goal = nullptr);

/// Builds a term producing `goal` in the normal form
/// union over rows of (product over columns of π_c σ_{c=v}(G)).
/// Returns nullopt when some value of the goal occurs in no generator.
std::optional<ExprPtr> construct_derivation(const Table& goal, std::span<const Table> generators);

}  // namespace dbmorph
