#pragma once

#include <compare>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dbmorph/logic/ast.hpp"
#include "dbmorph/value.hpp"

namespace dbmorph {

/// A relation symbol with named columns nr_r(1..arity).
struct RelationSymbol {
  std::string name;
  std::vector<std::string> columns;

  std::size_t arity() const noexcept { return columns.size(); }
  bool operator==(const RelationSymbol&) const = default;
};

/// Checks column-name uniqueness and that only r_∅ is nullary.
void validate_symbol(const RelationSymbol& symbol);

/// The nullary symbol r_∅.
RelationSymbol empty_symbol();

/// An anonymous finite relation: an arity and a set of rows. Flux kernels and
/// the view-closure oracle work over these.
struct Table {
  std::size_t arity = 0;
  std::set<Tuple> rows;

  auto operator<=>(const Table&) const = default;
  bool operator==(const Table&) const = default;
};

/// The relation holding only the empty tuple.
Table bottom_table();

std::string render(const Table& t);

/// A finite set of rows over a relation symbol.
class Relation {
 public:
  Relation() = default;
  explicit Relation(RelationSymbol symbol);
  Relation(RelationSymbol symbol, std::set<Tuple> rows);

  const RelationSymbol& symbol() const noexcept { return symbol_; }
  const std::string& name() const noexcept { return symbol_.name; }
  std::size_t arity() const noexcept { return symbol_.arity(); }
  const std::set<Tuple>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  bool contains(const Tuple& t) const { return rows_.contains(t); }

  /// Adds a row; throws SchemaError on arity mismatch.
  bool insert(Tuple row);

  Table table() const { return Table{arity(), rows_}; }

  bool operator==(const Relation&) const = default;

 private:
  RelationSymbol symbol_;
  std::set<Tuple> rows_;
};

/// π over 1-based column positions; duplicate rows collapse.
Relation project(const Relation& rel, std::span<const std::size_t> positions);
Table project(const Table& t, std::span<const std::size_t> positions);

/// A database schema (S, Σ). r_∅ is always a member of S.
class Schema {
 public:
  Schema() : Schema("") {}
  explicit Schema(std::string name);
  Schema(std::string name, std::vector<RelationSymbol> symbols, std::vector<Dependency> constraints = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<RelationSymbol>& symbols() const noexcept { return symbols_; }
  const std::vector<Dependency>& constraints() const noexcept { return constraints_; }

  void add_symbol(RelationSymbol symbol);
  void set_constraints(std::vector<Dependency> constraints) { constraints_ = std::move(constraints); }

  const RelationSymbol* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  bool operator==(const Schema&) const = default;

 private:
  std::string name_;
  std::vector<RelationSymbol> symbols_;
  std::vector<Dependency> constraints_;
};

/// An instance database: a relation for every symbol of its schema, with
/// the empty-relation slot holding only the empty tuple.
class Instance {
 public:
  Instance() : Instance(Schema()) {}
  explicit Instance(Schema schema);

  const Schema& schema() const noexcept { return schema_; }
  const std::map<std::string, Relation>& relations() const noexcept { return relations_; }

  const Relation& relation(std::string_view name) const;
  const Relation* find(std::string_view name) const;

  /// Replaces the relation of the same name; throws on unknown name, wrong
  /// columns, or an attempt to change r_∅.
  void set(Relation rel);
  /// Adds a row to the named relation.
  void insert(std::string_view name, Tuple row);

  bool operator==(const Instance&) const = default;

 private:
  Schema schema_;
  std::map<std::string, Relation> relations_;
};

/// Every value occurring in an ordinary row of the instance.
std::set<Value> active_domain(const Instance& inst);
std::set<Value> active_domain(const Table& t);

}  // namespace dbmorph
