#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/kernels.hpp"
#include "dbmorph/logic/eval.hpp"
#include "dbmorph/operad.hpp"

namespace dbmorph {

/// A finite table for one Skolem symbol. Arguments without an entry map to
/// `fallback` when set; otherwise lookup fails.
struct FunctionTable {
  std::map<Tuple, Value> entries;
  std::optional<Value> fallback;

  bool operator==(const FunctionTable&) const = default;
};

using SkolemTables = std::map<std::string, FunctionTable>;

/// Point changes to Skolem tables: (symbol, arguments) -> new value.
using SkolemDelta = std::map<std::pair<std::string, Tuple>, Value>;

/// The source and target instances fix the relations, Skolem symbols
/// are read from tables, built-ins are fixed.
class TarskiInterpretation : public InstanceStructure {
 public:
  TarskiInterpretation(const Instance& source, const Instance& target, SkolemTables skolem = {},
                       std::vector<Value> extra_constants = {});

  const SkolemTables& skolem() const noexcept { return skolem_; }
  Value apply_skolem(const std::string& symbol, const Tuple& args) const override;

 private:
  SkolemTables skolem_;
};

/// Agrees with `base` except at the points of `delta`.
class PerturbedInterpretation : public Structure {
 public:
  PerturbedInterpretation(const Structure& base, const SkolemDelta& delta) : base_(base), delta_(delta) {}

  const Relation* find_relation(std::string_view name, Side side) const override {
    return base_.find_relation(name, side);
  }
  const std::vector<Value>& domain() const override { return base_.domain(); }
  Value apply_skolem(const std::string& symbol, const Tuple& args) const override;

 private:
  const Structure& base_;
  const SkolemDelta& delta_;
};

/// A term under an assignment.
Value eval_term(const Assignment& g, const Term& t, const Structure& s);

/// What apply_component saw, for verbose reports.
struct ApplyTrace {
  bool join_guard = false;
  Assignment assignment;
  std::vector<std::pair<std::string, bool>> literals;
  Tuple output;
};

/// A component at one point of its domain: the evaluated head when the
/// joined positions agree and the compacted assignment satisfies the
/// expression, <> otherwise.
Tuple apply_component(const Structure& s, const OperadOperation& op, std::span<const Tuple> args,
                      ApplyTrace* trace = nullptr);

/// One factor of a component's domain: a relation, or its complement within
/// domain^arity when the place symbol is negated.
struct DomainFactor {
  std::string relation;
  bool negated = false;

  auto operator<=>(const DomainFactor&) const = default;
};

/// The materialized factors of an operation's domain.
std::vector<std::vector<Tuple>> domain_factors(const Structure& s, const OperadOperation& op);

using Args = std::vector<Tuple>;
using Graph = std::map<Args, Tuple>;

/// A component function of an instance morphism. Base components read their
/// materialized graph; saturation extras additionally override one point.
struct ComponentFunction {
  std::size_t operation = 0;  // 0-based index into the arrow's operations
  std::vector<DomainFactor> domain;
  std::string codomain;
  std::shared_ptr<const Graph> graph;
  std::optional<std::pair<Args, Tuple>> override_point;

  /// The value at `args`; <> outside the domain.
  Tuple operator()(const Args& args) const;
  /// Non-<> outputs over the whole domain.
  std::set<Tuple> image() const;
};

/// One component per operation; the identity on the empty relation is implicit.
struct InstanceMorphism {
  const Instance* source = nullptr;
  const Instance* target = nullptr;
  std::vector<ComponentFunction> components;

  /// The implicit identity component.
  static Tuple bottom(const Tuple& t) { return t; }
};

/// The image of the component over its whole domain, under the
/// operation's query symbol with the target's columns.
Relation component_image(const Structure& s, const OperadArrow& arrow, std::size_t op_index,
                         Execution exec = Execution::Serial);

/// Copy step into the target: b when the target relation holds b, <> otherwise.
Tuple apply_v(const Structure& s, const OperadOperation& op, const Tuple& b);

InstanceMorphism alpha_star(const InstanceStructure& s, const OperadArrow& arrow, Execution exec = Execution::Serial);

struct SatisfactionReport {
  bool satisfied = true;
  /// (operation index, image tuple missing from the target relation)
  std::vector<std::pair<std::size_t, Tuple>> violations;
};

/// Whether every component image lies inside its target relation.
SatisfactionReport satisfies(const Structure& s, const OperadArrow& arrow, Execution exec = Execution::Serial);

}  // namespace dbmorph
