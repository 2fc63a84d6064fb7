#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/logic/ast.hpp"

namespace dbmorph {

/// Which instance a relational atom is read from.
enum class Side { Source, Target };

/// An assignment g of domain values to variables.
using Assignment = std::map<std::string, Value>;

/// What formula evaluation needs from an interpretation: relations by name,
/// function symbols, and the finite domain used for complements and
/// unguarded variables.
class Structure {
 public:
  virtual ~Structure() = default;

  /// The relation named `name`, looked up on `side` first and then on the
  /// other side. Returns nullptr when neither instance has it.
  virtual const Relation* find_relation(std::string_view name, Side side) const = 0;

  /// Interprets a function application on already-evaluated arguments.
  virtual Value apply_function(const Application& fn, const Tuple& args) const;

  /// The finite domain quantifiers and complements range over.
  virtual const std::vector<Value>& domain() const = 0;

  /// Interpretation of Skolem symbols; the default has none.
  virtual Value apply_skolem(const std::string& symbol, const Tuple& args) const;
};

/// A structure over a source/target instance pair with only built-in
/// functions. Used for validating integrity constraints and as the base of
/// Tarski interpretations.
class InstanceStructure : public Structure {
 public:
  InstanceStructure(const Instance& source, const Instance& target, std::vector<Value> extra_constants = {});

  /// Instances outside the mapping's two schemas, consulted only when a
  /// relation is found in neither (characteristic functions of composed
  /// mappings). They do not contribute to the domain.
  void set_auxiliary(std::vector<const Instance*> instances) { auxiliary_ = std::move(instances); }

  const Relation* find_relation(std::string_view name, Side side) const override;
  const std::vector<Value>& domain() const override { return domain_; }

  const Instance& source() const noexcept { return *source_; }
  const Instance& target() const noexcept { return *target_; }

 private:
  const Instance* source_;
  const Instance* target_;
  std::vector<const Instance*> auxiliary_;
  std::vector<Value> domain_;
};

/// A term under an assignment.
Value evaluate(const Term& t, const Assignment& g, const Structure& s);

/// Built-in comparison semantics: `=` is syntactic equality; orderings hold
/// only between two integers; NULL satisfies no comparison at all.
bool compare(const Value& a, Comparator op, const Value& b);

/// Truth of a literal under g; relational atoms are read on `side`.
bool holds(const Literal& l, const Assignment& g, const Structure& s, Side side);
bool holds(const Atom& a, const Assignment& g, const Structure& s, Side side);

/// Enumerates every extension of `seed` to the variables of `body` that makes
/// all literals true. Positive relational atoms are joined against their
/// rows; variables left unbound by them range over s.domain(). The callback
/// returns false to stop the enumeration. Returns false if stopped early.
bool for_each_match(std::span<const Literal> body, const Assignment& seed, const Structure& s, Side side,
                    const std::function<bool(const Assignment&)>& callback);

/// Same, for a conjunction of positive atoms.
bool for_each_match(std::span<const Atom> body, const Assignment& seed, const Structure& s, Side side,
                    const std::function<bool(const Assignment&)>& callback);

}  // namespace dbmorph
