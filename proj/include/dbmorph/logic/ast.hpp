#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dbmorph/value.hpp"

namespace dbmorph {

/// Location of a construct in the mapping source (1-based). Spans never take
/// part in structural equality of AST nodes.
struct Span {
  int line = 0;
  int column = 0;

  friend bool operator==(const Span&, const Span&) { return true; }
};

enum class FunctionKind {
  Skolem,          // existentially quantified, interpreted by a table
  Hash,            // built-in tuple hash
  Characteristic,  // f_R: 1 if the argument tuple is in R, 0 otherwise
};

struct Term;

struct Variable {
  std::string name;
  bool operator==(const Variable&) const = default;
};

struct Constant {
  Value value;
  bool operator==(const Constant&) const = default;
};

/// The truth constant; evaluates to the integer 1.
struct Truth {
  bool operator==(const Truth&) const = default;
};

struct Application {
  std::string symbol;
  FunctionKind kind = FunctionKind::Skolem;
  std::vector<Term> args;
  bool operator==(const Application&) const;
};

struct Term {
  std::variant<Variable, Constant, Truth, Application> node;

  static Term var(std::string name) { return Term{Variable{std::move(name)}}; }
  static Term constant(Value v) { return Term{Constant{std::move(v)}}; }
  static Term truth() { return Term{Truth{}}; }
  static Term apply(std::string symbol, FunctionKind kind, std::vector<Term> args) {
    return Term{Application{std::move(symbol), kind, std::move(args)}};
  }

  bool is_variable() const { return std::holds_alternative<Variable>(node); }
  bool is_application() const { return std::holds_alternative<Application>(node); }
  const std::string& variable() const { return std::get<Variable>(node).name; }
  const Application& application() const { return std::get<Application>(node); }

  bool operator==(const Term&) const = default;
};

inline bool Application::operator==(const Application& o) const {
  return symbol == o.symbol && kind == o.kind && args == o.args;
}

/// Relation named by a characteristic-function symbol f_R, i.e. "R".
std::string characteristic_relation(const std::string& symbol);

struct Atom {
  std::string relation;
  std::vector<Term> args;
  Span span;
  bool operator==(const Atom&) const = default;
};

enum class Comparator { Eq, Lt, Gt, Le, Ge, Ne };

struct Comparison {
  Term lhs;
  Comparator op = Comparator::Eq;
  Term rhs;
  bool operator==(const Comparison&) const = default;
};

/// The built-in unary predicate `notnull(t)`.
struct NotNull {
  Term arg;
  bool operator==(const NotNull&) const = default;
};

struct Literal {
  bool negated = false;
  std::variant<Atom, Comparison, NotNull> body;
  Span span;

  bool is_atom() const { return std::holds_alternative<Atom>(body); }
  const Atom& atom() const { return std::get<Atom>(body); }
  bool operator==(const Literal&) const = default;
};

/// forall universals . [exists lhs_existentials .] lhs -> [exists rhs_existentials .] rhs
struct Tgd {
  std::vector<std::string> universals;
  std::vector<std::string> lhs_existentials;
  std::vector<Literal> lhs;
  std::vector<std::string> rhs_existentials;
  std::vector<Atom> rhs;
  Span span;
  bool operator==(const Tgd&) const = default;
};

/// forall universals . lhs -> y1 = z1 & ... & yk = zk
struct Egd {
  std::vector<std::string> universals;
  std::vector<Atom> lhs;
  std::vector<std::pair<std::string, std::string>> equalities;
  Span span;
  bool operator==(const Egd&) const = default;
};

using Dependency = std::variant<Tgd, Egd>;

struct FunctionDecl {
  std::string name;
  FunctionKind kind = FunctionKind::Skolem;
  bool operator==(const FunctionDecl&) const = default;
};

struct SOConjunct {
  std::vector<std::string> universals;
  std::vector<Literal> lhs;
  std::vector<Atom> rhs;
  Span span;
  bool operator==(const SOConjunct&) const = default;
};

struct SOtgd {
  std::vector<FunctionDecl> functions;
  std::vector<SOConjunct> conjuncts;
  bool operator==(const SOtgd&) const = default;
};

/// One implication of a normalized SOtgd: a single head atom.
struct NormalizedImplication {
  std::vector<std::string> universals;
  std::vector<Literal> lhs;
  Atom head;
  bool operator==(const NormalizedImplication&) const = default;
};

/// Result of parsing: an SOtgd when the source starts with `exists f... .`,
/// otherwise a list of first-order tgds and egds.
struct Mapping {
  std::variant<SOtgd, std::vector<Dependency>> body;

  bool is_sotgd() const { return std::holds_alternative<SOtgd>(body); }
  const SOtgd& sotgd() const { return std::get<SOtgd>(body); }
  const std::vector<Dependency>& dependencies() const { return std::get<std::vector<Dependency>>(body); }
  bool operator==(const Mapping&) const = default;
};

/// Name of the nullary relation r_∅ whose only row is the empty tuple.
inline constexpr const char* kEmptyRelation = "r_empty";

/// The atom r_∅(), used on both sides of the tautology `taut`.
Atom empty_atom();
bool is_tautology(const SOConjunct& c);
bool is_tautology(const Tgd& t);

/// Free variables of a term (including those under function applications), in first-occurrence order.
void collect_variables(const Term& t, std::vector<std::string>& out);
std::vector<std::string> variables_of(const Literal& l);

}  // namespace dbmorph
