#include "dbmorph/operad.hpp"

#include <algorithm>
#include <set>

#include "dbmorph/errors.hpp"
#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

namespace {

// f_R(x1..xn) = 1 with R a source relation and variable arguments.
const Application* characteristic_place(const Literal& l, const Schema& source) {
  if (l.negated) return nullptr;
  const auto* c = std::get_if<Comparison>(&l.body);
  if (!c || c->op != Comparator::Eq) return nullptr;
  const Term* fn = nullptr;
  if (std::holds_alternative<Truth>(c->rhs.node)) fn = &c->lhs;
  if (std::holds_alternative<Truth>(c->lhs.node)) fn = &c->rhs;
  if (!fn || !fn->is_application()) return nullptr;
  const Application& a = fn->application();
  if (a.kind != FunctionKind::Characteristic) return nullptr;
  if (!source.contains(characteristic_relation(a.symbol))) return nullptr;
  for (const auto& t : a.args)
    if (!t.is_variable()) return nullptr;
  return &a;
}

void constants_of(const Term& t, std::set<Value>& out) {
  if (const auto* c = std::get_if<Constant>(&t.node)) out.insert(c->value);
  if (t.is_application())
    for (const auto& a : t.application().args) constants_of(a, out);
}

}  // namespace

std::vector<Literal> OperadOperation::literals() const {
  std::vector<Literal> out;
  for (const auto& item : expression)
    if (const auto* l = std::get_if<Literal>(&item)) out.push_back(*l);
  return out;
}

bool OperadOperation::has_skolem_head() const {
  std::function<bool(const Term&)> skolem = [&](const Term& t) {
    if (!t.is_application()) return false;
    if (t.application().kind == FunctionKind::Skolem) return true;
    return std::any_of(t.application().args.begin(), t.application().args.end(), skolem);
  };
  return std::any_of(head.begin(), head.end(), skolem);
}

OperadArrow make_operads(std::span<const NormalizedImplication> impls, const Schema& source, const Schema& target,
                         std::string name) {
  OperadArrow arrow{std::move(name), source, target, {}};
  for (const auto& impl : impls) {
    if (impl.head.relation == kEmptyRelation) continue;
    const RelationSymbol* head_sym = target.find(impl.head.relation);
    if (!head_sym) throw SchemaError("head relation " + impl.head.relation + " is not in target schema " + target.name());
    if (head_sym->arity() != impl.head.args.size())
      throw SchemaError("head " + to_string(impl.head) + " does not match the arity of " + head_sym->name);

    OperadOperation op;
    op.index = arrow.operations.size() + 1;
    op.target = impl.head.relation;
    op.head = impl.head.args;
    op.implication = impl;
    op.query_symbol = "r_q" + std::to_string(op.index);

    for (const auto& l : impl.lhs) {
      if (l.is_atom()) {
        const Atom& a = l.atom();
        if (const RelationSymbol* sym = source.find(a.relation); sym && a.relation != kEmptyRelation) {
          if (sym->arity() != a.args.size())
            throw SchemaError("atom " + to_string(a) + " does not match the arity of " + sym->name);
          PlaceSymbol p{a.relation, l.negated, {}};
          for (const auto& t : a.args) {
            if (!t.is_variable()) throw SchemaError("place atom " + to_string(a) + " has a non-variable argument");
            p.args.push_back(t.variable());
          }
          op.expression.emplace_back(op.places.size());
          op.places.push_back(std::move(p));
        } else {
          Term fn = Term::apply("f_" + a.relation, FunctionKind::Characteristic, a.args);
          op.expression.emplace_back(Literal{l.negated, Comparison{std::move(fn), Comparator::Eq, Term::truth()}, l.span});
        }
        continue;
      }
      if (const Application* a = characteristic_place(l, source)) {
        PlaceSymbol p{characteristic_relation(a->symbol), false, {}};
        if (source.find(p.relation)->arity() != a->args.size())
          throw SchemaError("characteristic function " + a->symbol + " applied to the wrong number of arguments");
        for (const auto& t : a->args) p.args.push_back(t.variable());
        op.expression.emplace_back(op.places.size());
        op.places.push_back(std::move(p));
        continue;
      }
      op.expression.emplace_back(l);
    }

    std::set<std::string> seen;
    for (const auto& p : op.places)
      for (const auto& v : p.args)
        if (seen.insert(v).second) op.variables.push_back(v);
    std::vector<std::string> used;
    for (const auto& l : op.literals())
      for (auto& v : variables_of(l)) used.push_back(v);
    for (const auto& t : op.head) collect_variables(t, used);
    for (const auto& v : used)
      if (!seen.contains(v))
        throw SafetyError("variable '" + v + "' of " + to_string(impl) + " occurs in no source relation atom");

    op.equal = build_equal_var_set(op.places);
    op.simple_positions = simple_var_positions(op.head);
    arrow.operations.push_back(std::move(op));
  }
  return arrow;
}

EqualVarSet build_equal_var_set(std::span<const PlaceSymbol> places) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Occurrence>> occ;
  for (std::size_t j = 0; j < places.size(); ++j)
    for (std::size_t i = 0; i < places[j].args.size(); ++i) {
      const auto& v = places[j].args[i];
      if (!occ.contains(v)) order.push_back(v);
      occ[v].emplace_back(i + 1, j + 1);
    }
  EqualVarSet s;
  for (const auto& v : order)
    if (occ[v].size() >= 2) s.members.push_back(occ[v]);
  return s;
}

Tuple cmp(const EqualVarSet& s, std::span<const Tuple> tuples) {
  std::set<Occurrence> skipped;
  for (const auto& member : s.members) {
    auto first = std::min_element(member.begin(), member.end(), [](const Occurrence& a, const Occurrence& b) {
      return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
    for (const auto& o : member)
      if (o != *first) skipped.insert(o);
  }
  Tuple out;
  for (std::size_t j = 0; j < tuples.size(); ++j)
    for (std::size_t i = 0; i < tuples[j].size(); ++i)
      if (!skipped.contains({i + 1, j + 1})) out.push_back(tuples[j][i]);
  return out;
}

std::vector<std::size_t> simple_var_positions(std::span<const Term> head) {
  std::vector<std::size_t> z;
  for (std::size_t j = 0; j < head.size(); ++j)
    if (head[j].is_variable()) z.push_back(j + 1);
  return z;
}

std::vector<Literal> substituted(const OperadOperation& op) {
  std::vector<Literal> out;
  for (const auto& item : op.expression) {
    if (const auto* n = std::get_if<std::size_t>(&item)) {
      const PlaceSymbol& p = op.places[*n];
      Atom a{p.relation, {}, {}};
      for (const auto& v : p.args) a.args.push_back(Term::var(v));
      out.push_back(Literal{p.negated, std::move(a), {}});
    } else {
      out.push_back(std::get<Literal>(item));
    }
  }
  return out;
}

std::string render_expression(const OperadOperation& op) {
  std::string out;
  for (const auto& item : op.expression) {
    if (!out.empty()) out += " & ";
    if (const auto* n = std::get_if<std::size_t>(&item)) {
      const PlaceSymbol& p = op.places[*n];
      if (p.negated) out += "not ";
      out += "(_)_" + std::to_string(*n + 1) + "(";
      for (std::size_t i = 0; i < p.args.size(); ++i) out += (i ? ", " : "") + p.args[i];
      out += ")";
    } else {
      out += to_string(std::get<Literal>(item));
    }
  }
  out += " => (_)(";
  for (std::size_t j = 0; j < op.head.size(); ++j) out += (j ? ", " : "") + to_string(op.head[j]);
  return out + ")";
}

std::vector<Value> arrow_constants(const OperadArrow& arrow) {
  std::set<Value> out;
  for (const auto& op : arrow.operations) {
    for (const auto& l : op.literals())
      std::visit(
          [&](const auto& b) {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, Atom>) {
              for (const auto& t : b.args) constants_of(t, out);
            } else if constexpr (std::is_same_v<B, Comparison>) {
              constants_of(b.lhs, out);
              constants_of(b.rhs, out);
            } else {
              constants_of(b.arg, out);
            }
          },
          l.body);
    for (const auto& t : op.head) constants_of(t, out);
  }
  return {out.begin(), out.end()};
}

}  // namespace dbmorph
