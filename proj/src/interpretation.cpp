#include "dbmorph/interpretation.hpp"

#include <algorithm>
#include <functional>

#include "dbmorph/errors.hpp"
#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

namespace {

bool mentions_characteristic(const Term& t) {
  if (!t.is_application()) return false;
  if (t.application().kind == FunctionKind::Characteristic) return true;
  for (const auto& a : t.application().args)
    if (mentions_characteristic(a)) return true;
  return false;
}

bool mentions_characteristic(const Literal& l) {
  return std::visit(
      [](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Atom>) {
          for (const auto& t : b.args)
            if (mentions_characteristic(t)) return true;
          return false;
        } else if constexpr (std::is_same_v<B, Comparison>) {
          return mentions_characteristic(b.lhs) || mentions_characteristic(b.rhs);
        } else {
          return mentions_characteristic(b.arg);
        }
      },
      l.body);
}

const Relation& require_relation(const Structure& s, const std::string& name, Side side) {
  const Relation* r = s.find_relation(name, side);
  if (!r) throw SchemaError("no instance provides relation " + name);
  return *r;
}

void complement_rows(const std::vector<Value>& domain, std::size_t arity, const Relation& rel, Tuple& prefix,
                     std::vector<Tuple>& out) {
  if (prefix.size() == arity) {
    if (!rel.contains(prefix)) out.push_back(prefix);
    return;
  }
  for (const auto& v : domain) {
    prefix.push_back(v);
    complement_rows(domain, arity, rel, prefix, out);
    prefix.pop_back();
  }
}

RelationSymbol query_symbol(const Structure& s, const OperadOperation& op) {
  const Relation& target = require_relation(s, op.target, Side::Target);
  return RelationSymbol{op.query_symbol, target.symbol().columns};
}

}  // namespace

TarskiInterpretation::TarskiInterpretation(const Instance& source, const Instance& target, SkolemTables skolem,
                                           std::vector<Value> extra_constants)
    : InstanceStructure(source, target, std::move(extra_constants)), skolem_(std::move(skolem)) {}

Value TarskiInterpretation::apply_skolem(const std::string& symbol, const Tuple& args) const {
  auto it = skolem_.find(symbol);
  if (it == skolem_.end()) throw InterpretationError("no table for function symbol " + symbol);
  auto e = it->second.entries.find(args);
  if (e != it->second.entries.end()) return e->second;
  if (it->second.fallback) return *it->second.fallback;
  throw InterpretationError("table for " + symbol + " has no entry for " + render(args));
}

Value PerturbedInterpretation::apply_skolem(const std::string& symbol, const Tuple& args) const {
  auto it = delta_.find({symbol, args});
  if (it != delta_.end()) return it->second;
  return base_.apply_skolem(symbol, args);
}

Value eval_term(const Assignment& g, const Term& t, const Structure& s) { return evaluate(t, g, s); }

Tuple apply_component(const Structure& s, const OperadOperation& op, std::span<const Tuple> args,
                      ApplyTrace* trace) {
  if (args.size() != op.places.size())
    throw SchemaError("operation q_" + std::to_string(op.index) + " takes " + std::to_string(op.places.size()) +
                      " tuples, got " + std::to_string(args.size()));
  for (std::size_t j = 0; j < args.size(); ++j)
    if (args[j].size() != op.places[j].args.size())
      throw SchemaError("argument " + std::to_string(j + 1) + " of q_" + std::to_string(op.index) +
                        " has the wrong arity");

  bool guard = true;
  for (const auto& member : op.equal.members) {
    const auto& [i0, j0] = member.front();
    for (const auto& [i, j] : member)
      if (args[j - 1][i - 1] != args[j0 - 1][i0 - 1]) guard = false;
  }
  if (trace) trace->join_guard = guard;
  if (!guard) return {};

  Tuple values = cmp(op.equal, args);
  Assignment g;
  for (std::size_t k = 0; k < op.variables.size(); ++k) g.emplace(op.variables[k], values[k]);
  if (trace) trace->assignment = g;

  for (std::size_t j = 0; j < op.places.size(); ++j) {
    const PlaceSymbol& p = op.places[j];
    bool member = require_relation(s, p.relation, Side::Source).contains(args[j]);
    bool ok = member != p.negated;
    if (trace) trace->literals.emplace_back("(_)_" + std::to_string(j + 1), ok);
    if (!ok) return {};
  }

  auto literals = op.literals();
  std::stable_partition(literals.begin(), literals.end(),
                        [](const Literal& l) { return !mentions_characteristic(l); });
  for (const auto& l : literals) {
    bool ok = holds(l, g, s, Side::Source);
    if (trace) trace->literals.emplace_back(to_string(l), ok);
    if (!ok) return {};
  }

  Tuple out;
  out.reserve(op.head.size());
  for (const auto& t : op.head) out.push_back(evaluate(t, g, s));
  if (trace) trace->output = out;
  return out;
}

std::vector<std::vector<Tuple>> domain_factors(const Structure& s, const OperadOperation& op) {
  std::vector<std::vector<Tuple>> out;
  for (const auto& p : op.places) {
    const Relation& rel = require_relation(s, p.relation, Side::Source);
    std::vector<Tuple> rows;
    if (p.negated) {
      Tuple prefix;
      complement_rows(s.domain(), rel.arity(), rel, prefix, rows);
    } else {
      rows.assign(rel.rows().begin(), rel.rows().end());
    }
    out.push_back(std::move(rows));
  }
  return out;
}

namespace {

std::vector<Tuple> evaluate_domain(const Structure& s, const OperadOperation& op,
                                   const std::vector<std::vector<Tuple>>& factors, Execution exec) {
  std::vector<std::size_t> sizes;
  for (const auto& f : factors) sizes.push_back(f.size());
  return product_apply(
      sizes,
      [&](std::span<const std::size_t> idx) {
        Args args;
        args.reserve(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) args.push_back(factors[k][idx[k]]);
        return apply_component(s, op, args);
      },
      exec);
}

}  // namespace

Tuple ComponentFunction::operator()(const Args& args) const {
  if (override_point && override_point->first == args) return override_point->second;
  auto it = graph->find(args);
  return it == graph->end() ? Tuple{} : it->second;
}

std::set<Tuple> ComponentFunction::image() const {
  std::set<Tuple> out;
  for (const auto& [args, value] : *graph) {
    Tuple v = override_point && override_point->first == args ? override_point->second : value;
    if (!v.empty()) out.insert(std::move(v));
  }
  return out;
}

Relation component_image(const Structure& s, const OperadArrow& arrow, std::size_t op_index, Execution exec) {
  const OperadOperation& op = arrow.operations.at(op_index);
  auto factors = domain_factors(s, op);
  Relation out(query_symbol(s, op));
  for (auto& t : evaluate_domain(s, op, factors, exec))
    if (!t.empty()) out.insert(std::move(t));
  return out;
}

Tuple apply_v(const Structure& s, const OperadOperation& op, const Tuple& b) {
  return require_relation(s, op.target, Side::Target).contains(b) ? b : Tuple{};
}

InstanceMorphism alpha_star(const InstanceStructure& s, const OperadArrow& arrow, Execution exec) {
  InstanceMorphism h{&s.source(), &s.target(), {}};
  for (std::size_t i = 0; i < arrow.operations.size(); ++i) {
    const OperadOperation& op = arrow.operations[i];
    auto factors = domain_factors(s, op);
    auto outputs = evaluate_domain(s, op, factors, exec);
    std::vector<std::size_t> sizes;
    for (const auto& f : factors) sizes.push_back(f.size());
    auto graph = std::make_shared<Graph>();
    std::vector<std::size_t> idx(sizes.size());
    for (std::size_t flat = 0; flat < outputs.size(); ++flat) {
      decode_product_index(flat, sizes, idx);
      Args args;
      for (std::size_t k = 0; k < idx.size(); ++k) args.push_back(factors[k][idx[k]]);
      graph->emplace(std::move(args), std::move(outputs[flat]));
    }
    ComponentFunction c;
    c.operation = i;
    for (const auto& p : op.places) c.domain.push_back({p.relation, p.negated});
    c.codomain = op.target;
    c.graph = std::move(graph);
    h.components.push_back(std::move(c));
  }
  return h;
}

SatisfactionReport satisfies(const Structure& s, const OperadArrow& arrow, Execution exec) {
  SatisfactionReport report;
  for (std::size_t i = 0; i < arrow.operations.size(); ++i) {
    const Relation& target = require_relation(s, arrow.operations[i].target, Side::Target);
    const Relation image = component_image(s, arrow, i, exec);
    for (const auto& t : image.rows())
      if (!target.contains(t)) {
        report.satisfied = false;
        report.violations.emplace_back(i, t);
      }
  }
  return report;
}

}  // namespace dbmorph
