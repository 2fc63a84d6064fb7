#include "dbmorph/logic/eval.hpp"

#include <algorithm>
#include <set>

#include "dbmorph/errors.hpp"
#include "dbmorph/irdb.hpp"
#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

Value Structure::apply_function(const Application& fn, const Tuple& args) const {
  switch (fn.kind) {
    case FunctionKind::Hash:
      return Value(hash_tuple(args));
    case FunctionKind::Characteristic: {
      std::string rel = characteristic_relation(fn.symbol);
      const Relation* r = find_relation(rel, Side::Source);
      if (!r) throw SchemaError("characteristic function " + fn.symbol + " names no known relation");
      return Value(r->contains(args) ? 1 : 0);
    }
    case FunctionKind::Skolem:
      return apply_skolem(fn.symbol, args);
  }
  return Value::null();
}

Value Structure::apply_skolem(const std::string& symbol, const Tuple&) const {
  throw InterpretationError("no interpretation for function symbol " + symbol);
}

InstanceStructure::InstanceStructure(const Instance& source, const Instance& target,
                                     std::vector<Value> extra_constants)
    : source_(&source), target_(&target) {
  std::set<Value> dom = active_domain(source);
  auto t = active_domain(target);
  dom.insert(t.begin(), t.end());
  dom.insert(extra_constants.begin(), extra_constants.end());
  domain_.assign(dom.begin(), dom.end());
}

const Relation* InstanceStructure::find_relation(std::string_view name, Side side) const {
  const Instance* first = side == Side::Source ? source_ : target_;
  const Instance* second = side == Side::Source ? target_ : source_;
  if (auto* r = first->find(name)) return r;
  if (auto* r = second->find(name)) return r;
  for (const Instance* inst : auxiliary_)
    if (auto* r = inst->find(name)) return r;
  return nullptr;
}

Value evaluate(const Term& t, const Assignment& g, const Structure& s) {
  return std::visit(
      [&](const auto& n) -> Value {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Variable>) {
          auto it = g.find(n.name);
          if (it == g.end()) throw PreconditionError("variable " + n.name + " is unassigned");
          return it->second;
        } else if constexpr (std::is_same_v<N, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, Truth>) {
          return Value(1);
        } else {
          Tuple args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(evaluate(a, g, s));
          return s.apply_function(n, args);
        }
      },
      t.node);
}

bool compare(const Value& a, Comparator op, const Value& b) {
  if (a.is_null() || b.is_null()) return false;
  switch (op) {
    case Comparator::Eq: return a == b;
    case Comparator::Ne: return a != b;
    default: break;
  }
  if (!a.is_int() || !b.is_int()) return false;
  switch (op) {
    case Comparator::Lt: return a.as_int() < b.as_int();
    case Comparator::Gt: return a.as_int() > b.as_int();
    case Comparator::Le: return a.as_int() <= b.as_int();
    case Comparator::Ge: return a.as_int() >= b.as_int();
    default: return false;
  }
}

bool holds(const Atom& a, const Assignment& g, const Structure& s, Side side) {
  const Relation* r = s.find_relation(a.relation, side);
  if (!r) throw SchemaError("unknown relation " + a.relation);
  Tuple t;
  t.reserve(a.args.size());
  for (const auto& arg : a.args) t.push_back(evaluate(arg, g, s));
  return r->contains(t);
}

bool holds(const Literal& l, const Assignment& g, const Structure& s, Side side) {
  bool v = std::visit(
      [&](const auto& b) -> bool {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Atom>) {
          return holds(b, g, s, side);
        } else if constexpr (std::is_same_v<B, Comparison>) {
          return compare(evaluate(b.lhs, g, s), b.op, evaluate(b.rhs, g, s));
        } else {
          return !evaluate(b.arg, g, s).is_null();
        }
      },
      l.body);
  return l.negated ? !v : v;
}

namespace {

// Backtracking join. Positive atoms whose arguments are variables or ground
// terms are matched row by row; everything else is checked once all of its
// variables are bound.
class Matcher {
 public:
  Matcher(std::vector<Literal> body, const Structure& s, Side side,
          const std::function<bool(const Assignment&)>& cb)
      : s_(s), side_(side), cb_(cb) {
    for (auto& l : body) {
      bool joinable = l.is_atom() && !l.negated;
      if (joinable) {
        for (const auto& t : l.atom().args)
          if (t.is_application()) joinable = false;
      }
      (joinable ? joins_ : filters_).push_back(std::move(l));
    }
    for (const auto& l : filters_)
      for (auto& v : variables_of(l)) free_.push_back(v);
  }

  bool run(Assignment g) { return join(0, g); }

 private:
  bool join(std::size_t i, Assignment& g) {
    if (i == joins_.size()) return bind_free(0, g);
    const Atom& a = joins_[i].atom();
    const Relation* r = s_.find_relation(a.relation, side_);
    if (!r) throw SchemaError("unknown relation " + a.relation);
    for (const auto& row : r->rows()) {
      std::vector<std::string> bound;
      bool ok = row.size() == a.args.size();
      for (std::size_t k = 0; ok && k < a.args.size(); ++k) {
        const Term& t = a.args[k];
        if (t.is_variable()) {
          auto it = g.find(t.variable());
          if (it == g.end()) {
            g.emplace(t.variable(), row[k]);
            bound.push_back(t.variable());
          } else if (it->second != row[k]) {
            ok = false;
          }
        } else if (evaluate(t, g, s_) != row[k]) {
          ok = false;
        }
      }
      bool go_on = !ok || join(i + 1, g);
      for (const auto& v : bound) g.erase(v);
      if (!go_on) return false;
    }
    return true;
  }

  bool bind_free(std::size_t i, Assignment& g) {
    while (i < free_.size() && g.contains(free_[i])) ++i;
    if (i == free_.size()) {
      for (const auto& l : filters_)
        if (!holds(l, g, s_, side_)) return true;
      return cb_(g);
    }
    for (const auto& v : s_.domain()) {
      g[free_[i]] = v;
      bool go_on = bind_free(i + 1, g);
      if (!go_on) {
        g.erase(free_[i]);
        return false;
      }
    }
    g.erase(free_[i]);
    return true;
  }

  const Structure& s_;
  Side side_;
  const std::function<bool(const Assignment&)>& cb_;
  std::vector<Literal> joins_;
  std::vector<Literal> filters_;
  std::vector<std::string> free_;
};

}  // namespace

bool for_each_match(std::span<const Literal> body, const Assignment& seed, const Structure& s, Side side,
                    const std::function<bool(const Assignment&)>& callback) {
  return Matcher(std::vector<Literal>(body.begin(), body.end()), s, side, callback).run(seed);
}

bool for_each_match(std::span<const Atom> body, const Assignment& seed, const Structure& s, Side side,
                    const std::function<bool(const Assignment&)>& callback) {
  std::vector<Literal> lits;
  for (const auto& a : body) lits.push_back(Literal{false, a, a.span});
  return Matcher(std::move(lits), s, side, callback).run(seed);
}

}  // namespace dbmorph
