#include "dbmorph/logic/transform.hpp"

#include <algorithm>
#include <set>

#include "dbmorph/errors.hpp"
#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

namespace {

// Variables of positive relational atoms, counting f_R(...) = 1 as R(...).
std::set<std::string> atom_variables(std::span<const Literal> body) {
  std::set<std::string> out;
  auto add = [&out](const std::vector<Term>& args) {
    for (const auto& t : args)
      if (t.is_variable()) out.insert(t.variable());
  };
  for (const auto& l : body) {
    if (l.negated) continue;
    if (l.is_atom()) {
      add(l.atom().args);
      continue;
    }
    const auto* c = std::get_if<Comparison>(&l.body);
    if (!c || c->op != Comparator::Eq) continue;
    for (const auto* pair : {&c->lhs, &c->rhs}) {
      const Term& other = pair == &c->lhs ? c->rhs : c->lhs;
      if (pair->is_application() && pair->application().kind == FunctionKind::Characteristic &&
          std::holds_alternative<Truth>(other.node))
        add(pair->application().args);
    }
  }
  return out;
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.variable());
  if (t.is_application()) {
    out.insert(t.application().symbol);
    for (const auto& a : t.application().args) collect_names(a, out);
  }
}

void collect_names(const Literal& l, std::set<std::string>& out) {
  for (auto& v : variables_of(l)) out.insert(v);
  std::visit(
      [&](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Atom>) {
          for (const auto& t : b.args) collect_names(t, out);
        } else if constexpr (std::is_same_v<B, Comparison>) {
          collect_names(b.lhs, out);
          collect_names(b.rhs, out);
        } else {
          collect_names(b.arg, out);
        }
      },
      l.body);
}

std::string fresh(const std::string& prefix, std::size_t& counter, const std::set<std::string>& taken) {
  std::string name;
  do {
    name = prefix + std::to_string(++counter);
  } while (taken.contains(name));
  return name;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.is_variable()) {
    auto it = sub.find(t.variable());
    return it == sub.end() ? t : it->second;
  }
  if (t.is_application()) {
    Application a = t.application();
    for (auto& arg : a.args) arg = substitute(arg, sub);
    return Term{std::move(a)};
  }
  return t;
}

}  // namespace

void check_safety(const Tgd& tgd) {
  if (is_tautology(tgd)) return;
  auto bound = atom_variables(tgd.lhs);
  for (const auto& x : tgd.universals)
    if (!bound.contains(x))
      throw SafetyError("unsafe tgd: universal variable '" + x + "' occurs in no body atom: " + to_string(tgd));
}

void check_sotgd(const SOtgd& sotgd) {
  for (const auto& c : sotgd.conjuncts) {
    if (is_tautology(c)) continue;
    auto bound = atom_variables(c.lhs);
    for (const auto& x : c.universals)
      if (!bound.contains(x)) throw SafetyError("unsafe SOtgd conjunct: variable '" + x + "' occurs in no body atom");
    for (const auto& l : c.lhs) {
      if (!l.is_atom()) continue;
      for (const auto& t : l.atom().args)
        if (t.is_application())
          throw SafetyError("SOtgd body atom " + to_string(l.atom()) + " has a function term argument");
    }
  }
}

SOtgd skolemize(std::span<const Tgd> tgds) {
  std::set<std::string> taken;
  for (const auto& t : tgds) {
    for (const auto& l : t.lhs) collect_names(l, taken);
    for (const auto& a : t.rhs)
      for (const auto& arg : a.args) collect_names(arg, taken);
    taken.insert(t.universals.begin(), t.universals.end());
    taken.insert(t.rhs_existentials.begin(), t.rhs_existentials.end());
  }
  SOtgd out;
  std::size_t counter = 0;
  for (const auto& t : tgds) {
    check_safety(t);
    if (is_tautology(t)) {
      out.conjuncts.push_back(SOConjunct{{}, t.lhs, t.rhs, t.span});
      continue;
    }
    SOConjunct c;
    c.span = t.span;
    c.universals = t.universals;
    for (const auto& y : t.lhs_existentials)
      if (std::find(c.universals.begin(), c.universals.end(), y) == c.universals.end()) c.universals.push_back(y);
    c.lhs = t.lhs;
    std::vector<Term> args;
    for (const auto& x : c.universals) args.push_back(Term::var(x));
    std::map<std::string, Term> sub;
    for (const auto& z : t.rhs_existentials) {
      std::string f = fresh("f", counter, taken);
      taken.insert(f);
      out.functions.push_back({f, FunctionKind::Skolem});
      sub.emplace(z, Term::apply(f, FunctionKind::Skolem, args));
    }
    for (const auto& a : t.rhs) {
      Atom h = a;
      for (auto& arg : h.args) arg = substitute(arg, sub);
      c.rhs.push_back(std::move(h));
    }
    out.conjuncts.push_back(std::move(c));
  }
  return out;
}

SOtgd skolemize(std::span<const Dependency> deps) {
  std::vector<Tgd> tgds;
  for (const auto& d : deps) {
    if (!std::holds_alternative<Tgd>(d)) throw PreconditionError("egds cannot be Skolemized into an SOtgd");
    tgds.push_back(std::get<Tgd>(d));
  }
  return skolemize(std::span<const Tgd>(tgds));
}

NormalizedImplication hoist_constants(const NormalizedImplication& impl) {
  std::set<std::string> taken(impl.universals.begin(), impl.universals.end());
  for (const auto& l : impl.lhs) collect_names(l, taken);
  std::size_t counter = 0;
  NormalizedImplication out;
  out.head = impl.head;
  out.universals = impl.universals;
  std::vector<Literal> equalities;
  std::vector<Literal> rest;
  for (const auto& l : impl.lhs) {
    if (!l.is_atom()) {
      rest.push_back(l);
      continue;
    }
    Literal copy = l;
    Atom& a = std::get<Atom>(copy.body);
    for (auto& t : a.args) {
      if (!std::holds_alternative<Constant>(t.node) && !std::holds_alternative<Truth>(t.node)) continue;
      std::string y = fresh("y", counter, taken);
      taken.insert(y);
      out.universals.push_back(y);
      equalities.push_back(Literal{false, Comparison{Term::var(y), Comparator::Eq, t}, l.span});
      t = Term::var(y);
    }
    rest.push_back(std::move(copy));
  }
  out.lhs = std::move(equalities);
  out.lhs.insert(out.lhs.end(), rest.begin(), rest.end());
  return out;
}

std::vector<NormalizedImplication> normalize(const SOtgd& sotgd) {
  check_sotgd(sotgd);
  std::vector<NormalizedImplication> out;
  for (const auto& c : sotgd.conjuncts) {
    if (is_tautology(c)) {
      out.push_back(NormalizedImplication{{}, c.lhs, c.rhs.front()});
      continue;
    }
    for (const auto& h : c.rhs) out.push_back(hoist_constants(NormalizedImplication{c.universals, c.lhs, h}));
  }
  return out;
}

std::vector<NormalizedImplication> normalize(const Mapping& mapping) {
  if (mapping.is_sotgd()) return normalize(mapping.sotgd());
  return normalize(skolemize(std::span<const Dependency>(mapping.dependencies())));
}

TgdClass classify_tgd(const Tgd& tgd) {
  if (!tgd.rhs_existentials.empty()) return TgdClass::General;
  for (const auto& y : tgd.lhs_existentials) {
    std::size_t count = 0;
    std::function<void(const Term&)> visit = [&](const Term& t) {
      if (t.is_variable() && t.variable() == y) ++count;
      if (t.is_application())
        for (const auto& a : t.application().args) visit(a);
    };
    for (const auto& l : tgd.lhs)
      std::visit(
          [&](const auto& b) {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, Atom>) {
              for (const auto& t : b.args) visit(t);
            } else if constexpr (std::is_same_v<B, Comparison>) {
              visit(b.lhs);
              visit(b.rhs);
            } else {
              visit(b.arg);
            }
          },
          l.body);
    if (count > 1) return TgdClass::General;
  }
  return TgdClass::WeaklyFull;
}

}  // namespace dbmorph
