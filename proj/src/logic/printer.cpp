#include <sstream>

#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

template <typename Range, typename F>
std::string join(const Range& r, const std::string& sep, F f) {
  std::string out;
  bool first = true;
  for (const auto& x : r) {
    if (!first) out += sep;
    first = false;
    out += f(x);
  }
  return out;
}

std::string ident(const std::string& s) { return s; }

}  // namespace

std::string to_string(Comparator c) {
  switch (c) {
    case Comparator::Eq: return "=";
    case Comparator::Lt: return "<";
    case Comparator::Gt: return ">";
    case Comparator::Le: return "<=";
    case Comparator::Ge: return ">=";
    case Comparator::Ne: return "!=";
  }
  return "?";
}

std::string to_string(const Term& t) {
  return std::visit(
      [](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Variable>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, Constant>) {
          if (n.value.is_null()) return "null";
          if (n.value.is_int()) return std::to_string(n.value.as_int());
          return quote(n.value.as_string());
        } else if constexpr (std::is_same_v<N, Truth>) {
          return "1";
        } else {
          return n.symbol + "(" + join(n.args, ", ", [](const Term& a) { return to_string(a); }) + ")";
        }
      },
      t.node);
}

std::string to_string(const Atom& a) {
  return a.relation + "(" + join(a.args, ", ", [](const Term& t) { return to_string(t); }) + ")";
}

std::string to_string(const Literal& l) {
  std::string body = std::visit(
      [](const auto& b) -> std::string {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Atom>) {
          return to_string(b);
        } else if constexpr (std::is_same_v<B, Comparison>) {
          return to_string(b.lhs) + " " + to_string(b.op) + " " + to_string(b.rhs);
        } else {
          return "notnull(" + to_string(b.arg) + ")";
        }
      },
      l.body);
  return l.negated ? "not " + body : body;
}

namespace {

std::string lits(const std::vector<Literal>& ls) {
  return join(ls, " & ", [](const Literal& l) { return to_string(l); });
}

std::string atoms(const std::vector<Atom>& as) {
  return join(as, " & ", [](const Atom& a) { return to_string(a); });
}

std::string forall(const std::vector<std::string>& vars) {
  return vars.empty() ? "forall . " : "forall " + join(vars, ", ", ident) + " . ";
}

}  // namespace

std::string to_string(const Tgd& t) {
  if (is_tautology(t)) return "taut";
  std::string out = forall(t.universals);
  if (!t.lhs_existentials.empty()) out += "exists " + join(t.lhs_existentials, ", ", ident) + " . ";
  out += lits(t.lhs) + " -> ";
  if (!t.rhs_existentials.empty()) out += "exists " + join(t.rhs_existentials, ", ", ident) + " . ";
  return out + atoms(t.rhs);
}

std::string to_string(const Egd& e) {
  return forall(e.universals) + atoms(e.lhs) + " -> " +
         join(e.equalities, " & ", [](const auto& p) { return p.first + " = " + p.second; });
}

std::string to_string(const Dependency& d) {
  return std::visit([](const auto& x) { return to_string(x); }, d);
}

std::string to_string(const SOtgd& s) {
  std::string out = "exists";
  if (!s.functions.empty()) out += " " + join(s.functions, ", ", [](const FunctionDecl& f) { return f.name; });
  out += " . ";
  out += join(s.conjuncts, " && ", [](const SOConjunct& c) {
    if (is_tautology(c)) return std::string("taut");
    return forall(c.universals) + lits(c.lhs) + " -> " + atoms(c.rhs);
  });
  return out;
}

std::string to_string(const NormalizedImplication& n) {
  if (n.head.relation == kEmptyRelation && n.universals.empty()) return "taut";
  return forall(n.universals) + lits(n.lhs) + " -> " + to_string(n.head);
}

std::string to_string(const Mapping& m) {
  if (m.is_sotgd()) return to_string(m.sotgd());
  return join(m.dependencies(), " && ", [](const Dependency& d) { return to_string(d); });
}

}  // namespace dbmorph
