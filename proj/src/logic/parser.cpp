#include "dbmorph/logic/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>

#include "dbmorph/errors.hpp"

namespace dbmorph {

std::string characteristic_relation(const std::string& symbol) {
  return symbol.rfind("f_", 0) == 0 ? symbol.substr(2) : std::string();
}

Atom empty_atom() { return Atom{kEmptyRelation, {}, {}}; }

bool is_tautology(const SOConjunct& c) {
  return c.universals.empty() && c.lhs.size() == 1 && c.lhs[0].is_atom() && !c.lhs[0].negated &&
         c.lhs[0].atom() == empty_atom() && c.rhs.size() == 1 && c.rhs[0] == empty_atom();
}

bool is_tautology(const Tgd& t) {
  return t.universals.empty() && t.lhs_existentials.empty() && t.rhs_existentials.empty() && t.lhs.size() == 1 &&
         t.lhs[0].is_atom() && !t.lhs[0].negated && t.lhs[0].atom() == empty_atom() && t.rhs.size() == 1 &&
         t.rhs[0] == empty_atom();
}

void collect_variables(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.variable()) == out.end()) out.push_back(t.variable());
  } else if (t.is_application()) {
    for (const auto& a : t.application().args) collect_variables(a, out);
  }
}

std::vector<std::string> variables_of(const Literal& l) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& body) {
        using B = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<B, Atom>) {
          for (const auto& a : body.args) collect_variables(a, out);
        } else if constexpr (std::is_same_v<B, Comparison>) {
          collect_variables(body.lhs, out);
          collect_variables(body.rhs, out);
        } else {
          collect_variables(body.arg, out);
        }
      },
      l.body);
  return out;
}

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Dot, Amp, AmpAmp, Arrow, Cmp, End };

struct Token {
  Token(Tok k, std::string t, Span at, Comparator c = Comparator::Eq, Value v = {})
      : kind(k), text(std::move(t)), span(at), cmp(c), value(std::move(v)) {}

  Tok kind;
  std::string text;
  Span span;
  Comparator cmp = Comparator::Eq;
  Value value;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span at{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", at});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), at});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        out.push_back(number(at));
      } else if (c == '"') {
        out.push_back(string(at));
      } else {
        out.push_back(punct(at));
      }
    }
  }

 private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token number(Span at) {
    std::size_t start = pos_;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ < src_.size() && is_ident_char(src_[pos_])) throw ParseError("malformed number", at.line, at.column);
    std::string text(src_.substr(start, pos_ - start));
    Token t{Tok::Number, text, at};
    std::string_view digits = text[0] == '-' ? std::string_view(text).substr(1) : std::string_view(text);
    // Leading zeros are significant (zip codes and the like): keep such literals as strings.
    if (digits.size() > 1 && digits[0] == '0') {
      t.value = Value(text);
      return t;
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
      throw ParseError("integer literal out of range", at.line, at.column);
    t.value = Value(v);
    return t;
  }

  Token string(Span at) {
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= src_.size()) throw ParseError("unterminated string", at.line, at.column);
      char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw ParseError("unterminated string", at.line, at.column);
        char e = src_[pos_];
        if (e == 'n')
          out += '\n';
        else if (e == 't')
          out += '\t';
        else
          out += e;
        advance();
        continue;
      }
      out += c;
      advance();
    }
    Token t{Tok::String, out, at};
    t.value = Value(out);
    return t;
  }

  Token punct(Span at) {
    auto two = [&](std::string_view s) { return src_.substr(pos_, 2) == s; };
    auto make = [&](Tok k, std::size_t n, Comparator cmp = Comparator::Eq) {
      Token t{k, std::string(src_.substr(pos_, n)), at};
      t.cmp = cmp;
      for (std::size_t i = 0; i < n; ++i) advance();
      return t;
    };
    if (two("&&")) return make(Tok::AmpAmp, 2);
    if (two("->")) return make(Tok::Arrow, 2);
    if (two("<=")) return make(Tok::Cmp, 2, Comparator::Le);
    if (two(">=")) return make(Tok::Cmp, 2, Comparator::Ge);
    if (two("!=")) return make(Tok::Cmp, 2, Comparator::Ne);
    switch (src_[pos_]) {
      case '(': return make(Tok::LParen, 1);
      case ')': return make(Tok::RParen, 1);
      case ',': return make(Tok::Comma, 1);
      case '.': return make(Tok::Dot, 1);
      case '&': return make(Tok::Amp, 1);
      case '=': return make(Tok::Cmp, 1, Comparator::Eq);
      case '<': return make(Tok::Cmp, 1, Comparator::Lt);
      case '>': return make(Tok::Cmp, 1, Comparator::Gt);
      default: break;
    }
    throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", at.line, at.column);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string, std::less<>> kKeywords = {"exists", "forall", "not", "taut", "null"};

// A parsed conjunct before it is classified as tgd, egd or SOtgd member.
struct RawConjunct {
  bool tautology = false;
  std::vector<std::string> universals;
  std::vector<std::string> lhs_existentials;
  std::vector<Literal> lhs;
  std::vector<std::string> rhs_existentials;
  std::vector<Atom> head_atoms;
  std::vector<std::pair<Comparison, Span>> head_equalities;
  Span span;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const MappingContext& ctx) : toks_(std::move(toks)), ctx_(ctx) {}

  Mapping run() {
    bool so = false;
    if (is_keyword("exists")) {
      so = true;
      next();
      if (peek().kind != Tok::Dot) {
        do {
          const Token& t = expect_ident("function symbol");
          functions_.push_back(t.text);
        } while (accept(Tok::Comma));
      }
      expect(Tok::Dot, "'.'");
    }
    std::vector<RawConjunct> raws;
    do {
      raws.push_back(conjunct(so));
    } while (accept(Tok::AmpAmp));
    if (peek().kind != Tok::End) fail("expected '&&' or end of input");

    if (so) return Mapping{build_sotgd(raws)};
    std::vector<Dependency> deps;
    for (auto& r : raws) deps.push_back(build_dependency(r));
    return Mapping{std::move(deps)};
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  bool is_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek().span); }
  [[noreturn]] static void fail_at(const std::string& msg, Span s) { throw ParseError(msg, s.line, s.column); }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::Ident || kKeywords.contains(peek().text)) fail(std::string("expected ") + what);
    return next();
  }

  std::vector<std::string> var_list(bool allow_empty) {
    std::vector<std::string> vars;
    if (allow_empty && peek().kind == Tok::Dot) return vars;
    do {
      vars.push_back(expect_ident("variable").text);
    } while (accept(Tok::Comma));
    return vars;
  }

  RawConjunct conjunct(bool so) {
    RawConjunct c;
    c.span = peek().span;
    if (is_keyword("taut")) {
      next();
      c.tautology = true;
      return c;
    }
    if (!is_keyword("forall")) fail("expected 'forall' or 'taut'");
    next();
    c.universals = var_list(true);
    expect(Tok::Dot, "'.'");
    if (is_keyword("exists")) {
      if (so) fail("inner existentials are not allowed in an SOtgd");
      next();
      c.lhs_existentials = var_list(false);
      expect(Tok::Dot, "'.'");
    }
    do {
      c.lhs.push_back(literal());
    } while (accept(Tok::Amp));
    expect(Tok::Arrow, "'->'");
    if (is_keyword("exists")) {
      if (so) fail("head existentials are not allowed in an SOtgd; use a Skolem function");
      next();
      c.rhs_existentials = var_list(false);
      expect(Tok::Dot, "'.'");
    }
    do {
      head_item(c);
    } while (accept(Tok::Amp));
    check_bindings(c);
    return c;
  }

  struct Call {
    std::string name;
    std::vector<Term> args;
    Span span;
  };

  Call call() {
    Call c;
    c.span = peek().span;
    c.name = expect_ident("identifier").text;
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      do {
        c.args.push_back(term());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    return c;
  }

  bool at_call() const {
    return peek().kind == Tok::Ident && !kKeywords.contains(peek().text) && peek(1).kind == Tok::LParen;
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
      case Tok::String: {
        Term out = Term::constant(t.value);
        next();
        return out;
      }
      case Tok::Ident:
        if (t.text == "null") {
          next();
          return Term::constant(Value::null());
        }
        if (kKeywords.contains(t.text)) fail("unexpected keyword '" + t.text + "'");
        if (at_call()) return to_term(call());
        return Term::var(next().text);
      default:
        fail("expected a term");
    }
  }

  Term to_term(Call c) {
    FunctionKind kind = resolve_function(c.name, c.span, c.args.size());
    return Term::apply(std::move(c.name), kind, std::move(c.args));
  }

  // Relation named by f_R, if R is known.
  std::optional<std::size_t> characteristic_arity(const std::string& name) const {
    std::string rel = characteristic_relation(name);
    if (rel.empty()) return std::nullopt;
    if (ctx_.source || ctx_.target) {
      std::vector<const Schema*> schemas{ctx_.source, ctx_.target};
      schemas.insert(schemas.end(), ctx_.auxiliary.begin(), ctx_.auxiliary.end());
      for (const Schema* s : schemas)
        if (s)
          if (const auto* sym = s->find(rel)) return sym->arity();
      return std::nullopt;
    }
    return std::size_t{0};
  }

  FunctionKind resolve_function(const std::string& name, Span at, std::size_t nargs) {
    bool declared = std::find(functions_.begin(), functions_.end(), name) != functions_.end();
    auto char_arity = characteristic_arity(name);
    if (char_arity && (ctx_.source || ctx_.target || !declared)) {
      if ((ctx_.source || ctx_.target) && *char_arity != nargs)
        fail_at("characteristic function " + name + " expects " + std::to_string(*char_arity) + " arguments", at);
      return FunctionKind::Characteristic;
    }
    if (declared) return FunctionKind::Skolem;
    if (name == "hash") return FunctionKind::Hash;
    fail_at("unknown function symbol '" + name + "'", at);
  }

  void check_relation(const Atom& a, bool head) {
    if (a.relation == kEmptyRelation) fail_at("r_empty is reserved; write 'taut'", a.span);
    if (!ctx_.source && !ctx_.target) {
      auto [it, fresh] = arities_.emplace(a.relation, a.args.size());
      if (!fresh && it->second != a.args.size())
        fail_at("relation " + a.relation + " used with arity " + std::to_string(a.args.size()) + " and " +
                    std::to_string(it->second),
                a.span);
      return;
    }
    const RelationSymbol* sym = nullptr;
    if (!head && ctx_.source) sym = ctx_.source->find(a.relation);
    if (!sym && ctx_.target) sym = ctx_.target->find(a.relation);
    if (!sym) fail_at(std::string("unknown ") + (head ? "target " : "") + "relation '" + a.relation + "'", a.span);
    if (sym->arity() != a.args.size())
      fail_at("relation " + a.relation + " has arity " + std::to_string(sym->arity()) + ", got " +
                  std::to_string(a.args.size()),
              a.span);
  }

  static void mark_truth(Comparison& c) {
    auto is_char = [](const Term& t) {
      return t.is_application() && t.application().kind == FunctionKind::Characteristic;
    };
    auto is_one = [](const Term& t) {
      auto* k = std::get_if<Constant>(&t.node);
      return k && k->value == Value(1);
    };
    if (is_char(c.lhs) && is_one(c.rhs)) c.rhs = Term::truth();
    if (is_char(c.rhs) && is_one(c.lhs)) c.lhs = Term::truth();
  }

  Literal literal() {
    Literal lit;
    lit.span = peek().span;
    if (is_keyword("not")) {
      next();
      lit.negated = true;
    }
    if (at_call()) {
      Call c = call();
      if (peek().kind == Tok::Cmp) {
        Comparison cmp{to_term(std::move(c)), next().cmp, term()};
        mark_truth(cmp);
        lit.body = std::move(cmp);
        return lit;
      }
      if (c.name == "notnull") {
        if (c.args.size() != 1) fail_at("notnull takes one argument", c.span);
        lit.body = NotNull{std::move(c.args[0])};
        return lit;
      }
      Atom a{std::move(c.name), std::move(c.args), c.span};
      check_relation(a, false);
      lit.body = std::move(a);
      return lit;
    }
    Term lhs = term();
    if (peek().kind != Tok::Cmp) fail("expected a comparison operator");
    Comparison cmp{std::move(lhs), next().cmp, term()};
    mark_truth(cmp);
    lit.body = std::move(cmp);
    return lit;
  }

  void head_item(RawConjunct& c) {
    Span at = peek().span;
    if (at_call()) {
      Call call_ = call();
      if (peek().kind != Tok::Cmp) {
        Atom a{std::move(call_.name), std::move(call_.args), call_.span};
        check_relation(a, true);
        c.head_atoms.push_back(std::move(a));
        return;
      }
      Comparison cmp{to_term(std::move(call_)), next().cmp, term()};
      c.head_equalities.emplace_back(std::move(cmp), at);
      return;
    }
    Term lhs = term();
    if (peek().kind != Tok::Cmp) fail("expected an atom or an equality");
    Comparison cmp{std::move(lhs), next().cmp, term()};
    c.head_equalities.emplace_back(std::move(cmp), at);
  }

  void check_bindings(const RawConjunct& c) const {
    std::set<std::string> body(c.universals.begin(), c.universals.end());
    body.insert(c.lhs_existentials.begin(), c.lhs_existentials.end());
    for (const auto& l : c.lhs)
      for (const auto& v : variables_of(l))
        if (!body.contains(v)) fail_at("variable '" + v + "' is not bound by any quantifier", l.span);
    std::set<std::string> head(c.universals.begin(), c.universals.end());
    head.insert(c.rhs_existentials.begin(), c.rhs_existentials.end());
    for (const auto& a : c.head_atoms) {
      std::vector<std::string> vs;
      for (const auto& t : a.args) collect_variables(t, vs);
      for (const auto& v : vs)
        if (!head.contains(v)) fail_at("variable '" + v + "' is not bound by any quantifier", a.span);
    }
    for (const auto& [cmp, at] : c.head_equalities) {
      std::vector<std::string> vs;
      collect_variables(cmp.lhs, vs);
      collect_variables(cmp.rhs, vs);
      for (const auto& v : vs)
        if (!head.contains(v)) fail_at("variable '" + v + "' is not bound by any quantifier", at);
    }
  }

  SOtgd build_sotgd(std::vector<RawConjunct>& raws) const {
    SOtgd out;
    for (const auto& f : functions_) {
      bool characteristic = characteristic_arity(f).has_value() && (ctx_.source || ctx_.target);
      out.functions.push_back({f, characteristic ? FunctionKind::Characteristic : FunctionKind::Skolem});
    }
    for (auto& r : raws) {
      if (r.tautology) {
        out.conjuncts.push_back(SOConjunct{{}, {Literal{false, empty_atom(), {}}}, {empty_atom()}, r.span});
        continue;
      }
      if (!r.head_equalities.empty()) fail_at("an SOtgd head must be a conjunction of atoms", r.head_equalities[0].second);
      out.conjuncts.push_back(SOConjunct{std::move(r.universals), std::move(r.lhs), std::move(r.head_atoms), r.span});
    }
    return out;
  }

  Dependency build_dependency(RawConjunct& r) const {
    if (r.tautology) return Tgd{{}, {}, {Literal{false, empty_atom(), {}}}, {}, {empty_atom()}, r.span};
    if (!r.head_equalities.empty()) {
      if (!r.head_atoms.empty()) fail_at("a head mixes atoms and equalities", r.head_equalities[0].second);
      if (!r.lhs_existentials.empty() || !r.rhs_existentials.empty())
        fail_at("an egd has no existential quantifiers", r.span);
      Egd e{std::move(r.universals), {}, {}, r.span};
      for (auto& l : r.lhs) {
        if (!l.is_atom() || l.negated) fail_at("an egd body is a conjunction of relational atoms", l.span);
        e.lhs.push_back(std::get<Atom>(std::move(l.body)));
      }
      for (auto& [cmp, at] : r.head_equalities) {
        if (cmp.op != Comparator::Eq || !cmp.lhs.is_variable() || !cmp.rhs.is_variable())
          fail_at("an egd head equates variables with '='", at);
        e.equalities.emplace_back(cmp.lhs.variable(), cmp.rhs.variable());
      }
      return e;
    }
    return Tgd{std::move(r.universals), std::move(r.lhs_existentials), std::move(r.lhs),
               std::move(r.rhs_existentials), std::move(r.head_atoms), r.span};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  MappingContext ctx_;
  std::vector<std::string> functions_;
  std::map<std::string, std::size_t> arities_;
};

}  // namespace

Mapping parse_mapping(std::string_view text, const MappingContext& ctx) {
  return Parser(Lexer(text).run(), ctx).run();
}

std::vector<Dependency> parse_constraints(std::string_view text, const Schema& schema) {
  Mapping m = parse_mapping(text, MappingContext{&schema, &schema, {}});
  if (m.is_sotgd()) throw ParseError("integrity constraints cannot be SOtgds", 1, 1);
  return m.dependencies();
}

}  // namespace dbmorph
