#include "support.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "dbmorph/logic/parser.hpp"
#include "dbmorph/logic/transform.hpp"

#ifndef DBMORPH_FIXTURE_DIR
#error "DBMORPH_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace testing_support {

std::string fixture_path(const std::string& relative) { return std::string(DBMORPH_FIXTURE_DIR) + "/" + relative; }

Project load_fixture(const std::string& name) { return load_project(fixture_path(name + "/project.json")); }

void for_seeds(std::uint64_t base, std::size_t count, const std::function<void(std::uint64_t, Rng&)>& body) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = base + i;
    Rng rng(seed);
    SCOPED_TRACE("seed " + std::to_string(seed));
    body(seed, rng);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

// ---- oracles -------------------------------------------------------------

std::string fnv_reference(const Tuple& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  bool first = true;
  for (const auto& v : values) {
    if (!first) feed(0x1F);
    first = false;
    std::string text;
    if (v.is_null())
      text = "NUL0";
    else if (v.is_int())
      text = std::to_string(v.as_int());
    else
      text = v.as_string();
    for (char c : text) feed(static_cast<unsigned char>(c));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const Relation* lookup(const std::string& name, const Instance& source, const Instance& target) {
  if (const Relation* r = source.find(name)) return r;
  if (const Relation* r = target.find(name)) return r;
  throw std::logic_error("oracle: unknown relation " + name);
}

struct NaiveEval {
  const Instance& source;
  const Instance& target;
  const SkolemTables& tables;

  Value term(const Term& t, const Assignment& g) const {
    if (t.is_variable()) return g.at(t.variable());
    if (auto* c = std::get_if<Constant>(&t.node)) return c->value;
    if (std::holds_alternative<Truth>(t.node)) return Value(1);
    const Application& app = t.application();
    Tuple args;
    for (const auto& a : app.args) args.push_back(term(a, g));
    switch (app.kind) {
      case FunctionKind::Hash:
        return Value(fnv_reference(args));
      case FunctionKind::Characteristic: {
        std::string rel = app.symbol.substr(2);
        return Value(lookup(rel, source, target)->contains(args) ? 1 : 0);
      }
      case FunctionKind::Skolem: {
        const FunctionTable& table = tables.at(app.symbol);
        auto it = table.entries.find(args);
        if (it != table.entries.end()) return it->second;
        if (table.fallback) return *table.fallback;
        throw std::logic_error("oracle: no table entry for " + app.symbol);
      }
    }
    return {};
  }

  static bool comparison(const Value& a, Comparator op, const Value& b) {
    if (a.is_null() || b.is_null()) return false;
    if (op == Comparator::Eq) return a == b;
    if (op == Comparator::Ne) return !(a == b);
    if (!a.is_int() || !b.is_int()) return false;
    const auto x = a.as_int(), y = b.as_int();
    switch (op) {
      case Comparator::Lt: return x < y;
      case Comparator::Gt: return x > y;
      case Comparator::Le: return x <= y;
      case Comparator::Ge: return x >= y;
      default: return false;
    }
  }

  bool literal(const Literal& l, const Assignment& g) const {
    bool value = false;
    if (l.is_atom()) {
      Tuple row;
      for (const auto& a : l.atom().args) row.push_back(term(a, g));
      value = lookup(l.atom().relation, source, target)->contains(row);
    } else if (auto* c = std::get_if<Comparison>(&l.body)) {
      value = comparison(term(c->lhs, g), c->op, term(c->rhs, g));
    } else {
      value = !term(std::get<NotNull>(l.body).arg, g).is_null();
    }
    return l.negated ? !value : value;
  }
};

}  // namespace

std::set<Tuple> naive_image(const NormalizedImplication& impl, const Instance& source, const Instance& target,
                            const SkolemTables& tables, const std::vector<Value>& domain) {
  std::set<Tuple> out;
  if (impl.head.relation == kEmptyRelation) return out;
  NaiveEval ev{source, target, tables};
  const auto& vars = impl.universals;
  std::vector<std::size_t> odometer(vars.size(), 0);
  while (true) {
    Assignment g;
    for (std::size_t i = 0; i < vars.size(); ++i) g[vars[i]] = domain[odometer[i]];
    // Relational atoms first so Skolem lookups only happen on real matches.
    bool ok = true;
    for (const auto& l : impl.lhs)
      if (l.is_atom() && !ev.literal(l, g)) ok = false;
    if (ok)
      for (const auto& l : impl.lhs)
        if (!l.is_atom() && !ev.literal(l, g)) {
          ok = false;
          break;
        }
    if (ok) {
      Tuple t;
      for (const auto& a : impl.head.args) t.push_back(ev.term(a, g));
      out.insert(t);
    }
    std::size_t k = 0;
    while (k < odometer.size() && ++odometer[k] == domain.size()) odometer[k++] = 0;
    if (k == odometer.size()) break;
  }
  return out;
}

Tuple first_occurrence_scan(const std::vector<std::vector<std::string>>& place_args, const std::vector<Tuple>& tuples) {
  std::set<std::string> seen;
  Tuple out;
  for (std::size_t j = 0; j < place_args.size(); ++j)
    for (std::size_t i = 0; i < place_args[j].size(); ++i)
      if (seen.insert(place_args[j][i]).second) out.push_back(tuples[j][i]);
  return out;
}

std::set<Tuple> positional_selection(const std::set<Tuple>& rows, const std::vector<std::size_t>& positions,
                                     const Tuple& output) {
  std::set<Tuple> out;
  for (const auto& r : rows) {
    bool match = true;
    for (auto p : positions) match = match && r[p - 1] == output[p - 1];
    if (match) out.insert(r);
  }
  return out;
}

// ---- generators ----------------------------------------------------------

Table random_table(Rng& rng, std::size_t arity, const std::vector<Value>& values, std::size_t max_rows) {
  Table t{arity, {}};
  const std::size_t n = rng.between(0, max_rows);
  for (std::size_t i = 0; i < n; ++i) {
    Tuple row;
    for (std::size_t c = 0; c < arity; ++c) row.push_back(rng.pick(values));
    t.rows.insert(row);
  }
  return t;
}

Instance random_instance(Rng& rng, const Schema& schema, const std::vector<Value>& values, std::size_t max_rows) {
  Instance inst(schema);
  for (const auto& sym : schema.symbols()) {
    if (sym.name == kEmptyRelation) continue;
    Table t = random_table(rng, sym.arity(), values, max_rows);
    for (const auto& r : t.rows) inst.insert(sym.name, r);
  }
  return inst;
}

namespace {

std::string literal_text(const Value& v) { return v.is_int() ? std::to_string(v.as_int()) : "\"" + v.as_string() + "\""; }

std::vector<std::string> columns(std::size_t n) {
  std::vector<std::string> c;
  for (std::size_t i = 1; i <= n; ++i) c.push_back("c" + std::to_string(i));
  return c;
}

}  // namespace

RandomFixture random_fixture(Rng& rng, const FixtureShape& shape) {
  RandomFixture f;
  const std::size_t n = rng.between(2, shape.max_domain);
  for (std::size_t i = 0; i < n; ++i)
    f.domain.push_back(i % 3 == 2 ? Value("s" + std::to_string(i)) : Value(static_cast<std::int64_t>(i)));

  f.source = Schema("S");
  const std::size_t source_relations = rng.between(1, 2);
  std::vector<std::pair<std::string, std::size_t>> src_syms;
  for (std::size_t i = 1; i <= source_relations; ++i) {
    std::string name = "R" + std::to_string(i);
    std::size_t arity = rng.between(1, 2);
    f.source.add_symbol({name, columns(arity)});
    src_syms.emplace_back(name, arity);
  }
  f.target = Schema("T");
  const std::size_t target_arity = rng.between(1, 3);
  f.target.add_symbol({"B", columns(target_arity)});

  f.src = random_instance(rng, f.source, f.domain, shape.max_rows);

  const std::size_t skolems = rng.between(1, shape.max_skolem);
  std::vector<std::size_t> skolem_arity;
  for (std::size_t k = 0; k < skolems; ++k) skolem_arity.push_back(rng.between(1, 2));
  std::set<std::size_t> used;

  const std::vector<std::string> pool = {"x", "y", "z"};
  std::vector<std::string> conjuncts;
  const std::size_t count = rng.between(1, shape.max_conjuncts);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::string> body;
    std::vector<std::string> universals;
    auto use = [&universals](const std::string& v) {
      if (std::find(universals.begin(), universals.end(), v) == universals.end()) universals.push_back(v);
    };
    const std::size_t atoms = rng.between(1, 2);
    for (std::size_t a = 0; a < atoms; ++a) {
      const auto& [name, arity] = rng.pick(src_syms);
      std::string text = name + "(";
      bool has_var = false;
      for (std::size_t p = 0; p < arity; ++p) {
        if (p) text += ", ";
        if (!(p + 1 == arity && !has_var) && rng.chance(0.1)) {
          text += literal_text(rng.pick(f.domain));
        } else {
          const std::string& v = rng.pick(pool);
          text += v;
          use(v);
          has_var = true;
        }
      }
      body.push_back(text + ")");
    }
    if (universals.size() >= 2 && rng.chance(0.2)) body.push_back(universals[0] + " != " + universals[1]);

    std::string head = "B(";
    for (std::size_t p = 0; p < target_arity; ++p) {
      if (p) head += ", ";
      if (rng.chance(0.5)) {
        head += rng.pick(universals);
      } else {
        const std::size_t k = rng.below(skolems);
        used.insert(k);
        head += "f" + std::to_string(k + 1) + "(";
        for (std::size_t a = 0; a < skolem_arity[k]; ++a) head += (a ? ", " : "") + rng.pick(universals);
        head += ")";
      }
    }
    head += ")";
    std::string text = "forall ";
    for (std::size_t i = 0; i < universals.size(); ++i) text += (i ? ", " : "") + universals[i];
    text += " . ";
    for (std::size_t i = 0; i < body.size(); ++i) text += (i ? " & " : "") + body[i];
    conjuncts.push_back(text + " -> " + head);
  }

  f.text = "exists ";
  bool first = true;
  for (auto k : used) {
    f.text += (first ? "" : ", ") + std::string("f") + std::to_string(k + 1);
    first = false;
  }
  f.text += " .\n";
  for (std::size_t i = 0; i < conjuncts.size(); ++i) f.text += (i ? "  && " : "  ") + conjuncts[i] + "\n";

  for (auto k : used) {
    FunctionTable table;
    std::vector<std::size_t> odo(skolem_arity[k], 0);
    while (true) {
      Tuple args;
      for (auto i : odo) args.push_back(f.domain[i]);
      table.entries[args] = rng.pick(f.domain);
      std::size_t j = 0;
      while (j < odo.size() && ++odo[j] == f.domain.size()) odo[j++] = 0;
      if (j == odo.size()) break;
    }
    f.tables.emplace("f" + std::to_string(k + 1), std::move(table));
  }

  MappingContext ctx{&f.source, &f.target, {}};
  f.impls = normalize(parse_mapping(f.text, ctx));
  f.arrow = make_operads(f.impls, f.source, f.target, "M");

  Instance empty_target(f.target);
  f.tgt = Instance(f.target);
  for (const auto& impl : f.impls)
    for (const auto& t : naive_image(impl, f.src, empty_target, f.tables, f.domain)) f.tgt.insert("B", t);
  if (rng.chance(shape.extra_target_rows)) {
    const std::size_t extra = rng.between(1, 3);
    for (std::size_t i = 0; i < extra; ++i) {
      Tuple row;
      // Extra rows often share a prefix with an image row so that saturation
      // has candidates to add.
      const auto& rows = f.tgt.relation("B").rows();
      if (!rows.empty() && rng.chance(0.7)) {
        auto it = rows.begin();
        std::advance(it, static_cast<long>(rng.below(rows.size())));
        row = *it;
        row[rng.below(row.size())] = rng.pick(f.domain);
      } else {
        for (std::size_t c = 0; c < target_arity; ++c) row.push_back(rng.pick(f.domain));
      }
      f.tgt.insert("B", row);
    }
  }
  return f;
}

}  // namespace testing_support
