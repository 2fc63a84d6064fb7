#include "dbmorph/irdb.hpp"

#include <cstdint>
#include <map>

#include "dbmorph/errors.hpp"

namespace dbmorph {

std::string hash_tuple(std::span<const Value> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) feed(std::string(1, '\x1f'));
    feed(values[i].is_null() ? std::string("NUL0") : values[i].render());
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

RelationSymbol vector_symbol() { return {kVectorRelation, {"r-name", "t-index", "a-name", "value"}}; }

Schema vector_schema(std::string name) { return Schema(std::move(name), {vector_symbol()}); }

std::set<VectorTuple> parse_tuple(const RelationSymbol& symbol, const Tuple& row) {
  if (row.size() != symbol.arity())
    throw SchemaError("PARSE: row " + render(row) + " does not have the arity of " + symbol.name);
  std::set<VectorTuple> out;
  const std::string index = hash_tuple(row);
  for (std::size_t i = 0; i < row.size(); ++i)
    if (!row[i].is_null()) out.insert({symbol.name, index, symbol.columns[i], row[i]});
  return out;
}

Relation parse_database(const Instance& inst, Execution exec) {
  std::vector<std::pair<const RelationSymbol*, const Tuple*>> work;
  for (const auto& [name, rel] : inst.relations()) {
    if (name == kEmptyRelation) continue;
    for (const auto& row : rel.rows()) work.emplace_back(&rel.symbol(), &row);
  }
  std::vector<std::set<VectorTuple>> parts(work.size());
  for_each_index(
      work.size(), [&](std::size_t i) { parts[i] = parse_tuple(*work[i].first, *work[i].second); }, exec);
  Relation out(vector_symbol());
  for (const auto& part : parts)
    for (const auto& v : part) out.insert(v.row());
  return out;
}

std::vector<Tgd> opposite_mapping(const Schema& schema) {
  std::vector<Tgd> out;
  for (const auto& sym : schema.symbols()) {
    if (sym.name == kEmptyRelation) continue;
    std::vector<std::string> vars;
    std::vector<Term> args;
    for (std::size_t i = 1; i <= sym.arity(); ++i) {
      vars.push_back("x" + std::to_string(i));
      args.push_back(Term::var(vars.back()));
    }
    for (std::size_t i = 0; i < sym.arity(); ++i) {
      Tgd t;
      t.universals = vars;
      t.lhs.push_back(Literal{false, Atom{sym.name, args, {}}, {}});
      t.lhs.push_back(Literal{false, NotNull{args[i]}, {}});
      t.rhs.push_back(Atom{kVectorRelation,
                           {Term::constant(sym.name), Term::apply("hash", FunctionKind::Hash, args),
                            Term::constant(sym.columns[i]), args[i]},
                           {}});
      out.push_back(std::move(t));
    }
  }
  return out;
}

Instance reconstruct(const Relation& vector, const Schema& schema) {
  std::map<std::pair<std::string, std::string>, std::map<std::string, Value>> groups;
  for (const auto& row : vector.rows()) {
    if (row.size() != 4 || !row[0].is_string() || !row[1].is_string() || !row[2].is_string())
      throw SchemaError("malformed vector tuple " + render(row));
    auto& cols = groups[{row[0].as_string(), row[1].as_string()}];
    auto [it, fresh] = cols.emplace(row[2].as_string(), row[3]);
    if (!fresh && it->second != row[3])
      throw SchemaError("vector group " + row[1].as_string() + " assigns two values to " + row[2].as_string());
  }
  Instance out(schema);
  for (const auto& [key, cols] : groups) {
    const RelationSymbol* sym = schema.find(key.first);
    if (!sym || sym->name == kEmptyRelation) throw SchemaError("vector tuple names unknown relation " + key.first);
    Tuple row(sym->arity());
    std::size_t seen = 0;
    for (std::size_t i = 0; i < sym->arity(); ++i) {
      auto it = cols.find(sym->columns[i]);
      if (it != cols.end()) {
        row[i] = it->second;
        ++seen;
      }
    }
    if (seen != cols.size()) throw SchemaError("vector tuple names an unknown column of " + sym->name);
    out.insert(sym->name, std::move(row));
  }
  return out;
}

}  // namespace dbmorph
