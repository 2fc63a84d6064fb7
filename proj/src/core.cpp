#include "dbmorph/core.hpp"

#include <algorithm>
#include <functional>

#include "dbmorph/errors.hpp"

namespace dbmorph {

// ---- Value ---------------------------------------------------------------

std::string Value::render() const {
  if (is_null()) return "null";
  if (is_int()) return std::to_string(as_int());
  return as_string();
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.data_.index() <=> b.data_.index(); c != 0) return c;
  if (a.is_int()) return a.as_int() <=> b.as_int();
  if (a.is_string()) return a.as_string().compare(b.as_string()) <=> 0;
  return std::strong_ordering::equal;
}

std::string render(const Tuple& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].render();
  }
  return out + ">";
}

std::size_t hash_value(const Value& v) noexcept {
  if (v.is_null()) return 0x9e3779b97f4a7c15ULL;
  if (v.is_int()) return std::hash<std::int64_t>{}(v.as_int()) ^ 0x51ed27ULL;
  return std::hash<std::string>{}(v.as_string());
}

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
  std::size_t h = t.size();
  for (const auto& v : t) h ^= hash_value(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// ---- Symbols and tables --------------------------------------------------

void validate_symbol(const RelationSymbol& symbol) {
  if (symbol.name.empty()) throw SchemaError("relation symbol without a name");
  if (symbol.arity() == 0 && symbol.name != kEmptyRelation)
    throw SchemaError("relation " + symbol.name + " must have arity >= 1");
  if (symbol.name == kEmptyRelation && symbol.arity() != 0)
    throw SchemaError(std::string(kEmptyRelation) + " is nullary");
  std::set<std::string> seen;
  for (const auto& c : symbol.columns)
    if (!seen.insert(c).second) throw SchemaError("duplicate column " + c + " in " + symbol.name);
}

RelationSymbol empty_symbol() { return RelationSymbol{kEmptyRelation, {}}; }

Table bottom_table() { return Table{0, {Tuple{}}}; }

std::string render(const Table& t) {
  std::string out = "{";
  bool first = true;
  for (const auto& row : t.rows) {
    if (!first) out += ", ";
    first = false;
    out += render(row);
  }
  return out + "}/" + std::to_string(t.arity);
}

Relation::Relation(RelationSymbol symbol) : symbol_(std::move(symbol)) {
  if (symbol_.arity() == 0) rows_.insert(Tuple{});
}

Relation::Relation(RelationSymbol symbol, std::set<Tuple> rows) : symbol_(std::move(symbol)) {
  for (auto& r : rows) insert(r);
  if (symbol_.arity() == 0) rows_.insert(Tuple{});
}

bool Relation::insert(Tuple row) {
  if (row.size() != arity())
    throw SchemaError("row " + render(row) + " does not fit " + symbol_.name + "/" + std::to_string(arity()));
  if (arity() == 0) return false;
  return rows_.insert(std::move(row)).second;
}

namespace {

Tuple pick(const Tuple& row, std::span<const std::size_t> positions) {
  Tuple out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(row[p - 1]);
  return out;
}

void check_positions(std::span<const std::size_t> positions, std::size_t arity) {
  for (auto p : positions)
    if (p < 1 || p > arity)
      throw IndexError("projection position " + std::to_string(p) + " outside 1.." + std::to_string(arity));
}

}  // namespace

Relation project(const Relation& rel, std::span<const std::size_t> positions) {
  check_positions(positions, rel.arity());
  RelationSymbol sym{"pi(" + rel.name() + ")", {}};
  for (auto p : positions) {
    std::string col = rel.symbol().columns[p - 1];
    while (std::find(sym.columns.begin(), sym.columns.end(), col) != sym.columns.end()) col += "'";
    sym.columns.push_back(col);
  }
  std::set<Tuple> rows;
  for (const auto& row : rel.rows()) rows.insert(pick(row, positions));
  Relation out(std::move(sym));
  for (auto& r : rows) out.insert(r);
  return out;
}

Table project(const Table& t, std::span<const std::size_t> positions) {
  check_positions(positions, t.arity);
  Table out{positions.size(), {}};
  for (const auto& row : t.rows) out.rows.insert(pick(row, positions));
  return out;
}

// ---- Schema / Instance ---------------------------------------------------

Schema::Schema(std::string name) : name_(std::move(name)) { symbols_.push_back(empty_symbol()); }

Schema::Schema(std::string name, std::vector<RelationSymbol> symbols, std::vector<Dependency> constraints)
    : Schema(std::move(name)) {
  for (auto& s : symbols)
    if (s.name != kEmptyRelation) add_symbol(std::move(s));
  constraints_ = std::move(constraints);
}

void Schema::add_symbol(RelationSymbol symbol) {
  validate_symbol(symbol);
  if (find(symbol.name)) throw SchemaError("duplicate relation symbol " + symbol.name + " in schema " + name_);
  symbols_.push_back(std::move(symbol));
}

const RelationSymbol* Schema::find(std::string_view name) const {
  for (const auto& s : symbols_)
    if (s.name == name) return &s;
  return nullptr;
}

Instance::Instance(Schema schema) : schema_(std::move(schema)) {
  for (const auto& s : schema_.symbols()) relations_.emplace(s.name, Relation(s));
}

const Relation* Instance::find(std::string_view name) const {
  auto it = relations_.find(std::string(name));
  return it == relations_.end() ? nullptr : &it->second;
}

const Relation& Instance::relation(std::string_view name) const {
  if (auto* r = find(name)) return *r;
  throw SchemaError("instance of " + schema_.name() + " has no relation " + std::string(name));
}

void Instance::set(Relation rel) {
  const RelationSymbol* sym = schema_.find(rel.name());
  if (!sym) throw SchemaError("schema " + schema_.name() + " has no relation " + rel.name());
  if (sym->arity() != rel.arity())
    throw SchemaError("relation " + rel.name() + " has arity " + std::to_string(sym->arity()));
  if (rel.name() == kEmptyRelation) throw SchemaError("r_empty is fixed to {<>}");
  relations_[rel.name()] = Relation(*sym, rel.rows());
}

void Instance::insert(std::string_view name, Tuple row) {
  auto it = relations_.find(std::string(name));
  if (it == relations_.end()) throw SchemaError("schema " + schema_.name() + " has no relation " + std::string(name));
  if (it->first == kEmptyRelation) throw SchemaError("r_empty is fixed to {<>}");
  it->second.insert(std::move(row));
}

std::set<Value> active_domain(const Instance& inst) {
  std::set<Value> out;
  for (const auto& [name, rel] : inst.relations())
    for (const auto& row : rel.rows()) out.insert(row.begin(), row.end());
  return out;
}

std::set<Value> active_domain(const Table& t) {
  std::set<Value> out;
  for (const auto& row : t.rows) out.insert(row.begin(), row.end());
  return out;
}

}  // namespace dbmorph
