#include "dbmorph/io.hpp"

#include "dbmorph/errors.hpp"
#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

Value value_from_json(const Json& j) {
  if (j.is_null()) return Value::null();
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value(j.get<std::string>());
  throw SchemaError("unsupported JSON value " + j.dump());
}

Json value_to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_int()) return v.as_int();
  return v.as_string();
}

Json tuple_to_json(const Tuple& t) {
  Json out = Json::array();
  for (const auto& v : t) out.push_back(value_to_json(v));
  return out;
}

Tuple tuple_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected a JSON array for a tuple, got " + j.dump());
  Tuple t;
  for (const auto& v : j) t.push_back(value_from_json(v));
  return t;
}

Instance instance_from_json(const Json& j, const Schema& schema) {
  if (j.contains("schema") && j.at("schema").get<std::string>() != schema.name())
    throw SchemaError("instance is for schema " + j.at("schema").get<std::string>() + ", expected " + schema.name());
  Instance inst(schema);
  if (!j.contains("relations")) return inst;
  for (const auto& [name, body] : j.at("relations").items()) {
    const RelationSymbol* sym = schema.find(name);
    if (!sym) throw SchemaError("instance names unknown relation " + name);
    if (body.contains("columns") && body.at("columns").get<std::vector<std::string>>() != sym->columns)
      throw SchemaError("columns of " + name + " differ from its schema");
    if (name == kEmptyRelation) continue;
    for (const auto& row : body.value("rows", Json::array())) inst.insert(name, tuple_from_json(row));
  }
  return inst;
}

Json relation_to_json(const Relation& rel) {
  Json rows = Json::array();
  for (const auto& r : rel.rows()) rows.push_back(tuple_to_json(r));
  return {{"columns", rel.symbol().columns}, {"rows", rows}};
}

Json instance_to_json(const Instance& inst) {
  Json rels = Json::object();
  for (const auto& [name, rel] : inst.relations())
    if (name != kEmptyRelation) rels[name] = relation_to_json(rel);
  return {{"schema", inst.schema().name()}, {"relations", rels}};
}

Json table_to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(tuple_to_json(r));
  return {{"arity", t.arity}, {"rows", rows}};
}

SkolemTables skolem_from_json(const Json& j) {
  SkolemTables out;
  if (!j.contains("skolem")) return out;
  for (const auto& [name, body] : j.at("skolem").items()) {
    FunctionTable table;
    for (const auto& e : body.value("entries", Json::array())) {
      if (!e.is_array() || e.size() != 2) throw SchemaError("table entry of " + name + " must be [[args...], value]");
      table.entries[tuple_from_json(e[0])] = value_from_json(e[1]);
    }
    if (body.contains("default")) {
      const Json& d = body.at("default");
      if (!(d.is_string() && d.get<std::string>() == "error")) table.fallback = value_from_json(d);
    }
    out.emplace(name, std::move(table));
  }
  return out;
}

Json skolem_to_json(const SkolemTables& tables) {
  Json out = Json::object();
  for (const auto& [name, table] : tables) {
    Json entries = Json::array();
    for (const auto& [args, v] : table.entries) entries.push_back(Json::array({tuple_to_json(args), value_to_json(v)}));
    out[name] = {{"entries", entries}, {"default", table.fallback ? value_to_json(*table.fallback) : Json("error")}};
  }
  return {{"skolem", out}};
}

Json arrow_to_json(const OperadArrow& arrow) {
  Json ops = Json::array();
  for (const auto& op : arrow.operations) {
    Json places = Json::array();
    for (const auto& p : op.places) places.push_back({{"relation", p.relation}, {"negated", p.negated}, {"args", p.args}});
    Json s = Json::array();
    for (const auto& member : op.equal.members) {
      Json m = Json::array();
      for (const auto& [pos, atom] : member) m.push_back(Json::array({pos, atom}));
      s.push_back(m);
    }
    Json head = Json::array();
    for (const auto& t : op.head) head.push_back(to_string(t));
    ops.push_back({{"index", op.index},
                   {"implication", to_string(op.implication)},
                   {"expression", render_expression(op)},
                   {"places", places},
                   {"target", op.target},
                   {"head", head},
                   {"variables", op.variables},
                   {"S", s},
                   {"Z", op.simple_positions},
                   {"query_symbol", op.query_symbol},
                   {"copy", "(_)(y1..y" + std::to_string(op.head.size()) + ") => (_)(y1..y" +
                                std::to_string(op.head.size()) + ")"}});
  }
  return {{"name", arrow.name},
          {"source", arrow.source.name()},
          {"target", arrow.target.name()},
          {"operations", ops},
          {"identity", std::string("1_") + kEmptyRelation}};
}

namespace {

Json args_to_json(const Args& args) {
  Json out = Json::array();
  for (const auto& t : args) out.push_back(tuple_to_json(t));
  return out;
}

Json component_to_json(const ComponentFunction& c, const OperadArrow& arrow) {
  Json domain = Json::array();
  for (const auto& f : c.domain) domain.push_back({{"relation", f.relation}, {"negated", f.negated}});
  Json graph = Json::array();
  for (const auto& [args, out] : *c.graph) graph.push_back({{"args", args_to_json(args)}, {"output", tuple_to_json(c(args))}});
  Json image = Json::array();
  for (const auto& t : c.image()) image.push_back(tuple_to_json(t));
  return {{"operation", arrow.operations.at(c.operation).index},
          {"domain", domain},
          {"codomain", c.codomain},
          {"graph", graph},
          {"image", image}};
}

}  // namespace

Json morphism_to_json(const InstanceMorphism& h, const OperadArrow& arrow) {
  Json comps = Json::array();
  for (const auto& c : h.components) comps.push_back(component_to_json(c, arrow));
  return {{"arrow", arrow.name},
          {"source", h.source ? h.source->schema().name() : ""},
          {"target", h.target ? h.target->schema().name() : ""},
          {"components", comps},
          {"bottom", "id"}};
}

Json satisfaction_to_json(const SatisfactionReport& r, const OperadArrow& arrow) {
  Json v = Json::array();
  for (const auto& [i, t] : r.violations)
    v.push_back({{"operation", arrow.operations.at(i).index}, {"target", arrow.operations[i].target}, {"tuple", tuple_to_json(t)}});
  return {{"satisfied", r.satisfied}, {"violations", v}};
}

Json saturated_to_json(const SaturatedMorphism& sat, const OperadArrow& arrow) {
  Json extras = Json::array();
  for (const auto& e : sat.extras) {
    Json delta = Json::array();
    for (const auto& [key, v] : e.delta)
      delta.push_back({{"symbol", key.first}, {"args", tuple_to_json(key.second)}, {"value", value_to_json(v)}});
    extras.push_back({{"op", arrow.operations.at(e.operation).index},
                      {"args", args_to_json(e.trigger)},
                      {"b", tuple_to_json(e.b)},
                      {"delta", delta}});
  }
  Json skipped = Json::array();
  for (const auto& s : sat.skipped)
    skipped.push_back({{"op", arrow.operations.at(s.operation).index},
                       {"args", args_to_json(s.trigger)},
                       {"b", tuple_to_json(s.b)},
                       {"reason", s.reason}});
  return {{"base", morphism_to_json(sat.base, arrow)}, {"extras", extras}, {"skipped", skipped}};
}

Json pfunction_to_json(const PFunction& p) {
  Json domain = Json::array();
  for (const auto& f : p.domain) domain.push_back({{"relation", f.relation}, {"negated", f.negated}});
  Json graph = Json::array();
  for (const auto& [args, set] : p.graph) {
    Json values = Json::array();
    for (const auto& t : set) values.push_back(tuple_to_json(t));
    graph.push_back({{"args", args_to_json(args)}, {"values", values}});
  }
  return {{"domain", domain}, {"codomain", p.codomain}, {"graph", graph}};
}

Json kernel_to_json(const FluxKernel& k) {
  Json rels = Json::array();
  for (const auto& t : k.relations) rels.push_back(table_to_json(t));
  return {{"relations", rels}};
}

Json closure_verdict_to_json(const ClosureVerdict& v) {
  Json out = {{"member", v.result == Membership::Yes ? "yes" : "no-within-bounds"},
              {"refuted", v.refuted},
              {"capped", v.capped}};
  if (v.result == Membership::Yes) {
    out["derivation"] = v.derivation;
    out["depth"] = v.depth;
  }
  return out;
}

Json validation_to_json(const ValidationReport& r) {
  Json v = Json::array();
  for (const auto& c : r.violations) {
    Json w = Json::object();
    for (const auto& [var, val] : c.witness) w[var] = value_to_json(val);
    v.push_back({{"constraint", c.text}, {"index", c.constraint + 1}, {"witness", w}});
  }
  return {{"valid", r.valid()}, {"violations", v}};
}

Json trace_to_json(const ApplyTrace& t) {
  Json g = Json::object();
  for (const auto& [var, val] : t.assignment) g[var] = value_to_json(val);
  Json lits = Json::array();
  for (const auto& [text, ok] : t.literals) lits.push_back({{"literal", text}, {"holds", ok}});
  return {{"join_guard", t.join_guard}, {"g", g}, {"literals", lits}, {"output", tuple_to_json(t.output)}};
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dbmorph
