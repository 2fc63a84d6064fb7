#include "dbmorph/project.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dbmorph/errors.hpp"
#include "dbmorph/io.hpp"
#include "dbmorph/logic/parser.hpp"
#include "dbmorph/logic/transform.hpp"

namespace dbmorph {

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Schema& Project::schema(const std::string& name) const {
  auto it = schemas.find(name);
  if (it == schemas.end()) throw SchemaError("unknown schema " + name);
  return it->second;
}

const Instance& Project::instance(const std::string& schema_name) const {
  auto it = instances.find(schema_name);
  if (it == instances.end()) throw SchemaError("no instance for schema " + schema_name);
  return it->second;
}

const MappingEntry& Project::mapping(const std::string& name) const {
  auto it = mappings.find(name);
  if (it == mappings.end()) throw SchemaError("unknown mapping " + name);
  return it->second;
}

Project load_project(const std::filesystem::path& file) {
  Json j;
  try {
    j = Json::parse(read_text(file));
  } catch (const Json::parse_error& e) {
    throw SchemaError(file.string() + ": " + e.what());
  }
  Project p;
  p.base_dir = file.parent_path();
  for (const auto& v : j.value("domain", Json::array())) p.domain.push_back(value_from_json(v));

  for (const auto& [name, body] : j.at("schemas").items()) {
    Schema s(name);
    const Json relations = body.value("relations", Json::object());
    for (const auto& [rel, cols] : relations.items())
      s.add_symbol({rel, cols.get<std::vector<std::string>>()});
    p.schemas.emplace(name, std::move(s));
  }
  // Constraints are parsed once all symbols are known.
  for (const auto& [name, body] : j.at("schemas").items())
    if (body.contains("constraints")) {
      Schema& s = p.schemas.at(name);
      s.set_constraints(parse_constraints(body.at("constraints").get<std::string>(), s));
    }

  for (const auto& [name, schema] : p.schemas) p.instances.emplace(name, Instance(schema));
  const Json instance_files = j.value("instances", Json::object());
  for (const auto& [name, path] : instance_files.items()) {
    const Schema& s = p.schema(name);
    p.instances.insert_or_assign(name, instance_from_json(Json::parse(read_text(p.base_dir / path.get<std::string>())), s));
  }

  if (!p.domain.empty()) {
    std::set<Value> declared(p.domain.begin(), p.domain.end());
    for (const auto& [name, inst] : p.instances)
      for (const auto& v : active_domain(inst))
        if (!declared.contains(v)) throw SchemaError("instance " + name + " uses " + v.render() + " outside the domain");
  }

  const Json mapping_files = j.value("mappings", Json::object());
  for (const auto& [name, body] : mapping_files.items()) {
    MappingEntry m{name, body.at("source").get<std::string>(), body.at("target").get<std::string>(),
                   p.base_dir / body.at("file").get<std::string>(), {}};
    p.schema(m.source);
    p.schema(m.target);
    m.text = read_text(m.file);
    p.mappings.emplace(name, std::move(m));
  }
  for (const auto& e : j.value("graph", Json::array())) {
    GraphEdge edge{e.at(0).get<std::string>(), e.at(1).get<std::string>(), e.at(2).get<std::string>()};
    p.schema(edge.from);
    p.schema(edge.to);
    p.mapping(edge.mapping);
    p.graph.push_back(std::move(edge));
  }
  return p;
}

Mapping parse_project_mapping(const Project& project, const MappingEntry& entry) {
  MappingContext ctx{&project.schema(entry.source), &project.schema(entry.target), {}};
  for (const auto& [name, s] : project.schemas)
    if (name != entry.source && name != entry.target) ctx.auxiliary.push_back(&s);
  return parse_mapping(entry.text, ctx);
}

OperadArrow compile_mapping(const Project& project, const std::string& name) {
  const MappingEntry& entry = project.mapping(name);
  auto impls = normalize(parse_project_mapping(project, entry));
  return make_operads(impls, project.schema(entry.source), project.schema(entry.target), name);
}

namespace {

std::vector<Value> constants(const Project& project, const OperadArrow& arrow) {
  std::vector<Value> out = project.domain;
  auto more = arrow_constants(arrow);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

}  // namespace

ProjectInterpretation::ProjectInterpretation(const Project& project, const OperadArrow& arrow,
                                             const MappingEntry& entry, SkolemTables tables)
    : it_(project.instance(entry.source), project.instance(entry.target), std::move(tables),
          constants(project, arrow)) {
  std::vector<const Instance*> others;
  for (const auto& [name, inst] : project.instances)
    if (name != entry.source && name != entry.target) others.push_back(&inst);
  it_.set_auxiliary(std::move(others));
}

}  // namespace dbmorph
