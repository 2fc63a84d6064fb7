#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/interpretation.hpp"
#include "dbmorph/logic/ast.hpp"
#include "dbmorph/operad.hpp"

namespace dbmorph {

struct MappingEntry {
  std::string name;
  std::string source;
  std::string target;
  std::filesystem::path file;
  std::string text;
};

struct GraphEdge {
  std::string from;
  std::string to;
  std::string mapping;
};

/// Schemas, one instance per schema, and named mappings between them.
///
///   { "domain": [...],
///     "schemas": { "A": { "relations": { "R": ["c1", ...] }, "constraints": "dsl" } },
///     "instances": { "A": "a.json" },
///     "mappings": { "M": { "source": "A", "target": "B", "file": "m.dsl" } },
///     "graph": [ ["A", "B", "M"] ] }
///
/// Paths are relative to the project file.
struct Project {
  std::filesystem::path base_dir;
  std::vector<Value> domain;
  std::map<std::string, Schema> schemas;
  std::map<std::string, Instance> instances;
  std::map<std::string, MappingEntry> mappings;
  std::vector<GraphEdge> graph;

  const Schema& schema(const std::string& name) const;
  const Instance& instance(const std::string& schema_name) const;
  const MappingEntry& mapping(const std::string& name) const;
};

/// Loads and checks a project file. Throws SchemaError on dangling
/// references and on instance values outside a declared domain.
Project load_project(const std::filesystem::path& file);

/// Parses a mapping with its source and target schemas, and the other
/// schemas of the project for characteristic functions.
Mapping parse_project_mapping(const Project& project, const MappingEntry& entry);

OperadArrow compile_mapping(const Project& project, const std::string& name);

/// An interpretation over the mapping's instances; relations of the other
/// schemas stay visible to characteristic functions.
class ProjectInterpretation {
 public:
  ProjectInterpretation(const Project& project, const OperadArrow& arrow, const MappingEntry& entry,
                        SkolemTables tables);

  const TarskiInterpretation& get() const noexcept { return it_; }

 private:
  TarskiInterpretation it_;
};

std::string read_text(const std::filesystem::path& file);

}  // namespace dbmorph
