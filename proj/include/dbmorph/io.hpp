#pragma once

#include <string>

#include "json.hpp"

#include "dbmorph/core.hpp"
#include "dbmorph/flux.hpp"
#include "dbmorph/interpretation.hpp"
#include "dbmorph/logic/validate.hpp"
#include "dbmorph/operad.hpp"
#include "dbmorph/saturation.hpp"

namespace dbmorph {

using Json = nlohmann::json;

/// Integers and strings map to themselves, NULL to JSON null. Other JSON
/// kinds throw SchemaError.
Value value_from_json(const Json& j);
Json value_to_json(const Value& v);
Json tuple_to_json(const Tuple& t);
Tuple tuple_from_json(const Json& j);

/// { "schema": name, "relations": { name: { "columns": [...], "rows": [[...]] } } }
/// Relations not mentioned stay empty; r_∅ is never written.
Instance instance_from_json(const Json& j, const Schema& schema);
Json instance_to_json(const Instance& inst);
Json relation_to_json(const Relation& rel);
Json table_to_json(const Table& t);

/// { "skolem": { "f": { "entries": [[[args...], value], ...], "default": v } } }
/// A missing default or the string "error" means lookups outside the
/// entries fail.
SkolemTables skolem_from_json(const Json& j);
Json skolem_to_json(const SkolemTables& tables);

Json arrow_to_json(const OperadArrow& arrow);
Json morphism_to_json(const InstanceMorphism& h, const OperadArrow& arrow);
Json satisfaction_to_json(const SatisfactionReport& r, const OperadArrow& arrow);
Json saturated_to_json(const SaturatedMorphism& sat, const OperadArrow& arrow);
Json pfunction_to_json(const PFunction& p);
Json kernel_to_json(const FluxKernel& k);
Json closure_verdict_to_json(const ClosureVerdict& v);
Json validation_to_json(const ValidationReport& r);
Json trace_to_json(const ApplyTrace& t);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);

}  // namespace dbmorph
