#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "dbmorph/errors.hpp"
#include "dbmorph/flux.hpp"
#include "dbmorph/interpretation.hpp"
#include "dbmorph/io.hpp"
#include "dbmorph/irdb.hpp"
#include "dbmorph/logic/parser.hpp"
#include "dbmorph/logic/transform.hpp"
#include "dbmorph/logic/validate.hpp"
#include "dbmorph/project.hpp"
#include "dbmorph/saturation.hpp"

namespace {

using namespace dbmorph;

enum Exit { kOk = 0, kViolation = 1, kUnknown = 2, kUsage = 3 };

struct Options {
  std::string project;
  std::string mapping;
  std::string interp;
  std::string mapping2;
  std::string interp2;
  std::string bounds;
  std::string out;
  std::string query;
  std::string schema;
  std::size_t op = 0;
  bool verbose = false;
  bool saturated = false;
  bool roundtrip = false;
  bool own_operation = false;
  bool serial = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ClosureBounds parse_bounds(const std::string& text) {
  ClosureBounds b;
  if (text.empty()) return b;
  std::size_t d = 0, a = 0, c = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> d >> c1 >> a >> c2 >> c) || c1 != ',' || c2 != ',' || a == 0 || c == 0)
    throw UsageError("--bounds expects depth,arity,cap with positive arity and cap");
  return {d, a, c};
}

void emit(const Options& o, const Json& j) {
  const std::string text = canonical_dump(j);
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing ") + flag);
}

Execution execution(const Options& o) { return o.serial ? Execution::Serial : Execution::Parallel; }

SkolemTables load_tables(const Project& p, const std::string& file) {
  if (file.empty()) return {};
  std::filesystem::path path(file);
  if (!std::filesystem::exists(path) && path.is_relative()) path = p.base_dir / path;
  return skolem_from_json(Json::parse(read_text(path)));
}

struct Loaded {
  Project project;
  OperadArrow arrow;
  const MappingEntry* entry = nullptr;
  std::optional<ProjectInterpretation> it;
};

void load(const Options& o, const std::string& mapping, const std::string& interp, Loaded& l) {
  require(o.project, "--project");
  require(mapping, "--mapping");
  l.project = load_project(o.project);
  l.arrow = compile_mapping(l.project, mapping);
  l.entry = &l.project.mapping(mapping);
  l.it.emplace(l.project, l.arrow, *l.entry, load_tables(l.project, interp));
}

int cmd_compile(const Options& o) {
  require(o.project, "--project");
  require(o.mapping, "--mapping");
  Project p = load_project(o.project);
  const MappingEntry& entry = p.mapping(o.mapping);
  Mapping m = parse_project_mapping(p, entry);
  auto impls = normalize(m);
  OperadArrow arrow = make_operads(impls, p.schema(entry.source), p.schema(entry.target), o.mapping);
  Json implications = Json::array();
  for (const auto& i : impls) implications.push_back(to_string(i));
  emit(o, {{"mapping", to_string(m)}, {"implications", implications}, {"arrow", arrow_to_json(arrow)}});
  return kOk;
}

int cmd_eval(const Options& o) {
  Loaded l;
  load(o, o.mapping, o.interp, l);
  const auto& it = l.it->get();
  InstanceMorphism h = alpha_star(it, l.arrow, execution(o));
  SatisfactionReport report = satisfies(it, l.arrow, execution(o));
  Json out = {{"morphism", morphism_to_json(h, l.arrow)}, {"satisfaction", satisfaction_to_json(report, l.arrow)}};
  if (o.verbose) {
    Json traces = Json::array();
    for (const auto& op : l.arrow.operations) {
      auto factors = domain_factors(it, op);
      std::vector<std::size_t> sizes;
      for (const auto& f : factors) sizes.push_back(f.size());
      std::vector<std::size_t> idx(sizes.size());
      for (std::size_t flat = 0; flat < product_size(sizes); ++flat) {
        decode_product_index(flat, sizes, idx);
        Args args;
        for (std::size_t k = 0; k < idx.size(); ++k) args.push_back(factors[k][idx[k]]);
        ApplyTrace trace;
        apply_component(it, op, args, &trace);
        Json t = trace_to_json(trace);
        Json a = Json::array();
        for (const auto& x : args) a.push_back(tuple_to_json(x));
        t["args"] = a;
        t["operation"] = op.index;
        traces.push_back(t);
      }
    }
    out["trace"] = traces;
  }
  emit(o, out);
  return report.satisfied ? kOk : kViolation;
}

int cmd_saturate(const Options& o) {
  Loaded l;
  load(o, o.mapping, o.interp, l);
  SaturatedMorphism sat = saturate(l.it->get(), l.arrow, execution(o));
  Json out = saturated_to_json(sat, l.arrow);
  if (o.verbose) {
    FluxInvarianceReport r = check_flux_invariance(sat, l.arrow);
    out["flux_invariance"] = {{"holds", r.holds}, {"failures", r.failures}};
  }
  emit(o, out);
  return kOk;
}

int cmd_pfunction(const Options& o) {
  Loaded l;
  load(o, o.mapping, o.interp, l);
  SaturatedMorphism sat = saturate(l.it->get(), l.arrow, execution(o));
  Json out = Json::array();
  for (std::size_t i = 0; i < l.arrow.operations.size(); ++i) {
    if (o.op != 0 && l.arrow.operations[i].index != o.op) continue;
    Json p = pfunction_to_json(
        derive_pfunction(sat, i, o.own_operation ? PFunctionScope::Operation : PFunctionScope::Signature));
    p["operation"] = l.arrow.operations[i].index;
    out.push_back(p);
  }
  if (o.op != 0 && out.empty()) throw UsageError("no operation q_" + std::to_string(o.op));
  emit(o, {{"pfunctions", out}});
  return kOk;
}

Table load_query(const Options& o, const Project& p) {
  std::filesystem::path path(o.query);
  if (!std::filesystem::exists(path) && path.is_relative()) path = p.base_dir / path;
  Json j = Json::parse(read_text(path));
  Table t;
  for (const auto& row : j.at("rows")) t.rows.insert(tuple_from_json(row));
  if (j.contains("arity"))
    t.arity = j.at("arity").get<std::size_t>();
  else if (!t.rows.empty())
    t.arity = t.rows.begin()->size();
  for (const auto& r : t.rows)
    if (r.size() != t.arity) throw SchemaError("query rows must all have arity " + std::to_string(t.arity));
  return t;
}

int membership_exit(const ClosureVerdict& v) {
  if (v.result == Membership::Yes) return kOk;
  return v.refuted ? kViolation : kUnknown;
}

int cmd_flux(const Options& o) {
  const ClosureBounds bounds = parse_bounds(o.bounds);
  Loaded l;
  load(o, o.mapping, o.interp, l);
  InstanceMorphism h = alpha_star(l.it->get(), l.arrow, execution(o));
  FluxKernel k = flux_kernel(h, l.arrow);
  Json vars = Json::array();
  for (const auto& v : mapping_vars(l.arrow)) vars.push_back(v);
  Json out = {{"mapping", o.mapping}, {"vars", vars}, {"kernel", kernel_to_json(k)}};
  int code = kOk;
  std::optional<Loaded> second;
  FluxKernel k2;
  if (!o.mapping2.empty()) {
    second.emplace();
    load(o, o.mapping2, o.interp2, *second);
    k2 = flux_kernel(alpha_star(second->it->get(), second->arrow, execution(o)), second->arrow);
    out["kernel2"] = kernel_to_json(k2);
  }
  if (!o.query.empty()) {
    Table q = load_query(o, l.project);
    ClosureVerdict v = second ? in_composed_flux(q, k, k2, bounds, execution(o)) : in_closure(q, k, bounds, execution(o));
    out["query"] = table_to_json(q);
    out["verdict"] = closure_verdict_to_json(v);
    code = membership_exit(v);
  }
  emit(o, out);
  return code;
}

int cmd_equal(const Options& o) {
  const ClosureBounds bounds = parse_bounds(o.bounds);
  Loaded l;
  load(o, o.mapping, o.interp, l);
  FluxComparison cmp;
  Json out = {{"mapping", o.mapping}};
  if (o.saturated) {
    SaturatedMorphism sat = saturate(l.it->get(), l.arrow, execution(o));
    FluxKernel base = flux_kernel(sat.base, l.arrow);
    FluxKernel full = flux_kernel(sat.components(), l.arrow);
    cmp = flux_equal(base, full, bounds, execution(o));
    out["against"] = "saturated";
    out["extras"] = sat.extras.size();
    out["kernel1"] = kernel_to_json(base);
    out["kernel2"] = kernel_to_json(full);
  } else {
    require(o.mapping2, "--mapping2 or --saturated");
    Loaded r;
    load(o, o.mapping2, o.interp2.empty() ? o.interp : o.interp2, r);
    InstanceMorphism h1 = alpha_star(l.it->get(), l.arrow, execution(o));
    InstanceMorphism h2 = alpha_star(r.it->get(), r.arrow, execution(o));
    cmp = morphism_equal(h1, l.arrow, h2, r.arrow, bounds, execution(o));
    out["against"] = o.mapping2;
    out["kernel1"] = kernel_to_json(flux_kernel(h1, l.arrow));
    out["kernel2"] = kernel_to_json(flux_kernel(h2, r.arrow));
  }
  out["verdict"] = to_string(cmp.verdict);
  out["notes"] = cmp.notes;
  emit(o, out);
  switch (cmp.verdict) {
    case FluxVerdict::Equal: return kOk;
    case FluxVerdict::Unequal: return kViolation;
    case FluxVerdict::Unknown: return kUnknown;
  }
  return kUnknown;
}

int cmd_parse(const Options& o) {
  require(o.project, "--project");
  require(o.schema, "--schema");
  Project p = load_project(o.project);
  const Instance& inst = p.instance(o.schema);
  Relation vec = parse_database(inst, execution(o));
  Instance v(vector_schema());
  v.set(vec);
  Json out = instance_to_json(v);
  int code = kOk;
  if (o.roundtrip) {
    Instance back = reconstruct(vec, p.schema(o.schema));
    bool same = back == inst;
    out = {{"vector", out}, {"reconstructed", instance_to_json(back)}, {"roundtrip", same}};
    code = same ? kOk : kViolation;
  }
  emit(o, out);
  return code;
}

int cmd_validate(const Options& o) {
  require(o.project, "--project");
  Project p = load_project(o.project);
  Json out = Json::object();
  bool valid = true;
  for (const auto& [name, inst] : p.instances) {
    if (!o.schema.empty() && name != o.schema) continue;
    ValidationReport r = validate_instance(inst, p.domain);
    valid = valid && r.valid();
    out[name] = validation_to_json(r);
  }
  if (!o.schema.empty() && out.empty()) throw SchemaError("unknown schema " + o.schema);
  emit(o, out);
  return valid ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile, evaluate, saturate and compare schema mappings"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* c) {
    c->add_option("--project", o.project, "Project file")->required();
    c->add_option("--out", o.out, "Write output here instead of stdout");
    c->add_flag("--verbose", o.verbose, "Include evaluation traces");
    c->add_flag("--serial", o.serial, "Use the serial reference kernels");
  };
  auto mapping = [&o](CLI::App* c) {
    c->add_option("--mapping", o.mapping, "Mapping name")->required();
    c->add_option("--interp", o.interp, "Interpretation file (Skolem tables)");
  };

  auto* compile = app.add_subcommand("compile", "Normalize a mapping and compile it to operad operations");
  common(compile);
  compile->add_option("--mapping", o.mapping, "Mapping name")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a mapping: instance morphism and satisfaction");
  common(eval);
  mapping(eval);

  auto* sat = app.add_subcommand("saturate", "Saturate the morphism of a mapping");
  common(sat);
  mapping(sat);

  auto* pf = app.add_subcommand("pfunction", "Derive the set-valued functions of a saturated morphism");
  common(pf);
  mapping(pf);
  pf->add_option("--op", o.op, "Operation index (1-based); all when omitted");
  pf->add_flag("--own", o.own_operation, "Unite only the operation's own components, not every one sharing its signature");

  auto* flux = app.add_subcommand("flux", "Flux kernel and closure membership");
  common(flux);
  mapping(flux);
  flux->add_option("--query", o.query, "Relation file to test for membership");
  flux->add_option("--mapping2", o.mapping2, "Second mapping: test membership in the composed flux");
  flux->add_option("--interp2", o.interp2, "Interpretation of the second mapping");
  flux->add_option("--bounds", o.bounds, "depth,arity,cap");

  auto* equal = app.add_subcommand("equal", "Compare two morphisms by their information flux");
  common(equal);
  mapping(equal);
  equal->add_flag("--saturated", o.saturated, "Compare against the saturated morphism");
  equal->add_option("--mapping2", o.mapping2, "Second mapping");
  equal->add_option("--interp2", o.interp2, "Interpretation of the second mapping");
  equal->add_option("--bounds", o.bounds, "depth,arity,cap");

  auto* parse = app.add_subcommand("parse", "Parse an instance into the vector relation r_V");
  common(parse);
  parse->add_option("--schema", o.schema, "Schema whose instance is parsed")->required();
  parse->add_flag("--roundtrip", o.roundtrip, "Rebuild the instance from r_V and compare");

  auto* validate = app.add_subcommand("validate", "Check instances against their schema constraints");
  common(validate);
  validate->add_option("--schema", o.schema, "Only this schema's instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compile) return cmd_compile(o);
    if (*eval) return cmd_eval(o);
    if (*sat) return cmd_saturate(o);
    if (*pf) return cmd_pfunction(o);
    if (*flux) return cmd_flux(o);
    if (*equal) return cmd_equal(o);
    if (*parse) return cmd_parse(o);
    if (*validate) return cmd_validate(o);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
