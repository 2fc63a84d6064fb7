#include "dbmorph/saturation.hpp"

#include <optional>

#include "dbmorph/errors.hpp"
#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

namespace {

struct Outcome {
  std::vector<Extra> extras;
  std::vector<SkippedCandidate> skipped;
};

Assignment assignment_of(const OperadOperation& op, const Args& args) {
  Tuple values = cmp(op.equal, args);
  Assignment g;
  for (std::size_t k = 0; k < op.variables.size(); ++k) g.emplace(op.variables[k], values[k]);
  return g;
}

// Skolem changes making the head evaluate to b, or the reason none exists.
std::variant<SkolemDelta, std::string> perturbation(const TarskiInterpretation& it, const OperadOperation& op,
                                                    const Assignment& g, const Tuple& output, const Tuple& b) {
  SkolemDelta demands;
  for (std::size_t j = 0; j < op.head.size(); ++j) {
    const Term& t = op.head[j];
    if (t.is_variable()) continue;
    if (!t.is_application() || t.application().kind != FunctionKind::Skolem) {
      if (b[j] != output[j])
        return "head position " + std::to_string(j + 1) + " (" + to_string(t) + ") is not a Skolem term";
      continue;
    }
    const Application& a = t.application();
    Tuple args;
    for (const auto& arg : a.args) args.push_back(evaluate(arg, g, it));
    auto [pos, fresh] = demands.emplace(std::make_pair(a.symbol, args), b[j]);
    if (!fresh && pos->second != b[j])
      return "Skolem term " + a.symbol + render(args) + " would need two different values";
  }
  SkolemDelta delta;
  for (auto& [key, value] : demands)
    if (it.apply_skolem(key.first, key.second) != value) delta.emplace(key, value);
  return delta;
}

}  // namespace

ComponentFunction Extra::component(const InstanceMorphism& base) const {
  ComponentFunction c = base.components.at(operation);
  c.override_point = std::make_pair(trigger, b);
  return c;
}

std::vector<ComponentFunction> SaturatedMorphism::components() const {
  std::vector<ComponentFunction> out = base.components;
  for (const auto& e : extras) out.push_back(e.component(base));
  return out;
}

Relation extension_relation(const Structure& s, const OperadOperation& op, const Tuple& output) {
  const Relation* target = s.find_relation(op.target, Side::Target);
  if (!target) throw SchemaError("no instance provides relation " + op.target);
  Relation out(target->symbol());
  for (const auto& row : target->rows()) {
    if (row == output) continue;
    bool agree = true;
    for (std::size_t j : op.simple_positions)
      if (row[j - 1] != output[j - 1]) agree = false;
    if (agree) out.insert(row);
  }
  return out;
}

SaturatedMorphism saturate(const TarskiInterpretation& it, const OperadArrow& arrow, Execution exec) {
  if (auto report = satisfies(it, arrow, exec); !report.satisfied)
    throw PreconditionError("saturation requires an interpretation that satisfies " + arrow.name + "; " +
                            std::to_string(report.violations.size()) + " image tuple(s) are missing from the target");
  SaturatedMorphism sat{alpha_star(it, arrow, exec), {}, {}};

  std::vector<std::pair<std::size_t, const Graph::value_type*>> work;
  for (std::size_t i = 0; i < arrow.operations.size(); ++i) {
    if (!arrow.operations[i].has_skolem_head()) continue;
    for (const auto& entry : *sat.base.components[i].graph)
      if (!entry.second.empty()) work.emplace_back(i, &entry);
  }

  std::vector<Outcome> outcomes(work.size());
  for_each_index(
      work.size(),
      [&](std::size_t w) {
        const auto [i, entry] = work[w];
        const OperadOperation& op = arrow.operations[i];
        const Args& args = entry->first;
        const Tuple& output = entry->second;
        const Assignment g = assignment_of(op, args);
        const Relation candidates = extension_relation(it, op, output);
        for (const auto& b : candidates.rows()) {
          auto p = perturbation(it, op, g, output, b);
          if (auto* reason = std::get_if<std::string>(&p)) {
            outcomes[w].skipped.push_back({i, args, b, *reason});
            continue;
          }
          SkolemDelta delta = std::get<SkolemDelta>(std::move(p));
          PerturbedInterpretation perturbed(it, delta);
          if (apply_component(perturbed, op, args) != b) {
            outcomes[w].skipped.push_back({i, args, b, "the perturbed interpretation does not yield b"});
            continue;
          }
          outcomes[w].extras.push_back({i, args, b, std::move(delta)});
        }
      },
      exec);

  for (auto& o : outcomes) {
    for (auto& e : o.extras) sat.extras.push_back(std::move(e));
    for (auto& s : o.skipped) sat.skipped.push_back(std::move(s));
  }
  return sat;
}

PFunction derive_pfunction(const SaturatedMorphism& sat, std::size_t op_index, PFunctionScope scope) {
  const ComponentFunction& base = sat.base.components.at(op_index);
  PFunction out{base.domain, base.codomain, {}};
  std::vector<ComponentFunction> members;
  if (scope == PFunctionScope::Operation) {
    members.push_back(base);
    for (const auto& e : sat.extras)
      if (e.operation == op_index) members.push_back(e.component(sat.base));
  } else {
    for (const auto& c : sat.components())
      if (c.domain == base.domain && c.codomain == base.codomain) members.push_back(c);
  }
  for (const auto& [args, value] : *base.graph) {
    auto& set = out.graph[args];
    for (const auto& m : members) {
      Tuple v = m(args);
      if (!v.empty()) set.insert(std::move(v));
    }
  }
  return out;
}

FluxInvarianceReport check_flux_invariance(const SaturatedMorphism& sat, const OperadArrow& arrow) {
  FluxInvarianceReport report;
  const FluxKernel kernel = flux_kernel(sat.base, arrow);
  for (const auto& e : sat.extras) {
    const OperadOperation& op = arrow.operations.at(e.operation);
    const Tuple base_out = sat.base.components[e.operation](e.trigger);
    if (!base_out.empty())
      for (std::size_t j : op.simple_positions)
        if (e.b[j - 1] != base_out[j - 1]) {
          report.holds = false;
          report.failures.push_back("extra " + render(e.b) + " of q_" + std::to_string(op.index) +
                                    " changes simple position " + std::to_string(j));
        }
    std::vector<ComponentFunction> components = sat.base.components;
    components[e.operation] = e.component(sat.base);
    if (flux_kernel(components, arrow) != kernel) {
      report.holds = false;
      report.failures.push_back("extra " + render(e.b) + " of q_" + std::to_string(op.index) +
                                " changes the flux kernel");
    }
  }
  return report;
}

FluxInvarianceReport check_flux_invariance(const TarskiInterpretation& it, const OperadArrow& arrow,
                                           Execution exec) {
  return check_flux_invariance(saturate(it, arrow, exec), arrow);
}

}  // namespace dbmorph
