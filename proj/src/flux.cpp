#include "dbmorph/flux.hpp"

#include <algorithm>

#include "dbmorph/errors.hpp"

namespace dbmorph {

namespace {

std::set<std::string> op_vars(const OperadOperation& op) {
  std::set<std::string> in_places;
  for (const auto& p : op.places) in_places.insert(p.args.begin(), p.args.end());
  std::set<std::string> out;
  for (const auto& t : op.head)
    if (t.is_variable() && in_places.contains(t.variable())) out.insert(t.variable());
  return out;
}

std::vector<Table> generators(const FluxKernel& k) { return {k.relations.begin(), k.relations.end()}; }

bool same_instance(const Instance* a, const Instance* b) { return a == b || (a && b && *a == *b); }

}  // namespace

std::set<std::string> mapping_vars(const OperadArrow& arrow) {
  std::set<std::string> out;
  for (const auto& op : arrow.operations) {
    auto v = op_vars(op);
    out.insert(v.begin(), v.end());
  }
  return out;
}

std::vector<std::size_t> kernel_positions(const OperadOperation& op) {
  auto vars = op_vars(op);
  std::vector<std::size_t> out;
  for (std::size_t j : op.simple_positions)
    if (vars.contains(op.head[j - 1].variable())) out.push_back(j);
  return out;
}

FluxKernel flux_kernel(std::span<const ComponentFunction> components, const OperadArrow& arrow) {
  FluxKernel k;
  for (const auto& c : components) {
    auto positions = kernel_positions(arrow.operations.at(c.operation));
    if (positions.empty()) continue;
    const auto image = c.image();
    Table t{arrow.operations[c.operation].head.size(), {image.begin(), image.end()}};
    k.relations.insert(project(t, positions));
  }
  return k;
}

FluxKernel flux_kernel(const InstanceMorphism& morphism, const OperadArrow& arrow) {
  return flux_kernel(std::span<const ComponentFunction>(morphism.components), arrow);
}

std::set<Value> active_domain(const FluxKernel& k) {
  std::set<Value> out;
  for (const auto& t : k.relations) {
    auto d = active_domain(t);
    out.insert(d.begin(), d.end());
  }
  return out;
}

ClosureVerdict in_closure(const Table& r, const FluxKernel& kernel, const ClosureBounds& bounds, Execution exec) {
  ClosureVerdict v;
  auto gens = generators(kernel);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i] == r) {
      v.result = Membership::Yes;
      v.derivation = render(*generator_expr(i));
      return v;
    }
  auto dom = active_domain(kernel);
  for (const auto& value : active_domain(r))
    if (!dom.contains(value)) {
      v.refuted = true;
      return v;
    }
  if (r.arity > bounds.max_arity) return v;

  Closure c = enumerate_closure(gens, bounds, exec, &r);
  v.capped = c.capped;
  if (const ClosureEntry* e = c.find(r)) {
    v.result = Membership::Yes;
    v.derivation = render(*e->expr);
    v.depth = e->depth;
    return v;
  }
  if (c.capped) {
    if (auto e = construct_derivation(r, gens); e && depth(**e) <= bounds.max_depth && evaluate(**e, gens) == r) {
      v.result = Membership::Yes;
      v.derivation = render(**e);
      v.depth = depth(**e);
    }
  }
  return v;
}

ClosureVerdict in_composed_flux(const Table& r, const FluxKernel& k_ab, const FluxKernel& k_bc,
                                const ClosureBounds& bounds, Execution exec) {
  ClosureVerdict ab = in_closure(r, k_ab, bounds, exec);
  if (ab.result != Membership::Yes) return ab;
  ClosureVerdict bc = in_closure(r, k_bc, bounds, exec);
  if (bc.result != Membership::Yes) return bc;
  ab.derivation += " ; " + bc.derivation;
  ab.depth = std::max(ab.depth, bc.depth);
  return ab;
}

std::string to_string(FluxVerdict v) {
  switch (v) {
    case FluxVerdict::Equal: return "equal";
    case FluxVerdict::Unequal: return "unequal";
    case FluxVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

FluxComparison flux_equal(const FluxKernel& a, const FluxKernel& b, const ClosureBounds& bounds, Execution exec) {
  FluxComparison out;
  if (a == b) {
    out.verdict = FluxVerdict::Equal;
    return out;
  }
  bool unknown = false;
  for (const auto* pair : {&a, &b}) {
    const FluxKernel& from = *pair;
    const FluxKernel& to = pair == &a ? b : a;
    for (const auto& g : from.relations) {
      if (to.relations.contains(g)) continue;
      ClosureVerdict v = in_closure(g, to, bounds, exec);
      if (v.result == Membership::Yes) continue;
      out.notes.push_back(render(g) + (v.refuted ? " uses values outside the other kernel" : " not derived within bounds"));
      if (v.refuted) {
        out.verdict = FluxVerdict::Unequal;
        return out;
      }
      unknown = true;
    }
  }
  out.verdict = unknown ? FluxVerdict::Unknown : FluxVerdict::Equal;
  return out;
}

FluxComparison morphism_equal(const InstanceMorphism& m1, const OperadArrow& a1, const InstanceMorphism& m2,
                              const OperadArrow& a2, const ClosureBounds& bounds, Execution exec) {
  if (!same_instance(m1.source, m2.source) || !same_instance(m1.target, m2.target))
    throw PreconditionError("morphisms compared for equality must share source and target instances");
  return flux_equal(flux_kernel(m1, a1), flux_kernel(m2, a2), bounds, exec);
}

}  // namespace dbmorph
