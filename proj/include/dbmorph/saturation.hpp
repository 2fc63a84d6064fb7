#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dbmorph/flux.hpp"
#include "dbmorph/interpretation.hpp"
#include "dbmorph/operad.hpp"

namespace dbmorph {

/// Agrees with its base component except at `trigger`, where it returns
/// `b`. `delta` holds the Skolem table changes that realize it.
struct Extra {
  std::size_t operation = 0;  // 0-based
  Args trigger;
  Tuple b;
  SkolemDelta delta;

  /// The extra as a component function sharing the base graph.
  ComponentFunction component(const InstanceMorphism& base) const;
};

/// A candidate b of an extension relation that no consistent Skolem change realizes.
struct SkippedCandidate {
  std::size_t operation = 0;
  Args trigger;
  Tuple b;
  std::string reason;
};

struct SaturatedMorphism {
  InstanceMorphism base;
  std::vector<Extra> extras;
  std::vector<SkippedCandidate> skipped;

  /// Base components followed by every extra.
  std::vector<ComponentFunction> components() const;
};

/// Target rows agreeing with the base `output` on the simple-variable
/// positions, minus `output` itself.
Relation extension_relation(const Structure& s, const OperadOperation& op, const Tuple& output);

/// The base morphism plus every extra. Throws PreconditionError unless the
/// interpretation satisfies the arrow.
SaturatedMorphism saturate(const TarskiInterpretation& it, const OperadArrow& arrow,
                           Execution exec = Execution::Serial);

/// A function from a component domain to sets of target rows.
struct PFunction {
  std::vector<DomainFactor> domain;
  std::string codomain;
  std::map<Args, std::set<Tuple>> graph;
};

/// Which components a set-valued function unites.
enum class PFunctionScope {
  Signature,  // every base or extra component with the operation's domain and codomain
  Operation,  // the operation's own base component and its extras
};

/// Set-valued function of operation `op_index`. With Operation scope each
/// value is the positional selection of the target relation at the base
/// output; Signature scope also unites operations sharing the signature.
PFunction derive_pfunction(const SaturatedMorphism& sat, std::size_t op_index,
                           PFunctionScope scope = PFunctionScope::Signature);

struct FluxInvarianceReport {
  bool holds = true;
  std::vector<std::string> failures;
};

/// Checks that every extra keeps the simple-variable positions of its base
/// output and that substituting it for its base leaves the flux kernel
/// unchanged.
FluxInvarianceReport check_flux_invariance(const SaturatedMorphism& sat, const OperadArrow& arrow);
FluxInvarianceReport check_flux_invariance(const TarskiInterpretation& it, const OperadArrow& arrow,
                                           Execution exec = Execution::Serial);

}  // namespace dbmorph
