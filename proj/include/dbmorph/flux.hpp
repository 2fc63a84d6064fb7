#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/interpretation.hpp"
#include "dbmorph/operad.hpp"
#include "dbmorph/spjru.hpp"

namespace dbmorph {

/// Projected component images plus the empty-tuple relation, which alone
/// makes up the kernel of a mapping with no operations.
struct FluxKernel {
  std::set<Table> relations{bottom_table()};

  bool operator==(const FluxKernel&) const = default;
};

/// Variables occurring directly in some head and in a source place atom of
/// the same operation.
std::set<std::string> mapping_vars(const OperadArrow& arrow);

/// Positions of `op`'s head holding a mapping variable.
std::vector<std::size_t> kernel_positions(const OperadOperation& op);

/// Kernel of a morphism of `arrow`: every component image projected onto
/// kernel_positions, plus the empty-tuple relation. Components may include saturation extras.
FluxKernel flux_kernel(std::span<const ComponentFunction> components, const OperadArrow& arrow);
FluxKernel flux_kernel(const InstanceMorphism& morphism, const OperadArrow& arrow);

enum class Membership { Yes, NoWithinBounds };

struct ClosureVerdict {
  Membership result = Membership::NoWithinBounds;
  std::string derivation;  // rendered term when Yes
  std::size_t depth = 0;
  bool refuted = false;  // a value outside the kernel's active domain: no for all bounds
  bool capped = false;
};

/// Whether `r` is in T(Δ), searched within the bounds.
ClosureVerdict in_closure(const Table& r, const FluxKernel& kernel, const ClosureBounds& bounds,
                          Execution exec = Execution::Serial);

/// Membership in the flux of a composition, which is the intersection of
/// both fluxes.
ClosureVerdict in_composed_flux(const Table& r, const FluxKernel& k_ab, const FluxKernel& k_bc,
                                const ClosureBounds& bounds, Execution exec = Execution::Serial);

enum class FluxVerdict { Equal, Unequal, Unknown };

std::string to_string(FluxVerdict v);

struct FluxComparison {
  FluxVerdict verdict = FluxVerdict::Unknown;
  /// Generators of one kernel not shown to lie in the closure of the other.
  std::vector<std::string> notes;
};

FluxComparison flux_equal(const FluxKernel& a, const FluxKernel& b, const ClosureBounds& bounds,
                          Execution exec = Execution::Serial);

/// Compares two morphisms between the same instances by their fluxes.
/// Throws PreconditionError when their sources or targets differ.
FluxComparison morphism_equal(const InstanceMorphism& m1, const OperadArrow& a1, const InstanceMorphism& m2,
                              const OperadArrow& a2, const ClosureBounds& bounds,
                              Execution exec = Execution::Serial);

std::set<Value> active_domain(const FluxKernel& k);

}  // namespace dbmorph
