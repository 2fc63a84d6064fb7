#pragma once

#include <span>
#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/logic/ast.hpp"

namespace dbmorph {

/// Throws SafetyError unless every universal of the tgd occurs in a positive
/// relational atom of its body.
void check_safety(const Tgd& tgd);

/// Checks the SOtgd well-formedness conditions: every universal of a
/// conjunct occurs in a positive relational body atom, and body atoms carry
/// only variables and constants.
void check_sotgd(const SOtgd& sotgd);

/// Replaces each head existential of each tgd by a fresh Skolem symbol
/// applied to all universals of that tgd (body existentials are promoted to
/// universals first). Symbols are disjoint across tgds.
SOtgd skolemize(std::span<const Tgd> tgds);
SOtgd skolemize(std::span<const Dependency> deps);

/// Replaces every constant argument of a body relational atom by a fresh
/// variable y_i and prepends the conjunct (y_i = c).
NormalizedImplication hoist_constants(const NormalizedImplication& impl);

/// Splits every conjunct into single-head implications and hoists constants.
/// The tautology normalizes to itself.
std::vector<NormalizedImplication> normalize(const SOtgd& sotgd);

enum class TgdClass { WeaklyFull, General };

/// Weakly-full: no head existentials, and each body existential occurs at
/// most once in the body.
TgdClass classify_tgd(const Tgd& tgd);

/// Normalizes any parsed mapping: SOtgds directly, tgd lists via skolemize.
std::vector<NormalizedImplication> normalize(const Mapping& mapping);

}  // namespace dbmorph
