#include "dbmorph/logic/validate.hpp"

#include <optional>

#include "dbmorph/logic/parser.hpp"

namespace dbmorph {

namespace {

std::optional<Assignment> tgd_witness(const Tgd& t, const Structure& s) {
  std::optional<Assignment> witness;
  for_each_match(std::span<const Literal>(t.lhs), {}, s, Side::Source, [&](const Assignment& g) {
    bool satisfied = !for_each_match(std::span<const Atom>(t.rhs), g, s, Side::Target,
                                     [](const Assignment&) { return false; });
    if (satisfied) return true;
    witness = g;
    return false;
  });
  return witness;
}

std::optional<Assignment> egd_witness(const Egd& e, const Structure& s) {
  std::optional<Assignment> witness;
  for_each_match(std::span<const Atom>(e.lhs), {}, s, Side::Source, [&](const Assignment& g) {
    for (const auto& [y, z] : e.equalities)
      if (g.at(y) != g.at(z)) {
        witness = g;
        return false;
      }
    return true;
  });
  return witness;
}

}  // namespace

ValidationReport validate_instance(const Instance& inst, std::vector<Value> extra_constants) {
  InstanceStructure s(inst, inst, std::move(extra_constants));
  ValidationReport report;
  const auto& constraints = inst.schema().constraints();
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    auto witness = std::visit(
        [&](const auto& c) {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, Tgd>)
            return tgd_witness(c, s);
          else
            return egd_witness(c, s);
        },
        constraints[i]);
    if (witness) report.violations.push_back({i, to_string(constraints[i]), std::move(*witness)});
  }
  return report;
}

}  // namespace dbmorph
