#pragma once

#include <string>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/logic/eval.hpp"

namespace dbmorph {

struct ConstraintViolation {
  std::size_t constraint = 0;  // 0-based index into the schema's constraints
  std::string text;
  Assignment witness;
};

struct ValidationReport {
  std::vector<ConstraintViolation> violations;

  bool valid() const noexcept { return violations.empty(); }
};

/// Checks every tgd and egd of the instance's schema by brute force. Head
/// existentials are searched among the rows of the head relations. Each
/// violated constraint is reported once, with the first witness found.
ValidationReport validate_instance(const Instance& inst, std::vector<Value> extra_constants = {});

}  // namespace dbmorph
