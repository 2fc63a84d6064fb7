#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dbmorph/core.hpp"
#include "dbmorph/logic/ast.hpp"

namespace dbmorph {

/// Schemas against which a mapping's relation names are resolved. Body atoms
/// may name source or target relations; head atoms must name target relations.
/// For integrity constraints pass the same schema twice.
struct MappingContext {
  const Schema* source = nullptr;
  const Schema* target = nullptr;
  /// Further schemas whose relations may be named by characteristic
  /// functions f_R only (e.g. an intermediate schema of a composed mapping).
  std::vector<const Schema*> auxiliary;
};

/// Parses the mapping DSL:
///
///   mapping   := [ "exists" [ fnList ] "." ] conjunct { "&&" conjunct }
///   conjunct  := "taut" | "forall" varList "." lhs "->" head
///   lhs       := [ "exists" varList "." ] literal { "&" literal }
///   literal   := [ "not" ] ( atom | term cmp term )
///   head      := [ "exists" varList "." ] headItem { "&" headItem }
///   headItem  := atom | term "=" term
///   term      := IDENT | NUMBER | STRING | "null" | IDENT "(" [ termList ] ")"
///
/// Without a leading `exists` the result is a list of tgds/egds; with it, an
/// SOtgd. `hash` is the built-in tuple hash, `notnull(t)` the built-in
/// NOT NULL test, and `f_R` names the characteristic function of a known
/// relation R. Without a context, relation arities only have to be
/// consistent within the mapping.
Mapping parse_mapping(std::string_view text, const MappingContext& ctx = {});

/// Parses `&&`-separated integrity constraints over one schema: parse_mapping
/// with source = target = schema, rejecting SOtgds.
std::vector<Dependency> parse_constraints(std::string_view text, const Schema& schema);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Tgd& t);
std::string to_string(const Egd& e);
std::string to_string(const Dependency& d);
std::string to_string(const SOtgd& s);
std::string to_string(const NormalizedImplication& n);
std::string to_string(const Mapping& m);
std::string to_string(Comparator c);

}  // namespace dbmorph
