#pragma once

// The relations connecting precise and dynamic types: consistency,
// consistent equivalence, shape matching, and the branch-join operator.

#include <optional>
#include <tuple>

#include "ast.hpp"
#include "rows.hpp"

namespace rowg {

// Quasi-polymorphic: a type the dynamic type may conceal a quantifier
// behind — anything containing ? that is not itself a quantifier or a row.
bool qpoly(const TypePtr& a);

// Consistency: equality up to unknown parts, keeping field order.
bool consistent(const TypePtr& a, const TypePtr& b);

// Consistent equivalence: consistency up to field reordering.
bool consistent_equiv(const TypePtr& a, const TypePtr& b);

// Shape matching. The dynamic type matches the fully dynamic type of each
// shape; a type of the right shape matches itself; anything else fails.
std::optional<std::pair<TypePtr, TypePtr>> match_fun(const TypePtr& a);
// `kind` is used only when matching ? (the binder kind cannot be read off).
std::optional<std::tuple<std::string, Kind, TypePtr>> match_forall(
    const TypePtr& a, Kind kind);
// These two return the row under the constructor.
std::optional<TypePtr> match_record(const TypePtr& a);
std::optional<TypePtr> match_variant(const TypePtr& a);

// Branch join: a type consistent-equivalent to both arguments, biased to the
// left argument's field order; ? absorbs anything.
std::optional<TypePtr> merge(const TypePtr& a, const TypePtr& b);

// Rename the binders of two quantified bodies to one common variable that is
// fresh for both. Returns (var, bodyA, bodyB).
std::tuple<std::string, TypePtr, TypePtr> align_binders(
    const std::string& xa, const TypePtr& bodya, const std::string& xb,
    const TypePtr& bodyb);

}  // namespace rowg
