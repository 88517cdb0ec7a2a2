#pragma once

// The blame calculus: convertibility of types under a name store, the core
// typechecker (used both after translation and to re-check every machine
// state during evaluation), and the cast-inserting translation from surface
// terms.

#include <optional>

#include "ast.hpp"
#include "statics.hpp"
#include "store.hpp"

namespace rowg {

// Is A convertible to B under the conversion label phi? Revealing +a turns
// the name a into its stored definition; concealing -a turns the definition
// back into a. Other names convert only to themselves, functions are
// contravariant (the label flips on the left), and rows convert pointwise
// without reordering.
bool convertible(const NameStore& store, const TypePtr& a, const ConvLabel& phi,
                 const TypePtr& b);

// Bidirectional core typechecker. With `expected` null the type is
// synthesized; otherwise the term is checked against it (exact equality up
// to alpha at the leaves). Throws TypeError.
TypePtr typecheck_core(const NameStore& store, Ctx& ctx, const CorePtr& e,
                       const TypePtr* expected = nullptr);

struct Translation {
  CorePtr core;
  TypePtr type;
};

// Cast-inserting translation of a (desugared) gradual term. Blame labels are
// allocated left to right in evaluation order, one per inserted cast, so the
// label numbers in translated programs are stable. Throws TypeError exactly
// when the gradual typechecker would.
Translation translate(Ctx& ctx, const TermPtr& m);

}  // namespace rowg
