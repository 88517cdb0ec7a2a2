#pragma once

// Type contexts, kinding, and the two surface typecheckers: the static one
// (exact function/record/variant shapes, equality of rows up to reordering)
// and the gradual one (shape matching against ?, consistent equivalence at
// applications, branch merging at case).

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ast.hpp"
#include "store.hpp"

namespace rowg {

struct TypeError : std::runtime_error {
  int line = 0;
  int col = 0;
  TypeError(const std::string& msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

// Ordered typing context; rightmost binding wins.
struct Ctx {
  struct TermBind {
    std::string name;
    TypePtr type;
  };
  struct TypeBind {
    std::string name;
    Kind kind;
  };
  using Item = std::variant<TermBind, TypeBind>;
  std::vector<Item> items;

  void push_term(const std::string& name, TypePtr type) {
    items.push_back(TermBind{name, std::move(type)});
  }
  void push_type(const std::string& name, Kind kind) {
    items.push_back(TypeBind{name, kind});
  }
  void pop() { items.pop_back(); }

  std::optional<TypePtr> lookup_term(const std::string& name) const;
  std::optional<Kind> lookup_type(const std::string& name) const;
};

// Kinding. `store` supplies kinds for runtime names and may be null when
// checking source types; ? is well formed at both kinds.
void check_kind(const NameStore* store, const Ctx& ctx, const TypePtr& a, Kind k);
// Synthesize a kind: rows kind R, everything else kind T (? defaults to T).
Kind kind_of(const NameStore* store, const Ctx& ctx, const TypePtr& a);
void wf_context(const NameStore* store, const Ctx& ctx);

// Both checkers desugar ascriptions at entry and throw TypeError on failure.
TypePtr typecheck_static(Ctx& ctx, const TermPtr& m);
TypePtr typecheck_gradual(Ctx& ctx, const TermPtr& m);

}  // namespace rowg
