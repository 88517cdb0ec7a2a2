#pragma once

// Row algebra: views, splitting, concatenation, postpending, growing, and
// the equivalence that permutes adjacent fields with distinct labels.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"

namespace rowg {

// A row flattened into its field list and tail.
struct RowView {
  enum class Tail { Empty, Dyn, Var, Name };
  std::vector<std::pair<std::string, TypePtr>> fields;
  Tail tail = Tail::Empty;
  std::string tail_var;  // when tail == Var
  int tail_name = 0;     // when tail == Name
};

// View any row-shaped type. Returns nullopt for non-row shapes (Fun, Base...).
std::optional<RowView> row_view(const TypePtr& row);
// Rebuild a type from a view.
TypePtr row_build(const RowView& v);

// Labels occurring in the field prefix (a set: duplicates collapse).
std::set<std::string> row_dom(const TypePtr& row);

// Row concatenation; defined only when `left` is a closed field list
// (its tail is the empty row).
std::optional<TypePtr> row_concat(const TypePtr& left, const TypePtr& right);

bool ends_with_dyn(const TypePtr& row);

// Label-searching split: find the first `label` field, returning its type and
// the row with that one field removed. A dynamic tail splits as (?, same row
// with ? tail); in particular ? itself splits as (?, ?). Undefined when the
// label is absent and the tail is not dynamic.
std::optional<std::pair<TypePtr, TypePtr>> split_row(const TypePtr& row,
                                                     const std::string& label);

// Append a field at the position of the dynamic tail; requires ends_with_dyn.
std::optional<TypePtr> row_postpend(const TypePtr& row,
                                    const std::string& label,
                                    const TypePtr& type);

// The ground row of the same shape: the empty row and name rows are
// themselves; an extension row becomes (l:?; ?) for its first label,
// whatever its remainder. Undefined on ? and on variable rows.
std::optional<TypePtr> row_grow(const TypePtr& row);

// Normal form under field reordering: recursively stable-sorts every row's
// fields by label (equal labels keep their relative order).
TypePtr canonicalize(const TypePtr& t);

// Type-and-row equivalence: syntactic equality of canonical forms,
// alpha-renaming quantifiers.
bool row_equiv(const TypePtr& a, const TypePtr& b);

}  // namespace rowg
