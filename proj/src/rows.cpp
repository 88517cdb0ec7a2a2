#include "rows.hpp"

#include <algorithm>

namespace rowg {

std::optional<RowView> row_view(const TypePtr& row) {
  RowView v;
  TypePtr cur = row;
  for (;;) {
    if (auto* e = as<Type::RExt>(cur)) {
      v.fields.emplace_back(e->label, e->type);
      cur = e->rest;
      continue;
    }
    if (as<Type::REmpty>(cur)) {
      v.tail = RowView::Tail::Empty;
      return v;
    }
    if (as<Type::Dyn>(cur)) {
      v.tail = RowView::Tail::Dyn;
      return v;
    }
    if (auto* x = as<Type::Var>(cur)) {
      v.tail = RowView::Tail::Var;
      v.tail_var = x->name;
      return v;
    }
    if (auto* n = as<Type::TyName>(cur)) {
      v.tail = RowView::Tail::Name;
      v.tail_name = n->id;
      return v;
    }
    return std::nullopt;
  }
}

TypePtr row_build(const RowView& v) {
  TypePtr tail;
  switch (v.tail) {
    case RowView::Tail::Empty: tail = trempty(); break;
    case RowView::Tail::Dyn: tail = tdyn(); break;
    case RowView::Tail::Var: tail = tvar(v.tail_var); break;
    case RowView::Tail::Name: tail = tname(v.tail_name); break;
  }
  for (auto it = v.fields.rbegin(); it != v.fields.rend(); ++it)
    tail = trext(it->first, it->second, tail);
  return tail;
}

std::set<std::string> row_dom(const TypePtr& row) {
  std::set<std::string> out;
  TypePtr cur = row;
  while (auto* e = as<Type::RExt>(cur)) {
    out.insert(e->label);
    cur = e->rest;
  }
  return out;
}

std::optional<TypePtr> row_concat(const TypePtr& left, const TypePtr& right) {
  if (as<Type::REmpty>(left)) return right;
  if (auto* e = as<Type::RExt>(left)) {
    auto rest = row_concat(e->rest, right);
    if (!rest) return std::nullopt;
    return trext(e->label, e->type, *rest);
  }
  return std::nullopt;
}

bool ends_with_dyn(const TypePtr& row) {
  TypePtr cur = row;
  while (auto* e = as<Type::RExt>(cur)) cur = e->rest;
  return is_dyn(cur);
}

std::optional<std::pair<TypePtr, TypePtr>> split_row(
    const TypePtr& row, const std::string& label) {
  if (auto* e = as<Type::RExt>(row)) {
    if (e->label == label) return std::make_pair(e->type, e->rest);
    auto inner = split_row(e->rest, label);
    if (!inner) return std::nullopt;
    return std::make_pair(inner->first,
                          trext(e->label, e->type, inner->second));
  }
  if (is_dyn(row)) return std::make_pair(tdyn(), tdyn());
  return std::nullopt;
}

std::optional<TypePtr> row_postpend(const TypePtr& row,
                                    const std::string& label,
                                    const TypePtr& type) {
  if (is_dyn(row)) return trext(label, type, tdyn());
  if (auto* e = as<Type::RExt>(row)) {
    auto rest = row_postpend(e->rest, label, type);
    if (!rest) return std::nullopt;
    return trext(e->label, e->type, *rest);
  }
  return std::nullopt;
}

std::optional<TypePtr> row_grow(const TypePtr& row) {
  if (as<Type::REmpty>(row)) return row;
  if (as<Type::TyName>(row)) return row;
  if (auto* e = as<Type::RExt>(row)) return trext(e->label, tdyn(), tdyn());
  return std::nullopt;
}

TypePtr canonicalize(const TypePtr& t) {
  if (auto* f = as<Type::Fun>(t))
    return tfun(canonicalize(f->dom), canonicalize(f->cod));
  if (auto* q = as<Type::Forall>(t))
    return tforall(q->var, q->kind, canonicalize(q->body));
  if (auto* r = as<Type::Record>(t)) return trecord(canonicalize(r->row));
  if (auto* v = as<Type::Variant>(t)) return tvariant(canonicalize(v->row));
  if (as<Type::RExt>(t)) {
    auto view = row_view(t);
    // row_view only fails on non-row shapes; an extension always views
    RowView v = std::move(*view);
    for (auto& [label, type] : v.fields) type = canonicalize(type);
    std::stable_sort(v.fields.begin(), v.fields.end(),
                     [](const auto& a, const auto& b) {
                       return a.first < b.first;
                     });
    return row_build(v);
  }
  return t;  // atoms: Var, TyName, Dyn, Base, REmpty
}

bool row_equiv(const TypePtr& a, const TypePtr& b) {
  return type_equal(canonicalize(a), canonicalize(b));
}

}  // namespace rowg
