#include "gradual.hpp"

namespace rowg {

bool qpoly(const TypePtr& a) {
  if (as<Type::Forall>(a) || as<Type::REmpty>(a) || as<Type::RExt>(a))
    return false;
  return contains_dyn(a);
}

std::tuple<std::string, TypePtr, TypePtr> align_binders(
    const std::string& xa, const TypePtr& bodya, const std::string& xb,
    const TypePtr& bodyb) {
  if (xa == xb) return {xa, bodya, bodyb};
  auto fa = ftv(bodya);
  auto fb = ftv(bodyb);
  if (!fb.count(xa)) return {xa, bodya, subst_type(bodyb, xb, tvar(xa))};
  if (!fa.count(xb)) return {xb, subst_type(bodya, xa, tvar(xb)), bodyb};
  auto avoid = fa;
  avoid.insert(fb.begin(), fb.end());
  std::string x = fresh_name(xa, avoid);
  return {x, subst_type(bodya, xa, tvar(x)), subst_type(bodyb, xb, tvar(x))};
}

bool consistent(const TypePtr& a, const TypePtr& b) {
  if (is_dyn(a) || is_dyn(b)) return true;
  if (a->node.index() == b->node.index()) {
    if (auto* x = as<Type::Var>(a))
      return x->name == as<Type::Var>(b)->name;
    if (auto* x = as<Type::TyName>(a))
      return x->id == as<Type::TyName>(b)->id;
    if (auto* x = as<Type::Base>(a))
      return x->name == as<Type::Base>(b)->name;
    if (auto* x = as<Type::Fun>(a)) {
      auto* y = as<Type::Fun>(b);
      return consistent(x->dom, y->dom) && consistent(x->cod, y->cod);
    }
    if (auto* x = as<Type::Forall>(a)) {
      auto* y = as<Type::Forall>(b);
      if (x->kind != y->kind) return false;
      auto [v, ba, bb] = align_binders(x->var, x->body, y->var, y->body);
      return consistent(ba, bb);
    }
    if (auto* x = as<Type::Record>(a))
      return consistent(x->row, as<Type::Record>(b)->row);
    if (auto* x = as<Type::Variant>(a))
      return consistent(x->row, as<Type::Variant>(b)->row);
    if (as<Type::REmpty>(a)) return true;
    auto* x = as<Type::RExt>(a);
    auto* y = as<Type::RExt>(b);
    if (x->label == y->label && consistent(x->type, y->type) &&
        consistent(x->rest, y->rest))
      return true;
    // fall through to the asymmetric row rules
  }
  if (auto* x = as<Type::RExt>(a)) {
    if (ends_with_dyn(b) && !row_dom(b).count(x->label) &&
        consistent(x->rest, b))
      return true;
  }
  if (auto* y = as<Type::RExt>(b)) {
    if (ends_with_dyn(a) && !row_dom(a).count(y->label) &&
        consistent(a, y->rest))
      return true;
  }
  if (auto* x = as<Type::Forall>(a)) {
    if (qpoly(b) && !ftv(b).count(x->var) && consistent(x->body, b))
      return true;
  }
  if (auto* y = as<Type::Forall>(b)) {
    if (qpoly(a) && !ftv(a).count(y->var) && consistent(a, y->body))
      return true;
  }
  return false;
}

bool consistent_equiv(const TypePtr& a, const TypePtr& b) {
  if (is_dyn(a) || is_dyn(b)) return true;
  // rows: peel the left row's head field via label-searching split
  if (auto* x = as<Type::RExt>(a)) {
    auto sp = split_row(b, x->label);
    if (!sp) return false;
    return consistent_equiv(x->type, sp->first) &&
           consistent_equiv(x->rest, sp->second);
  }
  if (as<Type::RExt>(b)) {
    // the left side is no extension and not ?, so it offers no such field
    return false;
  }
  if (auto* x = as<Type::Forall>(a)) {
    if (auto* y = as<Type::Forall>(b)) {
      if (x->kind != y->kind) return false;
      auto [v, ba, bb] = align_binders(x->var, x->body, y->var, y->body);
      return consistent_equiv(ba, bb);
    }
    return qpoly(b) && !ftv(b).count(x->var) && consistent_equiv(x->body, b);
  }
  if (auto* y = as<Type::Forall>(b)) {
    return qpoly(a) && !ftv(a).count(y->var) && consistent_equiv(a, y->body);
  }
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = as<Type::Var>(a)) return x->name == as<Type::Var>(b)->name;
  if (auto* x = as<Type::TyName>(a))
    return x->id == as<Type::TyName>(b)->id;
  if (auto* x = as<Type::Base>(a))
    return x->name == as<Type::Base>(b)->name;
  if (auto* x = as<Type::Fun>(a)) {
    auto* y = as<Type::Fun>(b);
    return consistent_equiv(x->dom, y->dom) &&
           consistent_equiv(x->cod, y->cod);
  }
  if (auto* x = as<Type::Record>(a))
    return consistent_equiv(x->row, as<Type::Record>(b)->row);
  if (auto* x = as<Type::Variant>(a))
    return consistent_equiv(x->row, as<Type::Variant>(b)->row);
  if (as<Type::REmpty>(a)) return true;
  return false;
}

std::optional<std::pair<TypePtr, TypePtr>> match_fun(const TypePtr& a) {
  if (auto* f = as<Type::Fun>(a)) return std::make_pair(f->dom, f->cod);
  if (is_dyn(a)) return std::make_pair(tdyn(), tdyn());
  return std::nullopt;
}

std::optional<std::tuple<std::string, Kind, TypePtr>> match_forall(
    const TypePtr& a, Kind kind) {
  if (auto* q = as<Type::Forall>(a))
    return std::make_tuple(q->var, q->kind, q->body);
  if (is_dyn(a)) return std::make_tuple(std::string("X"), kind, tdyn());
  return std::nullopt;
}

std::optional<TypePtr> match_record(const TypePtr& a) {
  if (auto* r = as<Type::Record>(a)) return r->row;
  if (is_dyn(a)) return tdyn();
  return std::nullopt;
}

std::optional<TypePtr> match_variant(const TypePtr& a) {
  if (auto* v = as<Type::Variant>(a)) return v->row;
  if (is_dyn(a)) return tdyn();
  return std::nullopt;
}

namespace {

std::optional<TypePtr> merge_row(const TypePtr& a, const TypePtr& b) {
  if (row_equiv(a, b)) return a;
  if (is_dyn(a) || is_dyn(b)) return tdyn();
  if (auto* x = as<Type::RExt>(a)) {
    auto sp = split_row(b, x->label);
    if (!sp) return std::nullopt;
    auto field = merge(x->type, sp->first);
    if (!field) return std::nullopt;
    auto rest = merge_row(x->rest, sp->second);
    if (!rest) return std::nullopt;
    return trext(x->label, *field, *rest);
  }
  // left side has no more fields; only a ?-tail on either side could have
  // absorbed a mismatch, and both ? cases are handled above
  return std::nullopt;
}

}  // namespace

std::optional<TypePtr> merge(const TypePtr& a, const TypePtr& b) {
  if (row_equiv(a, b)) return a;
  if (is_dyn(a) || is_dyn(b)) return tdyn();
  if (as<Type::RExt>(a) || as<Type::REmpty>(a) || as<Type::RExt>(b) ||
      as<Type::REmpty>(b))
    return merge_row(a, b);
  if (a->node.index() != b->node.index()) return std::nullopt;
  if (auto* x = as<Type::Fun>(a)) {
    auto* y = as<Type::Fun>(b);
    auto dom = merge(x->dom, y->dom);
    if (!dom) return std::nullopt;
    auto cod = merge(x->cod, y->cod);
    if (!cod) return std::nullopt;
    return tfun(*dom, *cod);
  }
  if (auto* x = as<Type::Forall>(a)) {
    auto* y = as<Type::Forall>(b);
    if (x->kind != y->kind) return std::nullopt;
    auto [v, ba, bb] = align_binders(x->var, x->body, y->var, y->body);
    auto body = merge(ba, bb);
    if (!body) return std::nullopt;
    return tforall(v, x->kind, *body);
  }
  if (auto* x = as<Type::Record>(a)) {
    auto row = merge_row(x->row, as<Type::Record>(b)->row);
    if (!row) return std::nullopt;
    return trecord(*row);
  }
  if (auto* x = as<Type::Variant>(a)) {
    auto row = merge_row(x->row, as<Type::Variant>(b)->row);
    if (!row) return std::nullopt;
    return tvariant(*row);
  }
  // remaining same-shape atoms would have been equivalent already
  return std::nullopt;
}

}  // namespace rowg
