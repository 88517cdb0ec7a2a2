#include "statics.hpp"

#include "gradual.hpp"
#include "rows.hpp"
#include "syntax.hpp"

namespace rowg {

std::optional<TypePtr> Ctx::lookup_term(const std::string& name) const {
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (auto* b = std::get_if<TermBind>(&*it); b && b->name == name) return b->type;
  }
  return std::nullopt;
}

std::optional<Kind> Ctx::lookup_type(const std::string& name) const {
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (auto* b = std::get_if<TypeBind>(&*it); b && b->name == name) return b->kind;
  }
  return std::nullopt;
}

static TypeError kind_err(const TypePtr& a, const std::string& msg) {
  return TypeError(msg + ": " + pretty(a), a->line, a->col);
}

void check_kind(const NameStore* store, const Ctx& ctx, const TypePtr& a, Kind k) {
  if (auto* v = as<Type::Var>(a)) {
    auto got = ctx.lookup_type(v->name);
    if (!got) throw kind_err(a, "unbound type variable");
    if (*got != k)
      throw kind_err(a, std::string("type variable has kind ") + kind_name(*got) +
                            ", expected " + kind_name(k));
    return;
  }
  if (auto* n = as<Type::TyName>(a)) {
    const NameStore::Entry* e = store ? store->find(n->id) : nullptr;
    if (!e) throw kind_err(a, "unknown type name");
    if (e->kind != k)
      throw kind_err(a, std::string("type name has kind ") + kind_name(e->kind) +
                            ", expected " + kind_name(k));
    return;
  }
  if (as<Type::Dyn>(a)) return;  // ? is well formed at both kinds
  if (as<Type::Base>(a)) {
    if (k != Kind::T) throw kind_err(a, "base type used where a row is required");
    return;
  }
  if (auto* f = as<Type::Fun>(a)) {
    if (k != Kind::T) throw kind_err(a, "function type used where a row is required");
    check_kind(store, ctx, f->dom, Kind::T);
    check_kind(store, ctx, f->cod, Kind::T);
    return;
  }
  if (auto* fa = as<Type::Forall>(a)) {
    if (k != Kind::T) throw kind_err(a, "quantified type used where a row is required");
    Ctx inner = ctx;
    inner.push_type(fa->var, fa->kind);
    check_kind(store, inner, fa->body, Kind::T);
    return;
  }
  if (auto* r = as<Type::Record>(a)) {
    if (k != Kind::T) throw kind_err(a, "record type used where a row is required");
    check_kind(store, ctx, r->row, Kind::R);
    return;
  }
  if (auto* v = as<Type::Variant>(a)) {
    if (k != Kind::T) throw kind_err(a, "variant type used where a row is required");
    check_kind(store, ctx, v->row, Kind::R);
    return;
  }
  if (as<Type::REmpty>(a)) {
    if (k != Kind::R) throw kind_err(a, "row used where a type is required");
    return;
  }
  if (auto* x = as<Type::RExt>(a)) {
    if (k != Kind::R) throw kind_err(a, "row used where a type is required");
    check_kind(store, ctx, x->type, Kind::T);
    check_kind(store, ctx, x->rest, Kind::R);
    return;
  }
  throw kind_err(a, "malformed type");
}

Kind kind_of(const NameStore* store, const Ctx& ctx, const TypePtr& a) {
  if (as<Type::REmpty>(a) || as<Type::RExt>(a)) {
    check_kind(store, ctx, a, Kind::R);
    return Kind::R;
  }
  if (auto* v = as<Type::Var>(a)) {
    auto got = ctx.lookup_type(v->name);
    if (!got) throw kind_err(a, "unbound type variable");
    return *got;
  }
  if (auto* n = as<Type::TyName>(a)) {
    const NameStore::Entry* e = store ? store->find(n->id) : nullptr;
    if (!e) throw kind_err(a, "unknown type name");
    return e->kind;
  }
  if (as<Type::Dyn>(a)) return Kind::T;  // unconstrained; callers may override
  check_kind(store, ctx, a, Kind::T);
  return Kind::T;
}

void wf_context(const NameStore* store, const Ctx& ctx) {
  Ctx prefix;
  for (const auto& item : ctx.items) {
    if (auto* b = std::get_if<Ctx::TermBind>(&item)) {
      check_kind(store, prefix, b->type, Kind::T);
    }
    prefix.items.push_back(item);
  }
}

static TypeError term_err(const TermPtr& m, const std::string& msg) {
  return TypeError(msg, m->line, m->col);
}

namespace {

// The two checkers share traversal shape; Mode picks the rules at
// eliminations (exact shape + row equality vs. matching + consistency).
enum class Mode { Static, Gradual };

class Checker {
 public:
  Checker(Ctx& ctx, Mode mode) : ctx_(ctx), mode_(mode) {}

  TypePtr check(const TermPtr& m) {
    if (auto* v = as<Term::Var>(m)) {
      auto ty = ctx_.lookup_term(v->name);
      if (!ty) throw term_err(m, "unbound variable: " + v->name);
      return *ty;
    }
    if (auto* l = as<Term::Lit>(m)) {
      auto ty = const_type(l->value);
      if (!ty) throw term_err(m, "constant has no type");
      return ty;
    }
    if (auto* lam = as<Term::Lam>(m)) {
      check_kind(nullptr, ctx_, lam->ann, Kind::T);
      ctx_.push_term(lam->var, lam->ann);
      TypePtr body = check(lam->body);
      ctx_.pop();
      return tfun(lam->ann, body);
    }
    if (auto* app = as<Term::App>(m)) {
      TypePtr fty = check(app->fun);
      TypePtr aty = check(app->arg);
      if (mode_ == Mode::Static) {
        auto* fun = as<Type::Fun>(fty);
        if (!fun) throw term_err(m, "applying a non-function of type " + pretty(fty));
        if (!row_equiv(aty, fun->dom))
          throw term_err(m, "argument type " + pretty(aty) +
                                " does not equal parameter type " + pretty(fun->dom));
        return fun->cod;
      }
      auto fun = match_fun(fty);
      if (!fun) throw term_err(m, "applying a non-function of type " + pretty(fty));
      if (!consistent_equiv(aty, fun->first))
        throw term_err(m, "argument type " + pretty(aty) +
                              " is not consistent with parameter type " + pretty(fun->first));
      return fun->second;
    }
    if (auto* tlam = as<Term::TLam>(m)) {
      ctx_.push_type(tlam->var, tlam->kind);
      TypePtr body = check(tlam->body);
      ctx_.pop();
      return tforall(tlam->var, tlam->kind, body);
    }
    if (auto* tapp = as<Term::TApp>(m)) {
      TypePtr fty = check(tapp->fun);
      if (mode_ == Mode::Static) {
        auto* fa = as<Type::Forall>(fty);
        if (!fa) throw term_err(m, "type application to a non-quantified type " + pretty(fty));
        check_kind(nullptr, ctx_, tapp->arg, fa->kind);
        return subst_type(fa->body, fa->var, tapp->arg);
      }
      Kind want = kind_of(nullptr, ctx_, tapp->arg);
      auto fa = match_forall(fty, want);
      if (!fa) throw term_err(m, "type application to a non-quantified type " + pretty(fty));
      auto [var, kind, body] = *fa;
      check_kind(nullptr, ctx_, tapp->arg, kind);
      return subst_type(body, var, tapp->arg);
    }
    if (as<Term::REmp>(m)) return trecord(trempty());
    if (auto* ext = as<Term::RExtend>(m)) {
      TypePtr fty = check(ext->field);
      TypePtr rty = check(ext->rest);
      TypePtr row = record_row(m, rty);
      return trecord(trext(ext->label, fty, row));
    }
    if (auto* rl = as<Term::RLet>(m)) {
      TypePtr rty = check(rl->record);
      TypePtr row = record_row(m, rty);
      auto split = split_known(m, row, rl->label, "record");
      ctx_.push_term(rl->xvar, split.first);
      ctx_.push_term(rl->yvar, trecord(split.second));
      TypePtr body = check(rl->body);
      ctx_.pop();
      ctx_.pop();
      return body;
    }
    if (auto* inj = as<Term::VInj>(m)) {
      TypePtr aty = check(inj->arg);
      return tvariant(trext(inj->label, aty, trempty()));
    }
    if (auto* emb = as<Term::VEmbed>(m)) {
      check_kind(nullptr, ctx_, emb->ann, Kind::T);
      TypePtr aty = check(emb->arg);
      TypePtr row = variant_row(m, aty);
      return tvariant(trext(emb->label, emb->ann, row));
    }
    if (auto* vc = as<Term::VCase>(m)) {
      TypePtr sty = check(vc->scrut);
      TypePtr row = variant_row(m, sty);
      auto split = split_known(m, row, vc->label, "variant");
      ctx_.push_term(vc->xvar, split.first);
      TypePtr t1 = check(vc->onlabel);
      ctx_.pop();
      ctx_.push_term(vc->yvar, tvariant(split.second));
      TypePtr t2 = check(vc->other);
      ctx_.pop();
      if (mode_ == Mode::Static) {
        if (!row_equiv(t1, t2))
          throw term_err(m, "case branches have unequal types " + pretty(t1) + " and " +
                                pretty(t2));
        return t1;
      }
      auto merged = merge(t1, t2);
      if (!merged)
        throw term_err(m, "case branches have incompatible types " + pretty(t1) + " and " +
                              pretty(t2));
      return *merged;
    }
    if (as<Term::Ascribe>(m)) throw term_err(m, "ascription not desugared");
    throw term_err(m, "malformed term");
  }

 private:
  TypePtr record_row(const TermPtr& at, const TypePtr& ty) {
    if (mode_ == Mode::Static) {
      auto* rec = as<Type::Record>(ty);
      if (!rec) throw term_err(at, "expected a record, found type " + pretty(ty));
      return rec->row;
    }
    auto row = match_record(ty);
    if (!row) throw term_err(at, "expected a record, found type " + pretty(ty));
    return *row;
  }

  TypePtr variant_row(const TermPtr& at, const TypePtr& ty) {
    if (mode_ == Mode::Static) {
      auto* var = as<Type::Variant>(ty);
      if (!var) throw term_err(at, "expected a variant, found type " + pretty(ty));
      return var->row;
    }
    auto row = match_variant(ty);
    if (!row) throw term_err(at, "expected a variant, found type " + pretty(ty));
    return *row;
  }

  // Split off label `l`; statically the label must be present in the row's
  // field list, gradually an ? tail also admits it.
  std::pair<TypePtr, TypePtr> split_known(const TermPtr& at, const TypePtr& row,
                                          const std::string& l, const char* what) {
    if (mode_ == Mode::Static && !row_dom(row).count(l))
      throw term_err(at, std::string(what) + " row " + pretty(row) + " has no label " + l);
    auto split = split_row(row, l);
    if (!split)
      throw term_err(at, std::string(what) + " row " + pretty(row) + " has no label " + l);
    return *split;
  }

  Ctx& ctx_;
  Mode mode_;
};

}  // namespace

TypePtr typecheck_static(Ctx& ctx, const TermPtr& m) {
  Checker checker(ctx, Mode::Static);
  return checker.check(desugar(m));
}

TypePtr typecheck_gradual(Ctx& ctx, const TermPtr& m) {
  Checker checker(ctx, Mode::Gradual);
  return checker.check(desugar(m));
}

}  // namespace rowg
