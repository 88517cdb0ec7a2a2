#include "core.hpp"

#include <tuple>

#include "gradual.hpp"
#include "rows.hpp"
#include "syntax.hpp"

namespace rowg {

bool convertible(const NameStore& store, const TypePtr& a, const ConvLabel& phi,
                 const TypePtr& b) {
  // Revealing: the named side is the source, its definition the target.
  if (phi.reveal) {
    if (auto* n = as<Type::TyName>(a); n && n->id == phi.name) {
      const auto* e = store.find(n->id);
      return e && type_equal(b, e->type);
    }
  } else {
    if (auto* n = as<Type::TyName>(b); n && n->id == phi.name) {
      const auto* e = store.find(n->id);
      return e && type_equal(a, e->type);
    }
  }
  if (auto* na = as<Type::TyName>(a)) {
    auto* nb = as<Type::TyName>(b);
    return nb && na->id == nb->id && na->id != phi.name;
  }
  if (auto* va = as<Type::Var>(a)) {
    auto* vb = as<Type::Var>(b);
    return vb && va->name == vb->name;
  }
  if (is_dyn(a)) return is_dyn(b);
  if (auto* ba = as<Type::Base>(a)) {
    auto* bb = as<Type::Base>(b);
    return bb && ba->name == bb->name;
  }
  if (auto* fa = as<Type::Fun>(a)) {
    auto* fb = as<Type::Fun>(b);
    return fb && convertible(store, fb->dom, phi.negate(), fa->dom) &&
           convertible(store, fa->cod, phi, fb->cod);
  }
  if (auto* qa = as<Type::Forall>(a)) {
    auto* qb = as<Type::Forall>(b);
    if (!qb || qa->kind != qb->kind) return false;
    auto [var, ba2, bb2] = align_binders(qa->var, qa->body, qb->var, qb->body);
    (void)var;
    return convertible(store, ba2, phi, bb2);
  }
  if (auto* ra = as<Type::Record>(a)) {
    auto* rb = as<Type::Record>(b);
    return rb && convertible(store, ra->row, phi, rb->row);
  }
  if (auto* va = as<Type::Variant>(a)) {
    auto* vb = as<Type::Variant>(b);
    return vb && convertible(store, va->row, phi, vb->row);
  }
  if (is_rempty(a)) return is_rempty(b);
  if (auto* xa = as<Type::RExt>(a)) {
    // Pointwise on rows, in order: conversion never reorders fields.
    auto* xb = as<Type::RExt>(b);
    return xb && xa->label == xb->label && convertible(store, xa->type, phi, xb->type) &&
           convertible(store, xa->rest, phi, xb->rest);
  }
  return false;
}

namespace {

TypeError core_err(const CorePtr& e, const std::string& msg) {
  return TypeError(msg + " in: " + pretty(e));
}

bool absorbs(const TypePtr& s, const TypePtr& t);

// Variant rows: an injection value inhabits every extension of its row, so a
// closed field prefix of s may stand for any longer row t.
bool absorbs_variant_row(TypePtr s, TypePtr t) {
  while (true) {
    auto* xs = as<Type::RExt>(s);
    auto* xt = as<Type::RExt>(t);
    if (xs && xt) {
      if (xs->label != xt->label || !absorbs(xs->type, xt->type)) return false;
      s = xs->rest;
      t = xt->rest;
      continue;
    }
    if (as<Type::REmpty>(s)) return true;
    return type_equal(s, t);
  }
}

bool absorbs_record_row(TypePtr s, TypePtr t) {
  while (true) {
    auto* xs = as<Type::RExt>(s);
    auto* xt = as<Type::RExt>(t);
    if (xs && xt) {
      if (xs->label != xt->label || !absorbs(xs->type, xt->type)) return false;
      s = xs->rest;
      t = xt->rest;
      continue;
    }
    return type_equal(s, t);
  }
}

// Whether every value of type s also checks at type t: equal everywhere
// except that variant rows of s may end early with a closed tail (injections
// synthesize the smallest row), covariantly through value positions.
bool absorbs(const TypePtr& s, const TypePtr& t) {
  if (type_equal(s, t)) return true;
  if (auto* fs = as<Type::Fun>(s)) {
    auto* ft = as<Type::Fun>(t);
    return ft && type_equal(fs->dom, ft->dom) && absorbs(fs->cod, ft->cod);
  }
  if (auto* qs = as<Type::Forall>(s)) {
    auto* qt = as<Type::Forall>(t);
    if (!qt || qs->kind != qt->kind) return false;
    if (qs->var == qt->var) return absorbs(qs->body, qt->body);
    return absorbs(qs->body, subst_type(qt->body, qt->var, tvar(qs->var)));
  }
  if (auto* rs = as<Type::Record>(s)) {
    auto* rt = as<Type::Record>(t);
    return rt && absorbs_record_row(rs->row, rt->row);
  }
  if (auto* vs = as<Type::Variant>(s)) {
    auto* vt = as<Type::Variant>(t);
    return vt && absorbs_variant_row(vs->row, vt->row);
  }
  return false;
}

class CoreChecker {
 public:
  CoreChecker(const NameStore& store, Ctx& ctx) : store_(store), ctx_(ctx) {}

  TypePtr check(const CorePtr& e, const TypePtr* expected) {
    if (auto* v = as<Core::Var>(e)) {
      auto ty = ctx_.lookup_term(v->name);
      if (!ty) throw core_err(e, "unbound variable: " + v->name);
      return done(e, *ty, expected);
    }
    if (auto* l = as<Core::Lit>(e)) {
      auto ty = const_type(l->value);
      if (!ty) throw core_err(e, "constant has no type");
      return done(e, ty, expected);
    }
    if (auto* lam = as<Core::Lam>(e)) {
      check_kind(&store_, ctx_, lam->ann, Kind::T);
      if (expected) {
        auto* fun = as<Type::Fun>(*expected);
        if (!fun || !type_equal(lam->ann, fun->dom))
          throw core_err(e, "lambda does not have expected type " + pretty(*expected));
        with_term(lam->var, lam->ann, lam->body, &fun->cod);
        return *expected;
      }
      TypePtr body = with_term(lam->var, lam->ann, lam->body, nullptr);
      return tfun(lam->ann, body);
    }
    if (auto* app = as<Core::App>(e)) {
      TypePtr fty = check(app->fun, nullptr);
      auto* fun = as<Type::Fun>(fty);
      if (!fun) throw core_err(e, "applying a non-function of type " + pretty(fty));
      check(app->arg, &fun->dom);
      return done(e, fun->cod, expected);
    }
    if (auto* tl = as<Core::TLam>(e)) {
      ctx_.push_type(tl->var, tl->kind);
      check_kind(&store_, ctx_, tl->bodyty, Kind::T);
      check(tl->body, &tl->bodyty);
      ctx_.pop();
      return done(e, tforall(tl->var, tl->kind, tl->bodyty), expected);
    }
    if (auto* ta = as<Core::TApp>(e)) {
      TypePtr fty = check(ta->fun, nullptr);
      auto* fa = as<Type::Forall>(fty);
      if (!fa) throw core_err(e, "type application to a non-quantified type " + pretty(fty));
      check_kind(&store_, ctx_, ta->arg, fa->kind);
      return done(e, subst_type(fa->body, fa->var, ta->arg), expected);
    }
    if (as<Core::REmp>(e)) return done(e, trecord(trempty()), expected);
    if (auto* ext = as<Core::RExtend>(e)) {
      if (expected) {
        auto* rec = as<Type::Record>(*expected);
        const Type::RExt* row = rec ? as<Type::RExt>(rec->row) : nullptr;
        if (!row || row->label != ext->label)
          throw core_err(e, "record {" + ext->label + "=...} does not have expected type " +
                                pretty(*expected));
        check(ext->field, &row->type);
        TypePtr rest = trecord(row->rest);
        check(ext->rest, &rest);
        return *expected;
      }
      TypePtr fty = check(ext->field, nullptr);
      TypePtr rty = check(ext->rest, nullptr);
      auto* rec = as<Type::Record>(rty);
      if (!rec) throw core_err(e, "record extension of a non-record of type " + pretty(rty));
      return trecord(trext(ext->label, fty, rec->row));
    }
    if (auto* rl = as<Core::RLet>(e)) {
      TypePtr rty = check(rl->record, nullptr);
      auto* rec = as<Type::Record>(rty);
      const Type::RExt* row = rec ? as<Type::RExt>(rec->row) : nullptr;
      if (!row || row->label != rl->label)
        throw core_err(e, "record pattern {" + rl->label + "=...} against type " + pretty(rty));
      ctx_.push_term(rl->xvar, row->type);
      ctx_.push_term(rl->yvar, trecord(row->rest));
      TypePtr body = check(rl->body, expected);
      ctx_.pop();
      ctx_.pop();
      return body;
    }
    if (auto* inj = as<Core::VInj>(e)) {
      if (expected) {
        auto* var = as<Type::Variant>(*expected);
        const Type::RExt* row = var ? as<Type::RExt>(var->row) : nullptr;
        if (!row || row->label != inj->label)
          throw core_err(e, "injection " + inj->label + " does not have expected type " +
                                pretty(*expected));
        check(inj->arg, &row->type);
        return *expected;
      }
      TypePtr aty = check(inj->arg, nullptr);
      return tvariant(trext(inj->label, aty, trempty()));
    }
    if (auto* emb = as<Core::VEmbed>(e)) {
      check_kind(&store_, ctx_, emb->ann, Kind::T);
      if (expected) {
        auto* var = as<Type::Variant>(*expected);
        const Type::RExt* row = var ? as<Type::RExt>(var->row) : nullptr;
        if (!row || row->label != emb->label || !type_equal(emb->ann, row->type))
          throw core_err(e, "embedding " + emb->label + " does not have expected type " +
                                pretty(*expected));
        TypePtr rest = tvariant(row->rest);
        check(emb->arg, &rest);
        return *expected;
      }
      TypePtr aty = check(emb->arg, nullptr);
      auto* var = as<Type::Variant>(aty);
      if (!var) throw core_err(e, "embedding over a non-variant of type " + pretty(aty));
      return tvariant(trext(emb->label, emb->ann, var->row));
    }
    if (auto* vc = as<Core::VCase>(e)) {
      TypePtr sty = check(vc->scrut, nullptr);
      auto* var = as<Type::Variant>(sty);
      const Type::RExt* row = var ? as<Type::RExt>(var->row) : nullptr;
      if (!row || row->label != vc->label)
        throw core_err(e, "case on label " + vc->label + " against scrutinee type " +
                              pretty(sty));
      TypePtr resty = tvariant(row->rest);
      if (expected) {
        with_term(vc->xvar, row->type, vc->onlabel, expected);
        with_term(vc->yvar, resty, vc->other, expected);
        return *expected;
      }
      // Synthesis: branch types must agree, except that an injection's open
      // row tail may be widened to the other branch's type.
      TypePtr t1 = with_term(vc->xvar, row->type, vc->onlabel, nullptr);
      TypePtr t2 = with_term(vc->yvar, resty, vc->other, nullptr);
      if (type_equal(t1, t2)) return t1;
      if (try_check(vc->xvar, row->type, vc->onlabel, t2)) return t2;
      if (try_check(vc->yvar, resty, vc->other, t1)) return t1;
      throw core_err(e, "case branches have unequal types " + pretty(t1) + " and " + pretty(t2));
    }
    if (auto* c = as<Core::Cast>(e)) {
      check_kind(&store_, ctx_, c->src, Kind::T);
      check_kind(&store_, ctx_, c->dst, Kind::T);
      check(c->body, &c->src);
      if (!consistent_equiv(c->src, c->dst))
        throw core_err(e, "cast between inconsistent types " + pretty(c->src) + " and " +
                              pretty(c->dst));
      return done(e, c->dst, expected);
    }
    if (auto* c = as<Core::Conv>(e)) {
      check_kind(&store_, ctx_, c->src, Kind::T);
      check_kind(&store_, ctx_, c->dst, Kind::T);
      check(c->body, &c->src);
      if (!convertible(store_, c->src, c->label, c->dst))
        throw core_err(e, "conversion " + show_conv(c->label) + " between types " +
                              pretty(c->src) + " and " + pretty(c->dst));
      return done(e, c->dst, expected);
    }
    if (as<Core::Blame>(e)) {
      if (!expected) throw core_err(e, "cannot synthesize a type for blame");
      check_kind(&store_, ctx_, *expected, Kind::T);
      return *expected;
    }
    throw core_err(e, "malformed term");
  }

 private:
  TypePtr done(const CorePtr& e, TypePtr got, const TypePtr* expected) {
    if (expected && !absorbs(got, *expected))
      throw core_err(e, "term has type " + pretty(got) + ", expected " + pretty(*expected));
    return got;
  }

  TypePtr with_term(const std::string& var, const TypePtr& ty, const CorePtr& body,
                    const TypePtr* expected) {
    ctx_.push_term(var, ty);
    TypePtr out;
    try {
      out = check(body, expected);
    } catch (...) {
      ctx_.pop();
      throw;
    }
    ctx_.pop();
    return out;
  }

  bool try_check(const std::string& var, const TypePtr& ty, const CorePtr& body,
                 const TypePtr& expected) {
    size_t depth = ctx_.items.size();
    try {
      with_term(var, ty, body, &expected);
      return true;
    } catch (const TypeError&) {
      ctx_.items.resize(depth);
      return false;
    }
  }

  const NameStore& store_;
  Ctx& ctx_;
};

class Translator {
 public:
  explicit Translator(Ctx& ctx) : ctx_(ctx) {}

  Translation tr(const TermPtr& m) {
    if (auto* v = as<Term::Var>(m)) {
      auto ty = ctx_.lookup_term(v->name);
      if (!ty) throw term_error(m, "unbound variable: " + v->name);
      return {cvar(v->name), *ty};
    }
    if (auto* l = as<Term::Lit>(m)) {
      auto ty = const_type(l->value);
      if (!ty) throw term_error(m, "constant has no type");
      return {clit(l->value), ty};
    }
    if (auto* lam = as<Term::Lam>(m)) {
      check_kind(nullptr, ctx_, lam->ann, Kind::T);
      ctx_.push_term(lam->var, lam->ann);
      Translation body = tr(lam->body);
      ctx_.pop();
      return {clam(lam->var, lam->ann, body.core), tfun(lam->ann, body.type)};
    }
    if (auto* app = as<Term::App>(m)) {
      Translation fun = tr(app->fun);
      BlameLabel p = alloc();
      Translation arg = tr(app->arg);
      BlameLabel q = alloc();
      auto shape = match_fun(fun.type);
      if (!shape) throw term_error(m, "applying a non-function of type " + pretty(fun.type));
      if (!consistent_equiv(arg.type, shape->first))
        throw term_error(m, "argument type " + pretty(arg.type) +
                                " is not consistent with parameter type " +
                                pretty(shape->first));
      CorePtr fcast = ccast(fun.core, fun.type, p, tfun(shape->first, shape->second));
      CorePtr acast = ccast(arg.core, arg.type, q, shape->first);
      return {capp(fcast, acast), shape->second};
    }
    if (auto* tl = as<Term::TLam>(m)) {
      ctx_.push_type(tl->var, tl->kind);
      Translation body = tr(tl->body);
      ctx_.pop();
      return {ctlam(tl->var, tl->kind, body.core, body.type),
              tforall(tl->var, tl->kind, body.type)};
    }
    if (auto* ta = as<Term::TApp>(m)) {
      Translation fun = tr(ta->fun);
      BlameLabel p = alloc();
      Kind want = kind_of(nullptr, ctx_, ta->arg);
      auto shape = match_forall(fun.type, want);
      if (!shape)
        throw term_error(m, "type application to a non-quantified type " + pretty(fun.type));
      auto [var, kind, body] = *shape;
      check_kind(nullptr, ctx_, ta->arg, kind);
      CorePtr fcast = ccast(fun.core, fun.type, p, tforall(var, kind, body));
      return {ctapp(fcast, ta->arg), subst_type(body, var, ta->arg)};
    }
    if (as<Term::REmp>(m)) return {cremp(), trecord(trempty())};
    if (auto* ext = as<Term::RExtend>(m)) {
      Translation field = tr(ext->field);
      Translation rest = tr(ext->rest);
      BlameLabel p = alloc();
      auto row = match_record(rest.type);
      if (!row) throw term_error(m, "record extension of a non-record of type " +
                                        pretty(rest.type));
      CorePtr rcast = ccast(rest.core, rest.type, p, trecord(*row));
      return {crext(ext->label, field.core, rcast), trecord(trext(ext->label, field.type, *row))};
    }
    if (auto* rl = as<Term::RLet>(m)) {
      Translation rec = tr(rl->record);
      BlameLabel p = alloc();
      auto row = match_record(rec.type);
      if (!row) throw term_error(m, "record pattern against non-record type " + pretty(rec.type));
      auto split = split_row(*row, rl->label);
      if (!split)
        throw term_error(m, "record row " + pretty(*row) + " has no label " + rl->label);
      CorePtr rcast =
          ccast(rec.core, rec.type, p, trecord(trext(rl->label, split->first, split->second)));
      ctx_.push_term(rl->xvar, split->first);
      ctx_.push_term(rl->yvar, trecord(split->second));
      Translation body = tr(rl->body);
      ctx_.pop();
      ctx_.pop();
      return {crlet(rl->label, rl->xvar, rl->yvar, rcast, body.core), body.type};
    }
    if (auto* inj = as<Term::VInj>(m)) {
      Translation arg = tr(inj->arg);
      return {cinj(inj->label, arg.core), tvariant(trext(inj->label, arg.type, trempty()))};
    }
    if (auto* emb = as<Term::VEmbed>(m)) {
      check_kind(nullptr, ctx_, emb->ann, Kind::T);
      Translation arg = tr(emb->arg);
      BlameLabel p = alloc();
      auto row = match_variant(arg.type);
      if (!row)
        throw term_error(m, "embedding over a non-variant of type " + pretty(arg.type));
      CorePtr acast = ccast(arg.core, arg.type, p, tvariant(*row));
      return {cembed(emb->label, emb->ann, acast),
              tvariant(trext(emb->label, emb->ann, *row))};
    }
    if (auto* vc = as<Term::VCase>(m)) {
      Translation scrut = tr(vc->scrut);
      BlameLabel p = alloc();
      auto row = match_variant(scrut.type);
      if (!row) throw term_error(m, "case over a non-variant of type " + pretty(scrut.type));
      auto split = split_row(*row, vc->label);
      if (!split)
        throw term_error(m, "variant row " + pretty(*row) + " has no label " + vc->label);
      CorePtr scast =
          ccast(scrut.core, scrut.type, p,
                tvariant(trext(vc->label, split->first, split->second)));
      ctx_.push_term(vc->xvar, split->first);
      Translation b1 = tr(vc->onlabel);
      BlameLabel q1 = alloc();
      ctx_.pop();
      ctx_.push_term(vc->yvar, tvariant(split->second));
      Translation b2 = tr(vc->other);
      BlameLabel q2 = alloc();
      ctx_.pop();
      auto join = merge(b1.type, b2.type);
      if (!join)
        throw term_error(m, "case branches have incompatible types " + pretty(b1.type) +
                                " and " + pretty(b2.type));
      CorePtr c1 = ccast(b1.core, b1.type, q1, *join);
      CorePtr c2 = ccast(b2.core, b2.type, q2, *join);
      return {ccase(scast, vc->label, vc->xvar, c1, vc->yvar, c2), *join};
    }
    if (as<Term::Ascribe>(m)) throw term_error(m, "ascription not desugared");
    throw term_error(m, "malformed term");
  }

 private:
  static TypeError term_error(const TermPtr& m, const std::string& msg) {
    return TypeError(msg, m->line, m->col);
  }
  BlameLabel alloc() { return BlameLabel{next_++, false}; }

  Ctx& ctx_;
  int next_ = 0;
};

}  // namespace

TypePtr typecheck_core(const NameStore& store, Ctx& ctx, const CorePtr& e,
                       const TypePtr* expected) {
  CoreChecker checker(store, ctx);
  return checker.check(e, expected);
}

Translation translate(Ctx& ctx, const TermPtr& m) {
  Translator t(ctx);
  return t.tr(desugar(m));
}

}  // namespace rowg
