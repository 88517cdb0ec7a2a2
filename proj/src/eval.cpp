#include "eval.hpp"

#include <tuple>

#include "core.hpp"
#include "gradual.hpp"
#include "rows.hpp"
#include "statics.hpp"
#include "syntax.hpp"

namespace rowg {

bool ground_type(const TypePtr& a) {
  if (as<Type::Base>(a) || as<Type::TyName>(a)) return true;
  if (auto* f = as<Type::Fun>(a)) return is_dyn(f->dom) && is_dyn(f->cod);
  if (auto* r = as<Type::Record>(a)) return is_dyn(r->row);
  if (auto* v = as<Type::Variant>(a)) return is_dyn(v->row);
  return false;
}

std::optional<TypePtr> ground_of(const TypePtr& a) {
  if (as<Type::Base>(a) || as<Type::TyName>(a)) return a;
  if (as<Type::Fun>(a)) return tfun(tdyn(), tdyn());
  if (as<Type::Record>(a)) return trecord(tdyn());
  if (as<Type::Variant>(a)) return tvariant(tdyn());
  return std::nullopt;
}

bool ground_row(const TypePtr& r) {
  if (is_rempty(r) || as<Type::TyName>(r)) return true;
  if (auto* x = as<Type::RExt>(r)) return is_dyn(x->type) && is_dyn(x->rest);
  return false;
}

// Conceal-conversion value shapes: a, [a], <a> for the concealed name.
static bool conceal_shape(const TypePtr& b, int name) {
  if (auto* n = as<Type::TyName>(b)) return n->id == name;
  if (auto* r = as<Type::Record>(b)) {
    auto* n = as<Type::TyName>(r->row);
    return n && n->id == name;
  }
  if (auto* v = as<Type::Variant>(b)) {
    auto* n = as<Type::TyName>(v->row);
    return n && n->id == name;
  }
  return false;
}

// Shapes at which an identity conversion collapses (never the label's own
// name, which conceal/reveal handle instead).
static bool cid_shape(const TypePtr& a, int name) {
  if (is_dyn(a) || as<Type::Base>(a)) return true;
  if (auto* n = as<Type::TyName>(a)) return n->id != name;
  if (auto* r = as<Type::Record>(a)) {
    if (is_dyn(r->row) || is_rempty(r->row)) return true;
    auto* n = as<Type::TyName>(r->row);
    return n && n->id != name;
  }
  if (auto* v = as<Type::Variant>(a)) {
    if (is_dyn(v->row)) return true;
    auto* n = as<Type::TyName>(v->row);
    return n && n->id != name;
  }
  return false;
}

bool is_value(const CorePtr& e) {
  if (as<Core::Lit>(e) || as<Core::Lam>(e) || as<Core::TLam>(e) || as<Core::REmp>(e))
    return true;
  if (auto* ext = as<Core::RExtend>(e)) return is_value(ext->field) && is_value(ext->rest);
  if (auto* inj = as<Core::VInj>(e)) return is_value(inj->arg);
  if (auto* emb = as<Core::VEmbed>(e)) return is_value(emb->arg);
  if (auto* c = as<Core::Cast>(e)) {
    if (!is_value(c->body)) return false;
    if (is_dyn(c->dst)) return ground_type(c->src);
    if (auto* rb = as<Type::Record>(c->dst); rb && is_dyn(rb->row)) {
      auto* ra = as<Type::Record>(c->src);
      return ra && ground_row(ra->row);
    }
    if (auto* vb = as<Type::Variant>(c->dst); vb && is_dyn(vb->row)) {
      auto* va = as<Type::Variant>(c->src);
      return va && ground_row(va->row);
    }
    return false;
  }
  if (auto* c = as<Core::Conv>(e))
    return is_value(c->body) && !c->label.reveal && conceal_shape(c->dst, c->label.name);
  return false;
}

std::optional<std::pair<CorePtr, CorePtr>> record_split_value(const CorePtr& v,
                                                              const std::string& l) {
  auto* ext = as<Core::RExtend>(v);
  if (!ext) return std::nullopt;
  if (ext->label == l) return std::make_pair(ext->field, ext->rest);
  auto inner = record_split_value(ext->rest, l);
  if (!inner) return std::nullopt;
  return std::make_pair(inner->first, crext(ext->label, ext->field, inner->second));
}

CorePtr row_embed(const TypePtr& row, CorePtr e) {
  if (auto* x = as<Type::RExt>(row)) return cembed(x->label, x->type, row_embed(x->rest, std::move(e)));
  return e;
}

CorePtr field_insert(const TypePtr& row, const std::string& l, const TypePtr& a, CorePtr e) {
  if (auto* x = as<Type::RExt>(row)) {
    auto fv = free_vars(e);
    std::string xv = fresh_name("x", fv);
    fv.insert(xv);
    std::string yv = fresh_name("y", fv);
    return ccase(std::move(e), x->label, xv, cinj(x->label, cvar(xv)), yv,
                 cembed(x->label, x->type, field_insert(x->rest, l, a, cvar(yv))));
  }
  return cembed(l, a, std::move(e));
}

namespace {

struct RowDecomp {
  std::vector<std::pair<std::string, TypePtr>> prefix;  // fields before l
  TypePtr field;                                        // type at l
  TypePtr suffix;                                       // row after l
};

std::optional<RowDecomp> decompose_row(const TypePtr& row, const std::string& l) {
  RowDecomp out;
  TypePtr cur = row;
  while (auto* x = as<Type::RExt>(cur)) {
    if (x->label == l) {
      out.field = x->type;
      out.suffix = x->rest;
      return out;
    }
    out.prefix.emplace_back(x->label, x->type);
    cur = x->rest;
  }
  return std::nullopt;
}

TypePtr closed_row(const std::vector<std::pair<std::string, TypePtr>>& fields) {
  RowView v;
  v.fields = fields;
  v.tail = RowView::Tail::Empty;
  return row_build(v);
}

}  // namespace

std::vector<Reduction> reduce_all(const CorePtr& e, bool primed_conlift) {
  std::vector<Reduction> out;
  if (is_value(e)) return out;
  auto hit = [&](const char* rule, CorePtr term) { out.push_back({std::move(term), rule}); };

  if (auto* app = as<Core::App>(e)) {
    if (is_value(app->fun) && is_value(app->arg)) {
      auto* f = as<Core::Lit>(app->fun);
      auto* a = as<Core::Lit>(app->arg);
      if (f && a) {
        if (auto r = const_apply(f->value, a->value)) hit("R-Const", clit(*r));
      }
      if (auto* lam = as<Core::Lam>(app->fun))
        hit("R-Beta", subst_core(lam->body, lam->var, app->arg));
    }
    return out;
  }

  if (auto* rl = as<Core::RLet>(e)) {
    auto* ext = as<Core::RExtend>(rl->record);
    if (is_value(rl->record) && ext && ext->label == rl->label) {
      CorePtr body = rl->xvar == rl->yvar
                         ? subst_core(rl->body, rl->yvar, ext->rest)
                         : subst_core(subst_core(rl->body, rl->xvar, ext->field), rl->yvar,
                                      ext->rest);
      hit("R-Record", std::move(body));
    }
    return out;
  }

  if (auto* vc = as<Core::VCase>(e)) {
    if (is_value(vc->scrut)) {
      if (auto* inj = as<Core::VInj>(vc->scrut); inj && inj->label == vc->label)
        hit("R-CaseL", subst_core(vc->onlabel, vc->xvar, inj->arg));
      if (auto* emb = as<Core::VEmbed>(vc->scrut); emb && emb->label == vc->label)
        hit("R-CaseR", subst_core(vc->other, vc->yvar, emb->arg));
    }
    return out;
  }

  if (auto* c = as<Core::Cast>(e)) {
    if (!is_value(c->body)) return out;
    const TypePtr& A = c->src;
    const TypePtr& B = c->dst;
    const CorePtr& v = c->body;
    const BlameLabel& p = c->label;
    bool adyn = is_dyn(A), bdyn = is_dyn(B);

    if (type_equal(A, B) && (adyn || as<Type::Base>(A) || as<Type::TyName>(A))) hit("R-Id", v);

    if (bdyn && !adyn && !as<Type::Forall>(A)) {
      if (auto g = ground_of(A); g && !type_equal(A, *g))
        hit("R-ToDyn", ccast(ccast(v, A, p, *g), *g, p, B));
    }
    if (adyn && !bdyn && !as<Type::Forall>(B)) {
      if (auto h = ground_of(B); h && !type_equal(B, *h))
        hit("R-FromDyn", ccast(ccast(v, A, p, *h), *h, p, B));
    }
    if (adyn && ground_type(B)) {
      if (auto* inner = as<Core::Cast>(v);
          inner && is_dyn(inner->dst) && ground_type(inner->src)) {
        if (type_equal(inner->src, B)) hit("R-Ground", inner->body);
        else hit("R-Blame", cblame(p));
      }
    }
    if (as<Type::Fun>(A) && as<Type::Fun>(B)) {
      auto* fa = as<Type::Fun>(A);
      auto* fb = as<Type::Fun>(B);
      std::string x = fresh_name("x", free_vars(v));
      hit("R-Wrap",
          clam(x, fb->dom,
               ccast(capp(v, ccast(cvar(x), fb->dom, p.negate(), fa->dom)), fa->cod, p,
                     fb->cod)));
    }
    if (auto* qa = as<Type::Forall>(A)) {
      if (auto* qb = as<Type::Forall>(B)) {
        if (qa->kind == qb->kind) {
          auto [var, ba, bb] = align_binders(qa->var, qa->body, qb->var, qb->body);
          hit("R-Content",
              ctlam(var, qa->kind, ccast(ctapp(v, tvar(var)), ba, p, bb), bb));
        }
      } else if (qpoly(B)) {
        hit("R-Inst", ccast(ctapp(v, tdyn()), subst_type(qa->body, qa->var, tdyn()), p, B));
      }
    }
    if (auto* qb = as<Type::Forall>(B); qb && !as<Type::Forall>(A) && qpoly(A)) {
      std::string var = qb->var;
      TypePtr body = qb->body;
      if (ftv(A).count(var)) {
        auto avoid = ftv(A);
        auto bodyftv = ftv(body);
        avoid.insert(bodyftv.begin(), bodyftv.end());
        std::string fresh = fresh_name(var, avoid);
        body = subst_type(body, var, tvar(fresh));
        var = fresh;
      }
      hit("R-Gen", ctlam(var, qb->kind, ccast(v, A, p, body), body));
    }

    auto* ra = as<Type::Record>(A);
    auto* rb = as<Type::Record>(B);
    if (ra && rb) {
      const TypePtr& r1 = ra->row;
      const TypePtr& r2 = rb->row;
      if (type_equal(r1, r2) && (is_rempty(r1) || as<Type::TyName>(r1))) hit("R-RId", v);
      if (is_dyn(r2)) {
        if (auto g = row_grow(r1); g && !type_equal(r1, *g))
          hit("R-RToDyn", ccast(ccast(v, A, p, trecord(*g)), trecord(*g), p, B));
      }
      if (is_dyn(r1)) {
        if (auto* inner = as<Core::Cast>(v)) {
          auto* ri = as<Type::Record>(inner->src);
          auto* rid = as<Type::Record>(inner->dst);
          if (ri && rid && is_dyn(rid->row) && ground_row(ri->row)) {
            if (consistent_equiv(ri->row, r2))
              hit("R-RFromDyn", ccast(inner->body, inner->src, p, B));
            else hit("R-RBlame", cblame(p));
          }
        }
      }
      if (auto* x2 = as<Type::RExt>(r2)) {
        if (row_dom(r1).count(x2->label)) {
          auto sv = record_split_value(v, x2->label);
          auto sr = split_row(r1, x2->label);
          if (sv && sr)
            hit("R-RRev", crext(x2->label, ccast(sv->first, sr->first, p, x2->type),
                                ccast(sv->second, trecord(sr->second), p,
                                      trecord(x2->rest))));
        } else if (!is_dyn(r1)) {
          if (auto pp = row_postpend(r1, x2->label, x2->type)) {
            TypePtr mid = trecord(*pp);
            hit("R-RCon", ccast(ccast(v, A, p, mid), mid, p, B));
          }
        }
      }
    }

    auto* va = as<Type::Variant>(A);
    auto* vb = as<Type::Variant>(B);
    if (va && vb) {
      const TypePtr& r1 = va->row;
      const TypePtr& r2 = vb->row;
      if (auto* n1 = as<Type::TyName>(r1)) {
        if (auto* n2 = as<Type::TyName>(r2); n2 && n1->id == n2->id) hit("R-VIdName", v);
      }
      if (is_dyn(r2)) {
        if (auto g = row_grow(r1); g && !type_equal(r1, *g))
          hit("R-VToDyn", ccast(ccast(v, A, p, tvariant(*g)), tvariant(*g), p, B));
      }
      if (is_dyn(r1)) {
        if (auto* inner = as<Core::Cast>(v)) {
          auto* vi = as<Type::Variant>(inner->src);
          auto* vid = as<Type::Variant>(inner->dst);
          if (vi && vid && is_dyn(vid->row) && ground_row(vi->row)) {
            if (consistent_equiv(vi->row, r2))
              hit("R-VFromDyn", ccast(inner->body, inner->src, p, B));
            else hit("R-VBlame", cblame(p));
          }
        }
      }
      if (auto* x1 = as<Type::RExt>(r1)) {
        if (auto* inj = as<Core::VInj>(v); inj && inj->label == x1->label) {
          if (auto dec = decompose_row(r2, x1->label)) {
            hit("R-VRevInj", row_embed(closed_row(dec->prefix),
                                       cinj(x1->label, ccast(inj->arg, x1->type, p,
                                                             dec->field))));
          } else if (!is_dyn(r2)) {
            hit("R-VConInj",
                row_embed(r2, ccast(cinj(x1->label, inj->arg),
                                    tvariant(trext(x1->label, x1->type, tdyn())), p,
                                    tvariant(tdyn()))));
          }
        }
        if (auto* emb = as<Core::VEmbed>(v); emb && emb->label == x1->label) {
          if (auto dec = decompose_row(r2, x1->label)) {
            TypePtr rest = dec->suffix;
            for (size_t i = dec->prefix.size(); i-- > 0;)
              rest = trext(dec->prefix[i].first, dec->prefix[i].second, rest);
            hit("R-VRevLift",
                field_insert(closed_row(dec->prefix), x1->label, dec->field,
                             ccast(emb->arg, tvariant(x1->rest), p, tvariant(rest))));
          } else if (!is_dyn(r2)) {
            if (primed_conlift) {
              hit("R-VConLift'", ccast(emb->arg, tvariant(x1->rest), p, B));
            } else if (auto pp = row_postpend(r2, x1->label, x1->type)) {
              hit("R-VConLift",
                  ccast(field_insert(r2, x1->label, x1->type,
                                     ccast(emb->arg, tvariant(x1->rest), p, B)),
                        tvariant(*pp), p, B));
            }
          }
        }
      }
    }
    return out;
  }

  if (auto* c = as<Core::Conv>(e)) {
    if (!is_value(c->body)) return out;
    const TypePtr& A = c->src;
    const TypePtr& B = c->dst;
    const CorePtr& v = c->body;
    const ConvLabel& phi = c->label;

    if (phi.reveal) {
      if (auto* inner = as<Core::Conv>(v);
          inner && !inner->label.reveal && inner->label.name == phi.name &&
          conceal_shape(inner->dst, phi.name) && type_equal(A, inner->dst) &&
          type_equal(B, inner->src))
        hit("R-CName", inner->body);
    }
    if (type_equal(A, B) && cid_shape(A, phi.name)) hit("R-CId", v);
    if (as<Type::Fun>(A) && as<Type::Fun>(B)) {
      auto* fa = as<Type::Fun>(A);
      auto* fb = as<Type::Fun>(B);
      std::string x = fresh_name("x", free_vars(v));
      hit("R-CFun",
          clam(x, fb->dom,
               cconv(capp(v, cconv(cvar(x), fb->dom, phi.negate(), fa->dom)), fa->cod, phi,
                     fb->cod)));
    }
    if (auto* qa = as<Type::Forall>(A)) {
      if (auto* qb = as<Type::Forall>(B); qb && qa->kind == qb->kind) {
        auto [var, ba, bb] = align_binders(qa->var, qa->body, qb->var, qb->body);
        hit("R-CForall",
            ctlam(var, qa->kind, cconv(ctapp(v, tvar(var)), ba, phi, bb), bb));
      }
    }
    auto* ra = as<Type::Record>(A);
    auto* rb = as<Type::Record>(B);
    if (ra && rb) {
      auto* x1 = as<Type::RExt>(ra->row);
      auto* x2 = as<Type::RExt>(rb->row);
      if (x1 && x2 && x1->label == x2->label) {
        auto fv = free_vars(v);
        std::string xv = fresh_name("x", fv);
        fv.insert(xv);
        std::string yv = fresh_name("y", fv);
        hit("R-CRExt",
            crlet(x1->label, xv, yv, v,
                  crext(x1->label, cconv(cvar(xv), x1->type, phi, x2->type),
                        cconv(cvar(yv), trecord(x1->rest), phi, trecord(x2->rest)))));
      }
    }
    auto* va = as<Type::Variant>(A);
    auto* vb = as<Type::Variant>(B);
    if (va && vb) {
      auto* x1 = as<Type::RExt>(va->row);
      auto* x2 = as<Type::RExt>(vb->row);
      if (x1 && x2 && x1->label == x2->label) {
        auto fv = free_vars(v);
        std::string xv = fresh_name("x", fv);
        fv.insert(xv);
        std::string yv = fresh_name("y", fv);
        hit("R-CVar",
            ccase(v, x1->label, xv, cinj(x1->label, cconv(cvar(xv), x1->type, phi, x2->type)),
                  yv,
                  cembed(x1->label, x2->type,
                         cconv(cvar(yv), tvariant(x1->rest), phi, tvariant(x2->rest)))));
      }
    }
    return out;
  }

  return out;
}

std::optional<Reduction> reduce(const CorePtr& e, bool primed_conlift) {
  auto all = reduce_all(e, primed_conlift);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::optional<Reduction> step(NameStore& store, const CorePtr& e, bool primed_conlift) {
  if (is_value(e) || as<Core::Blame>(e)) return std::nullopt;

  // Step inside an evaluation-context hole; blame in the hole discards the
  // whole context in a single step.
  auto sub = [&](const CorePtr& child, auto rebuild) -> std::optional<Reduction> {
    if (as<Core::Blame>(child)) return Reduction{child, "E-Blame"};
    auto r = step(store, child, primed_conlift);
    if (!r) return std::nullopt;
    if (r->rule == "E-Blame") return r;
    return Reduction{rebuild(r->term), r->rule};
  };

  if (auto* app = as<Core::App>(e)) {
    if (!is_value(app->fun))
      return sub(app->fun, [&](CorePtr t) { return capp(std::move(t), app->arg); });
    if (!is_value(app->arg))
      return sub(app->arg, [&](CorePtr t) { return capp(app->fun, std::move(t)); });
  } else if (auto* ta = as<Core::TApp>(e)) {
    if (!is_value(ta->fun))
      return sub(ta->fun, [&](CorePtr t) { return ctapp(std::move(t), ta->arg); });
    if (auto* tl = as<Core::TLam>(ta->fun)) {
      int id = store.fresh(tl->kind, ta->arg);
      TypePtr name = tname(id);
      CorePtr body = subst_type_in_core(tl->body, tl->var, name);
      TypePtr src = subst_type(tl->bodyty, tl->var, name);
      TypePtr dst = subst_type(tl->bodyty, tl->var, ta->arg);
      return Reduction{cconv(std::move(body), std::move(src), ConvLabel{id, true},
                             std::move(dst)),
                       "E-TyBeta"};
    }
    return std::nullopt;
  } else if (auto* ext = as<Core::RExtend>(e)) {
    if (!is_value(ext->field))
      return sub(ext->field,
                 [&](CorePtr t) { return crext(ext->label, std::move(t), ext->rest); });
    if (!is_value(ext->rest))
      return sub(ext->rest,
                 [&](CorePtr t) { return crext(ext->label, ext->field, std::move(t)); });
  } else if (auto* rl = as<Core::RLet>(e)) {
    if (!is_value(rl->record))
      return sub(rl->record, [&](CorePtr t) {
        return crlet(rl->label, rl->xvar, rl->yvar, std::move(t), rl->body);
      });
  } else if (auto* inj = as<Core::VInj>(e)) {
    if (!is_value(inj->arg))
      return sub(inj->arg, [&](CorePtr t) { return cinj(inj->label, std::move(t)); });
  } else if (auto* emb = as<Core::VEmbed>(e)) {
    if (!is_value(emb->arg))
      return sub(emb->arg,
                 [&](CorePtr t) { return cembed(emb->label, emb->ann, std::move(t)); });
  } else if (auto* vc = as<Core::VCase>(e)) {
    if (!is_value(vc->scrut))
      return sub(vc->scrut, [&](CorePtr t) {
        return ccase(std::move(t), vc->label, vc->xvar, vc->onlabel, vc->yvar, vc->other);
      });
  } else if (auto* c = as<Core::Cast>(e)) {
    if (!is_value(c->body))
      return sub(c->body,
                 [&](CorePtr t) { return ccast(std::move(t), c->src, c->label, c->dst); });
  } else if (auto* c = as<Core::Conv>(e)) {
    if (!is_value(c->body))
      return sub(c->body,
                 [&](CorePtr t) { return cconv(std::move(t), c->src, c->label, c->dst); });
  }

  return reduce(e, primed_conlift);
}

static bool contains_blame(const CorePtr& e) {
  if (as<Core::Blame>(e)) return true;
  if (auto* lam = as<Core::Lam>(e)) return contains_blame(lam->body);
  if (auto* app = as<Core::App>(e))
    return contains_blame(app->fun) || contains_blame(app->arg);
  if (auto* tl = as<Core::TLam>(e)) return contains_blame(tl->body);
  if (auto* ta = as<Core::TApp>(e)) return contains_blame(ta->fun);
  if (auto* ext = as<Core::RExtend>(e))
    return contains_blame(ext->field) || contains_blame(ext->rest);
  if (auto* rl = as<Core::RLet>(e))
    return contains_blame(rl->record) || contains_blame(rl->body);
  if (auto* inj = as<Core::VInj>(e)) return contains_blame(inj->arg);
  if (auto* emb = as<Core::VEmbed>(e)) return contains_blame(emb->arg);
  if (auto* vc = as<Core::VCase>(e))
    return contains_blame(vc->scrut) || contains_blame(vc->onlabel) ||
           contains_blame(vc->other);
  if (auto* c = as<Core::Cast>(e)) return contains_blame(c->body);
  if (auto* c = as<Core::Conv>(e)) return contains_blame(c->body);
  return false;
}

EvalResult evaluate(NameStore& store, CorePtr e, const EvalOptions& opts) {
  EvalResult res;
  auto check = [&](const CorePtr& state) -> std::optional<std::string> {
    if (!opts.check_type) return std::nullopt;
    // Blame types at any expected type, but only in checking positions; the
    // single transient state carrying blame inside a context is exempt.
    if (contains_blame(state)) return std::nullopt;
    try {
      Ctx ctx;
      typecheck_core(store, ctx, state, opts.check_type);
      return std::nullopt;
    } catch (const TypeError& err) {
      return std::string(err.what());
    }
  };
  if (auto msg = check(e)) {
    res.outcome = Outcome::CheckFailed;
    res.term = e;
    res.message = "initial state: " + *msg;
    return res;
  }
  for (;;) {
    if (is_value(e)) {
      res.outcome = Outcome::Value;
      res.term = e;
      return res;
    }
    if (auto* b = as<Core::Blame>(e)) {
      res.outcome = Outcome::Blamed;
      res.term = e;
      res.blame = b->label;
      return res;
    }
    if (res.steps >= opts.fuel) {
      res.outcome = Outcome::Fuel;
      res.term = e;
      return res;
    }
    auto s = step(store, e, opts.primed_conlift);
    if (!s) {
      res.outcome = Outcome::Stuck;
      res.term = e;
      return res;
    }
    e = s->term;
    res.steps++;
    if (opts.on_step) opts.on_step(res.steps, *s, store);
    if (auto msg = check(e)) {
      res.outcome = Outcome::CheckFailed;
      res.term = e;
      res.message = "after step " + std::to_string(res.steps) + " (" + s->rule + "): " + *msg;
      return res;
    }
  }
}

// ---------------------------------------------------------------------------
// Static language.

static std::optional<std::string> head_label(const TermPtr& e) {
  if (auto* inj = as<Term::VInj>(e)) return inj->label;
  if (auto* emb = as<Term::VEmbed>(e)) return emb->label;
  return std::nullopt;
}

bool is_value_static(const TermPtr& e) {
  if (as<Term::Lit>(e) || as<Term::Lam>(e) || as<Term::TLam>(e) || as<Term::REmp>(e))
    return true;
  if (auto* ext = as<Term::RExtend>(e))
    return is_value_static(ext->field) && is_value_static(ext->rest);
  if (auto* inj = as<Term::VInj>(e)) return is_value_static(inj->arg);
  if (auto* emb = as<Term::VEmbed>(e)) {
    // An embedding survives only over a payload it shadows: same head label.
    if (!is_value_static(emb->arg)) return false;
    auto h = head_label(emb->arg);
    return h && *h == emb->label;
  }
  return false;
}

static std::optional<std::pair<TermPtr, TermPtr>> record_split_static(const TermPtr& v,
                                                                      const std::string& l) {
  auto* ext = as<Term::RExtend>(v);
  if (!ext) return std::nullopt;
  if (ext->label == l) return std::make_pair(ext->field, ext->rest);
  auto inner = record_split_static(ext->rest, l);
  if (!inner) return std::nullopt;
  return std::make_pair(inner->first, mrext(ext->label, ext->field, inner->second));
}

std::optional<std::pair<TermPtr, std::string>> step_static(const TermPtr& e) {
  using Out = std::pair<TermPtr, std::string>;
  if (is_value_static(e)) return std::nullopt;

  auto sub = [&](const TermPtr& child, auto rebuild) -> std::optional<Out> {
    auto r = step_static(child);
    if (!r) return std::nullopt;
    return Out{rebuild(r->first), r->second};
  };

  if (auto* app = as<Term::App>(e)) {
    if (!is_value_static(app->fun))
      return sub(app->fun, [&](TermPtr t) { return mapp(std::move(t), app->arg); });
    if (!is_value_static(app->arg))
      return sub(app->arg, [&](TermPtr t) { return mapp(app->fun, std::move(t)); });
    auto* f = as<Term::Lit>(app->fun);
    auto* a = as<Term::Lit>(app->arg);
    if (f && a) {
      if (auto r = const_apply(f->value, a->value)) return Out{mlit(*r), "Rs-Const"};
    }
    if (auto* lam = as<Term::Lam>(app->fun))
      return Out{subst_term(lam->body, lam->var, app->arg), "Rs-Beta"};
    return std::nullopt;
  }
  if (auto* ta = as<Term::TApp>(e)) {
    if (!is_value_static(ta->fun))
      return sub(ta->fun, [&](TermPtr t) { return mtapp(std::move(t), ta->arg); });
    if (auto* tl = as<Term::TLam>(ta->fun))
      return Out{subst_type_in_term(tl->body, tl->var, ta->arg), "Rs-TyBeta"};
    return std::nullopt;
  }
  if (auto* ext = as<Term::RExtend>(e)) {
    if (!is_value_static(ext->field))
      return sub(ext->field,
                 [&](TermPtr t) { return mrext(ext->label, std::move(t), ext->rest); });
    return sub(ext->rest,
               [&](TermPtr t) { return mrext(ext->label, ext->field, std::move(t)); });
  }
  if (auto* rl = as<Term::RLet>(e)) {
    if (!is_value_static(rl->record))
      return sub(rl->record, [&](TermPtr t) {
        return mrlet(rl->label, rl->xvar, rl->yvar, std::move(t), rl->body);
      });
    auto split = record_split_static(rl->record, rl->label);
    if (!split) return std::nullopt;
    TermPtr body = rl->xvar == rl->yvar
                       ? subst_term(rl->body, rl->yvar, split->second)
                       : subst_term(subst_term(rl->body, rl->xvar, split->first), rl->yvar,
                                    split->second);
    return Out{std::move(body), "Rs-Record"};
  }
  if (auto* inj = as<Term::VInj>(e))
    return sub(inj->arg, [&](TermPtr t) { return minj(inj->label, std::move(t)); });
  if (auto* emb = as<Term::VEmbed>(e)) {
    if (!is_value_static(emb->arg))
      return sub(emb->arg,
                 [&](TermPtr t) { return membed(emb->label, emb->ann, std::move(t)); });
    auto h = head_label(emb->arg);
    if (h && *h != emb->label) return Out{emb->arg, "Rs-Embed"};
    return std::nullopt;
  }
  if (auto* vc = as<Term::VCase>(e)) {
    if (!is_value_static(vc->scrut))
      return sub(vc->scrut, [&](TermPtr t) {
        return mcase(std::move(t), vc->label, vc->xvar, vc->onlabel, vc->yvar, vc->other);
      });
    if (auto* inj = as<Term::VInj>(vc->scrut)) {
      if (inj->label == vc->label)
        return Out{subst_term(vc->onlabel, vc->xvar, inj->arg), "Rs-CaseL"};
      return Out{subst_term(vc->other, vc->yvar, vc->scrut), "Rs-CaseR2"};
    }
    if (auto* emb = as<Term::VEmbed>(vc->scrut)) {
      if (emb->label == vc->label)
        return Out{subst_term(vc->other, vc->yvar, emb->arg), "Rs-CaseR1"};
      return Out{subst_term(vc->other, vc->yvar, vc->scrut), "Rs-CaseR2"};
    }
    return std::nullopt;
  }
  return std::nullopt;
}

StaticResult evaluate_static(TermPtr e, long long fuel,
                             const std::function<void(long long, const TermPtr&,
                                                      const std::string&)>& on_step) {
  StaticResult res;
  e = desugar(e);
  for (;;) {
    if (is_value_static(e)) {
      res.outcome = Outcome::Value;
      res.term = e;
      return res;
    }
    if (res.steps >= fuel) {
      res.outcome = Outcome::Fuel;
      res.term = e;
      return res;
    }
    auto s = step_static(e);
    if (!s) {
      res.outcome = Outcome::Stuck;
      res.term = e;
      return res;
    }
    e = s->first;
    res.steps++;
    if (on_step) on_step(res.steps, e, s->second);
  }
}

}  // namespace rowg
