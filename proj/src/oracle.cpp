#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "core.hpp"
#include "eval.hpp"
#include "gradual.hpp"
#include "rows.hpp"
#include "statics.hpp"
#include "syntax.hpp"

namespace rowg {

// ---------------------------------------------------------------------------
// Enumeration.

std::vector<TypePtr> enum_rows(const EnumConfig& cfg) {
  std::vector<TypePtr> fields;
  for (const auto& b : cfg.bases) fields.push_back(tbase(b));
  if (cfg.allow_dyn) fields.push_back(tdyn());

  std::vector<TypePtr> level = {trempty()};
  if (cfg.allow_dyn) level.push_back(tdyn());
  std::vector<TypePtr> all = level;
  for (int d = 0; d < cfg.max_row_depth; ++d) {
    std::vector<TypePtr> next;
    for (const auto& l : cfg.labels)
      for (const auto& f : fields)
        for (const auto& r : level) next.push_back(trext(l, f, r));
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return all;
}

std::vector<TypePtr> enum_types(const EnumConfig& cfg) {
  std::vector<TypePtr> atoms;
  for (const auto& b : cfg.bases) atoms.push_back(tbase(b));
  if (cfg.allow_dyn) atoms.push_back(tdyn());

  std::vector<TypePtr> out = atoms;

  std::vector<TypePtr> arrow_parts = atoms;
  arrow_parts.push_back(tfun(tdyn(), tdyn()));
  for (const auto& d : arrow_parts)
    for (const auto& c : arrow_parts) out.push_back(tfun(d, c));

  EnumConfig shallow = cfg;
  shallow.max_row_depth = std::min(cfg.max_row_depth, 2);
  for (const auto& r : enum_rows(shallow)) {
    out.push_back(trecord(r));
    out.push_back(tvariant(r));
  }

  if (cfg.allow_forall) {
    const std::string l0 = cfg.labels.empty() ? std::string("l1") : cfg.labels.front();
    TypePtr X = tvar("X");
    out.push_back(tforall("X", Kind::T, X));
    out.push_back(tforall("X", Kind::T, tfun(X, X)));
    out.push_back(tforall("X", Kind::T, tfun(X, tdyn())));
    out.push_back(tforall("X", Kind::T, tfun(tdyn(), X)));
    out.push_back(tforall("X", Kind::T, tdyn()));
    out.push_back(tforall("X", Kind::T, tbase("Int")));
    out.push_back(tforall("X", Kind::T, tfun(tdyn(), tdyn())));
    out.push_back(tforall("X", Kind::T, tfun(tbase("Int"), X)));
    out.push_back(tforall("X", Kind::R, trecord(X)));
    out.push_back(tforall("X", Kind::R, trecord(trext(l0, tbase("Int"), X))));
    out.push_back(tforall("X", Kind::R, tvariant(trext(l0, tbase("Int"), X))));
    out.push_back(tforall("X", Kind::R, tfun(trecord(X), tbase("Int"))));
    out.push_back(tforall("X", Kind::R, trecord(trext(l0, tdyn(), X))));
    out.push_back(tforall("X", Kind::R, tdyn()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force relations.

namespace {

TypePtr alpha_normalize(const TypePtr& t, int& counter,
                        std::map<std::string, std::string>& env) {
  if (auto* v = as<Type::Var>(t)) {
    auto it = env.find(v->name);
    return it == env.end() ? t : tvar(it->second);
  }
  if (auto* f = as<Type::Fun>(t))
    return tfun(alpha_normalize(f->dom, counter, env), alpha_normalize(f->cod, counter, env));
  if (auto* q = as<Type::Forall>(t)) {
    std::string fresh = "%" + std::to_string(counter++);
    auto saved = env.find(q->var) == env.end() ? std::optional<std::string>()
                                               : std::optional<std::string>(env[q->var]);
    env[q->var] = fresh;
    TypePtr body = alpha_normalize(q->body, counter, env);
    if (saved) env[q->var] = *saved;
    else env.erase(q->var);
    return tforall(fresh, q->kind, body);
  }
  if (auto* r = as<Type::Record>(t)) return trecord(alpha_normalize(r->row, counter, env));
  if (auto* v = as<Type::Variant>(t)) return tvariant(alpha_normalize(v->row, counter, env));
  if (auto* x = as<Type::RExt>(t))
    return trext(x->label, alpha_normalize(x->type, counter, env),
                 alpha_normalize(x->rest, counter, env));
  return t;
}

std::string alpha_key(const TypePtr& t) {
  int counter = 0;
  std::map<std::string, std::string> env;
  return pretty(alpha_normalize(t, counter, env));
}

// All types one adjacent-distinct-label swap (or one such swap in a
// component) away from t.
std::vector<TypePtr> swap_neighbors(const TypePtr& t) {
  std::vector<TypePtr> out;
  if (auto* f = as<Type::Fun>(t)) {
    for (const auto& n : swap_neighbors(f->dom)) out.push_back(tfun(n, f->cod));
    for (const auto& n : swap_neighbors(f->cod)) out.push_back(tfun(f->dom, n));
    return out;
  }
  if (auto* q = as<Type::Forall>(t)) {
    for (const auto& n : swap_neighbors(q->body)) out.push_back(tforall(q->var, q->kind, n));
    return out;
  }
  if (auto* r = as<Type::Record>(t)) {
    for (const auto& n : swap_neighbors(r->row)) out.push_back(trecord(n));
    return out;
  }
  if (auto* v = as<Type::Variant>(t)) {
    for (const auto& n : swap_neighbors(v->row)) out.push_back(tvariant(n));
    return out;
  }
  if (auto* x = as<Type::RExt>(t)) {
    if (auto* y = as<Type::RExt>(x->rest); y && y->label != x->label)
      out.push_back(trext(y->label, y->type, trext(x->label, x->type, y->rest)));
    for (const auto& n : swap_neighbors(x->type)) out.push_back(trext(x->label, n, x->rest));
    for (const auto& n : swap_neighbors(x->rest)) out.push_back(trext(x->label, x->type, n));
    return out;
  }
  return out;
}

struct SwapClosure {
  std::vector<TypePtr> members;
  std::unordered_set<std::string> keys;
};

class Bruteforce {
 public:
  const SwapClosure& closure(const TypePtr& t) {
    std::string key = alpha_key(t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    SwapClosure cl;
    std::deque<TypePtr> todo{t};
    cl.keys.insert(key);
    cl.members.push_back(t);
    while (!todo.empty()) {
      TypePtr cur = todo.front();
      todo.pop_front();
      for (const auto& n : swap_neighbors(cur)) {
        std::string nk = alpha_key(n);
        if (cl.keys.insert(nk).second) {
          cl.members.push_back(n);
          todo.push_back(n);
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(cl)).first->second;
  }

  bool equiv(const TypePtr& a, const TypePtr& b) {
    return closure(a).keys.count(alpha_key(b)) > 0;
  }

  bool ce_composed(const TypePtr& a, const TypePtr& b) {
    const auto& ca = closure(a);
    const auto& cb = closure(b);
    for (const auto& x : ca.members)
      for (const auto& y : cb.members)
        if (consistent(x, y)) return true;
    return false;
  }

 private:
  std::unordered_map<std::string, SwapClosure> memo_;
};

std::vector<TypePtr> enum_all(const EnumConfig& cfg) {
  auto all = enum_rows(cfg);
  auto types = enum_types(cfg);
  all.insert(all.end(), types.begin(), types.end());
  return all;
}

}  // namespace

bool equiv_bruteforce(const TypePtr& a, const TypePtr& b) {
  Bruteforce bf;
  return bf.equiv(a, b);
}

bool consistent_equiv_via_composition(const TypePtr& a, const TypePtr& b) {
  Bruteforce bf;
  return bf.ce_composed(a, b);
}

// ---------------------------------------------------------------------------
// Program generation.

namespace {

class Gen {
 public:
  Gen(uint64_t seed, bool gradual) : rng_(seed), gradual_(gradual) {}

  std::optional<TermPtr> program(int depth) {
    budget_ = 300;
    auto m = term(depth);
    if (!m) return std::nullopt;
    try {
      Ctx ctx;
      if (gradual_) typecheck_gradual(ctx, *m);
      else typecheck_static(ctx, *m);
    } catch (const TypeError&) {
      return std::nullopt;
    }
    return m;
  }

 private:
  std::mt19937_64 rng_;
  bool gradual_;
  int budget_ = 0;
  std::vector<std::pair<std::string, TypePtr>> scope_;
  std::vector<std::pair<std::string, Kind>> tyvars_;
  int next_ = 0;

  size_t pick(size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng_);
  }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  std::string freshv() { return "v" + std::to_string(next_++); }
  std::string label() {
    static const char* ls[] = {"l1", "l2", "l3", "k1", "k2"};
    return ls[pick(5)];
  }

  TypePtr base() {
    switch (pick(3)) {
      case 0: return tint();
      case 1: return tbool();
      default: return tstr();
    }
  }

  TypePtr type(int d) {
    if (budget_-- <= 0 || d <= 0)
      return gradual_ && coin(0.25) ? tdyn() : base();
    switch (pick(gradual_ ? 7 : 5)) {
      case 0:
      case 1: return base();
      case 2: return tfun(type(d - 1), type(d - 1));
      case 3: return trecord(row(d - 1));
      case 4: return tvariant(nonempty_row(d - 1));
      default: return tdyn();
    }
  }

  TypePtr row(int d) {
    size_t n = pick(3);
    TypePtr r = gradual_ && coin(0.4) ? tdyn() : trempty();
    for (size_t i = 0; i < n; ++i) r = trext(label(), type(d), r);
    return r;
  }

  TypePtr nonempty_row(int d) {
    TypePtr r = row(d);
    if (as<Type::RExt>(r) || is_dyn(r)) return r;
    return trext(label(), type(d), r);
  }

  std::optional<TermPtr> var_of(const TypePtr& a) {
    std::vector<size_t> cands;
    for (size_t i = 0; i < scope_.size(); ++i)
      if (row_equiv(scope_[i].second, a)) cands.push_back(i);
    if (cands.empty()) return std::nullopt;
    return mvar(scope_[cands[pick(cands.size())]].first);
  }

  TermPtr small_const(const std::string& name) {
    if (name == "Int") return mint(static_cast<long long>(pick(10)));
    if (name == "Bool") return mbool(coin(0.5));
    return mstr(coin(0.5) ? "a" : "b");
  }

  // A total fallback inhabitant, structural in the type; may still fail on
  // bare type variables and variable-tailed rows.
  std::optional<TermPtr> leaf(const TypePtr& a) {
    if (auto* b = as<Type::Base>(a)) return small_const(b->name);
    if (is_dyn(a)) return mascribe(mint(0), tdyn());
    if (auto* f = as<Type::Fun>(a)) {
      std::string x = freshv();
      auto body = leaf(f->cod);
      if (!body) return std::nullopt;
      return mlam(x, f->dom, *body);
    }
    if (auto* q = as<Type::Forall>(a)) {
      auto body = leaf(q->body);
      if (!body) return std::nullopt;
      return mtlam(q->var, q->kind, *body);
    }
    if (as<Type::Var>(a)) return var_of(a);
    if (auto* r = as<Type::Record>(a)) return record_of(r->row, 0);
    if (auto* v = as<Type::Variant>(a)) return variant_of(v->row, 0);
    return std::nullopt;
  }

  std::optional<TermPtr> base_term(const std::string& name, int d) {
    if (d > 0 && coin(0.3)) {
      if (name == "Int") {
        auto a = inhabit(tint(), d - 1), b = inhabit(tint(), d - 1);
        if (a && b) return mapp(mapp(mlit(cprim("add")), *a), *b);
      } else if (name == "Bool") {
        if (coin(0.5)) {
          auto a = inhabit(tint(), d - 1), b = inhabit(tint(), d - 1);
          if (a && b) return mapp(mapp(mlit(cprim("leq")), *a), *b);
        }
        auto a = inhabit(tbool(), d - 1);
        if (a) return mapp(mlit(cprim("not")), *a);
      } else {
        auto a = inhabit(tstr(), d - 1), b = inhabit(tstr(), d - 1);
        if (a && b) return mapp(mapp(mlit(cprim("concat")), *a), *b);
      }
    }
    return small_const(name);
  }

  std::optional<TermPtr> prim_of(const TypePtr& a) {
    for (const char* p : {"add", "leq", "not", "concat"}) {
      auto ty = const_type(cprim(p));
      if (ty && type_equal(ty, a)) return mlit(cprim(p));
    }
    return std::nullopt;
  }

  std::optional<TermPtr> record_of(const TypePtr& rowty, int d) {
    auto view = row_view(rowty);
    if (!view) return std::nullopt;
    if (view->tail == RowView::Tail::Var || view->tail == RowView::Tail::Name)
      return std::nullopt;
    std::vector<TermPtr> fields;
    for (const auto& [l, ty] : view->fields) {
      (void)l;
      auto m = inhabit(ty, d > 0 ? d - 1 : 0);
      if (!m) return std::nullopt;
      fields.push_back(*m);
    }
    TermPtr rec = mremp();
    bool open = view->tail == RowView::Tail::Dyn;
    if (open && coin(0.3)) rec = mrext(label(), small_const("Int"), rec);
    for (size_t i = view->fields.size(); i-- > 0;)
      rec = mrext(view->fields[i].first, fields[i], rec);
    if (open) return mascribe(rec, trecord(rowty));
    return rec;
  }

  std::optional<TermPtr> variant_of(const TypePtr& rowty, int d) {
    auto view = row_view(rowty);
    if (!view) return std::nullopt;
    if (view->tail == RowView::Tail::Var || view->tail == RowView::Tail::Name)
      return std::nullopt;
    bool open = view->tail == RowView::Tail::Dyn;
    if (!open && view->fields.empty()) return std::nullopt;  // uninhabited

    TermPtr inner;
    size_t embeds;  // wrap fields [0, embeds) around the injection
    if (open && (view->fields.empty() || coin(0.4))) {
      inner = minj("k0", small_const("Int"));
      embeds = view->fields.size();
    } else {
      size_t i = view->fields.size() - 1;
      auto m = inhabit(view->fields[i].second, d > 0 ? d - 1 : 0);
      if (!m) return std::nullopt;
      inner = minj(view->fields[i].first, *m);
      embeds = i;
    }
    for (size_t j = embeds; j-- > 0;)
      inner = membed(view->fields[j].first, view->fields[j].second, inner);
    if (open) return mascribe(inner, tvariant(rowty));
    return inner;
  }

  std::optional<TermPtr> inhabit(const TypePtr& a, int d) {
    if (budget_-- <= 0) return leaf(a);
    if (coin(0.3)) {
      if (auto v = var_of(a)) return v;
    }
    if (is_dyn(a)) {
      TypePtr t = coin(0.5) ? base() : type(1);
      if (is_dyn(t)) t = base();
      auto m = inhabit(t, d > 0 ? d - 1 : 0);
      if (!m) return std::nullopt;
      return mascribe(*m, tdyn());
    }
    if (auto* b = as<Type::Base>(a)) return base_term(b->name, d);
    if (auto* f = as<Type::Fun>(a)) {
      if (d > 0 && coin(0.15)) {
        if (auto p = prim_of(a)) return p;
      }
      std::string x = freshv();
      scope_.emplace_back(x, f->dom);
      auto body = inhabit(f->cod, d > 0 ? d - 1 : 0);
      scope_.pop_back();
      if (!body) return std::nullopt;
      return mlam(x, f->dom, *body);
    }
    if (auto* q = as<Type::Forall>(a)) {
      tyvars_.emplace_back(q->var, q->kind);
      auto body = inhabit(q->body, d > 0 ? d - 1 : 0);
      tyvars_.pop_back();
      if (!body) return std::nullopt;
      return mtlam(q->var, q->kind, *body);
    }
    if (as<Type::Var>(a)) return var_of(a);
    if (auto* r = as<Type::Record>(a)) return record_of(r->row, d);
    if (auto* v = as<Type::Variant>(a)) return variant_of(v->row, d);
    return std::nullopt;
  }

  Ctx current_ctx() const {
    Ctx ctx;
    for (const auto& [x, k] : tyvars_) ctx.push_type(x, k);
    for (const auto& [x, t] : scope_) ctx.push_term(x, t);
    return ctx;
  }

  std::optional<TypePtr> type_of(const TermPtr& m) {
    try {
      Ctx ctx = current_ctx();
      return gradual_ ? typecheck_gradual(ctx, m) : typecheck_static(ctx, m);
    } catch (const TypeError&) {
      return std::nullopt;
    }
  }

  // Shuffle a row's fields, keeping fields with equal labels in their
  // original relative order (the reorderings equivalence allows).
  TypePtr permute_rows(const TypePtr& t) {
    if (auto* f = as<Type::Fun>(t)) return tfun(permute_rows(f->dom), permute_rows(f->cod));
    if (auto* q = as<Type::Forall>(t))
      return tforall(q->var, q->kind, permute_rows(q->body));
    if (auto* r = as<Type::Record>(t)) return trecord(permute_rows(r->row));
    if (auto* v = as<Type::Variant>(t)) return tvariant(permute_rows(v->row));
    if (as<Type::RExt>(t)) {
      auto view = row_view(t);
      if (!view) return t;
      std::vector<std::pair<std::string, TypePtr>> fields;
      for (const auto& [l, ty] : view->fields) fields.emplace_back(l, permute_rows(ty));
      std::map<std::string, std::deque<TypePtr>> queues;
      std::vector<std::string> order;
      for (const auto& [l, ty] : fields) {
        queues[l].push_back(ty);
        order.push_back(l);
      }
      std::shuffle(order.begin(), order.end(), rng_);
      RowView shuffled = *view;
      shuffled.fields.clear();
      for (const auto& l : order) {
        shuffled.fields.emplace_back(l, queues[l].front());
        queues[l].pop_front();
      }
      return row_build(shuffled);
    }
    return t;
  }

  TypePtr widen(const TypePtr& t) {
    if (gradual_ && coin(0.15)) return tdyn();
    if (auto* f = as<Type::Fun>(t)) return tfun(widen(f->dom), widen(f->cod));
    if (auto* r = as<Type::Record>(t)) return trecord(widen_row(r->row));
    if (auto* v = as<Type::Variant>(t)) return tvariant(widen_row(v->row));
    return t;
  }
  TypePtr widen_row(const TypePtr& r) {
    if (gradual_ && coin(0.15)) return tdyn();
    if (auto* x = as<Type::RExt>(r)) return trext(x->label, widen(x->type), widen_row(x->rest));
    return r;
  }

  std::optional<TermPtr> term(int d) {
    if (budget_ <= 0 || d <= 0) return inhabit(base(), 0);
    switch (pick(6)) {
      case 0: {
        TypePtr t = type(d);
        return inhabit(t, d);
      }
      case 1: {  // beta redex
        TypePtr argty = type(d - 1);
        auto arg = inhabit(argty, d - 1);
        if (!arg) return std::nullopt;
        std::string x = freshv();
        scope_.emplace_back(x, argty);
        auto body = term(d - 1);
        scope_.pop_back();
        if (!body) return std::nullopt;
        return mapp(mlam(x, argty, *body), *arg);
      }
      case 2: {  // record elimination
        TypePtr r = trext(label(), type(d - 1), row(d - 1));
        auto rec = record_of(r, d - 1);
        if (!rec) return std::nullopt;
        auto view = row_view(r);
        size_t i = pick(view->fields.size());
        const auto& [l, fty] = view->fields[i];
        auto split = split_row(r, l);
        if (!split) return std::nullopt;
        std::string x = freshv(), y = freshv();
        scope_.emplace_back(x, split->first);
        scope_.emplace_back(y, trecord(split->second));
        auto body = term(d - 1);
        scope_.pop_back();
        scope_.pop_back();
        if (!body) return std::nullopt;
        (void)fty;
        return mrlet(l, x, y, *rec, *body);
      }
      case 3: {  // variant elimination
        TypePtr r = trext(label(), type(d - 1), row(d - 1));
        auto scrut = variant_of(r, d - 1);
        if (!scrut) return std::nullopt;
        auto view = row_view(r);
        size_t i = pick(view->fields.size());
        const auto& l = view->fields[i].first;
        auto split = split_row(r, l);
        if (!split) return std::nullopt;
        TypePtr resty = type(d - 1);
        std::string x = freshv(), y = freshv();
        scope_.emplace_back(x, split->first);
        auto b1 = inhabit(resty, d - 1);
        scope_.pop_back();
        scope_.emplace_back(y, tvariant(split->second));
        auto b2 = inhabit(resty, d - 1);
        scope_.pop_back();
        if (!b1 || !b2) return std::nullopt;
        return mcase(*scrut, l, x, *b1, y, *b2);
      }
      case 4: {  // polymorphic identity at a type or a row
        if (coin(0.5)) {
          TypePtr a = type(d - 1);
          std::string x = freshv();
          TermPtr id = mtlam("X", Kind::T, mlam(x, tvar("X"), mvar(x)));
          auto arg = inhabit(a, d - 1);
          if (!arg) return std::nullopt;
          return mapp(mtapp(id, a), *arg);
        }
        TypePtr rest = row(d - 1);
        std::string l = label();
        TypePtr recty = trecord(trext(l, tint(), tvar("X")));
        std::string x = freshv();
        TermPtr id = mtlam("X", Kind::R, mlam(x, recty, mvar(x)));
        auto arg = record_of(trext(l, tint(), rest), d - 1);
        if (!arg) return std::nullopt;
        return mapp(mtapp(id, rest), *arg);
      }
      default: {  // ascription at an equivalent or widened type
        auto m = term(d - 1);
        if (!m) return std::nullopt;
        auto ty = type_of(*m);
        if (!ty) return std::nullopt;
        TypePtr target = permute_rows(gradual_ && coin(0.5) ? widen(*ty) : *ty);
        return mascribe(*m, target);
      }
    }
  }
};

}  // namespace

std::optional<TermPtr> gen_program(const GenConfig& cfg) {
  Gen g(cfg.seed, cfg.gradual);
  return g.program(cfg.max_depth);
}

// ---------------------------------------------------------------------------
// Property suites.

namespace {

std::string pair_detail(const TypePtr& a, const TypePtr& b, const std::string& what) {
  return what + " for " + pretty(a) + "  vs  " + pretty(b);
}

void walk_core(const CorePtr& e, const std::function<void(const CorePtr&)>& f) {
  f(e);
  if (auto* lam = as<Core::Lam>(e)) return walk_core(lam->body, f);
  if (auto* app = as<Core::App>(e)) {
    walk_core(app->fun, f);
    walk_core(app->arg, f);
    return;
  }
  if (auto* tl = as<Core::TLam>(e)) return walk_core(tl->body, f);
  if (auto* ta = as<Core::TApp>(e)) return walk_core(ta->fun, f);
  if (auto* ext = as<Core::RExtend>(e)) {
    walk_core(ext->field, f);
    walk_core(ext->rest, f);
    return;
  }
  if (auto* rl = as<Core::RLet>(e)) {
    walk_core(rl->record, f);
    walk_core(rl->body, f);
    return;
  }
  if (auto* inj = as<Core::VInj>(e)) return walk_core(inj->arg, f);
  if (auto* emb = as<Core::VEmbed>(e)) return walk_core(emb->arg, f);
  if (auto* vc = as<Core::VCase>(e)) {
    walk_core(vc->scrut, f);
    walk_core(vc->onlabel, f);
    walk_core(vc->other, f);
    return;
  }
  if (auto* c = as<Core::Cast>(e)) return walk_core(c->body, f);
  if (auto* c = as<Core::Conv>(e)) return walk_core(c->body, f);
}

}  // namespace

PropOutcome prop_equiv_matches_bruteforce(const EnumConfig& cfg) {
  PropOutcome out{"equiv-matches-bruteforce", true, 0, ""};
  auto items = enum_all(cfg);
  std::vector<TypePtr> canon;
  std::vector<std::string> keys;
  canon.reserve(items.size());
  keys.reserve(items.size());
  for (const auto& t : items) {
    canon.push_back(canonicalize(t));
    keys.push_back(alpha_key(t));
  }
  Bruteforce bf;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& cl = bf.closure(items[i]);
    for (size_t j = 0; j < items.size(); ++j) {
      bool mine = type_equal(canon[i], canon[j]);
      bool ref = cl.keys.count(keys[j]) > 0;
      ++out.checked;
      if (mine != ref) {
        out.ok = false;
        out.detail = pair_detail(items[i], items[j],
                                 mine ? "equiv accepts, closure rejects"
                                      : "equiv rejects, closure accepts");
        return out;
      }
    }
  }
  return out;
}

PropOutcome prop_consistent_equiv_matches_composition(const EnumConfig& cfg) {
  PropOutcome out{"consistent-equiv-matches-composition", true, 0, ""};
  auto items = enum_all(cfg);
  Bruteforce bf;
  for (size_t i = 0; i < items.size(); ++i) {
    for (size_t j = 0; j < items.size(); ++j) {
      bool mine = consistent_equiv(items[i], items[j]);
      bool ref = bf.ce_composed(items[i], items[j]);
      ++out.checked;
      if (mine != ref) {
        out.ok = false;
        out.detail = pair_detail(items[i], items[j],
                                 mine ? "algorithm accepts, composition rejects"
                                      : "algorithm rejects, composition accepts");
        return out;
      }
    }
  }
  return out;
}

PropOutcome prop_consistent_equiv_inversion(const EnumConfig& cfg) {
  PropOutcome out{"consistent-equiv-extension-inversion", true, 0, ""};
  auto rows = enum_rows(cfg);
  for (const auto& a : rows) {
    auto* x = as<Type::RExt>(a);
    if (!x) continue;
    for (const auto& b : rows) {
      if (!consistent_equiv(a, b)) continue;
      ++out.checked;
      auto split = split_row(b, x->label);
      if (!split || !consistent_equiv(x->type, split->first) ||
          !consistent_equiv(x->rest, split->second)) {
        out.ok = false;
        out.detail = pair_detail(a, b, "extension consistent-equiv without matching split");
        return out;
      }
    }
  }
  return out;
}

PropOutcome prop_merge_sound(const EnumConfig& cfg) {
  PropOutcome out{"merge-sound", true, 0, ""};
  auto items = enum_all(cfg);
  for (const auto& a : items) {
    for (const auto& b : items) {
      ++out.checked;
      auto c = merge(a, b);
      if (c) {
        if (!consistent_equiv(a, *c) || !consistent_equiv(b, *c)) {
          out.ok = false;
          out.detail = pair_detail(a, b, "merge result " + pretty(*c) + " not consistent");
          return out;
        }
        if (row_equiv(a, b) && !type_equal(*c, a)) {
          out.ok = false;
          out.detail = pair_detail(a, b, "merge of equivalent types is not the left type");
          return out;
        }
      }
      if (!contains_dyn(a) && !contains_dyn(b)) {
        bool eq = row_equiv(a, b);
        if (eq != c.has_value()) {
          out.ok = false;
          out.detail = pair_detail(a, b, eq ? "equivalent fully-static types do not merge"
                                            : "inequivalent fully-static types merge");
          return out;
        }
      }
    }
  }
  return out;
}

PropOutcome prop_parse_pretty_roundtrip(long long count, uint64_t seed) {
  PropOutcome out{"parse-pretty-roundtrip", true, 0, ""};
  for (long long i = 0; out.checked < count && i < count * 20; ++i) {
    GenConfig cfg;
    cfg.seed = seed + static_cast<uint64_t>(i);
    cfg.gradual = (i % 2 == 0);
    auto m = gen_program(cfg);
    if (!m) continue;
    ++out.checked;
    std::string text = pretty(*m);
    try {
      TermPtr back = parse_program(text);
      if (!term_equal(*m, back)) {
        out.ok = false;
        out.detail = "reparse differs for: " + text;
        return out;
      }
    } catch (const ParseError& err) {
      out.ok = false;
      out.detail = "reparse failed (" + std::string(err.what()) + ") for: " + text;
      return out;
    }
  }
  return out;
}

PropOutcome prop_unique_redex(long long count, uint64_t seed) {
  PropOutcome out{"at-most-one-reduction-rule", true, 0, ""};
  long long made = 0;
  for (long long i = 0; made < count && i < count * 20; ++i) {
    GenConfig cfg;
    cfg.seed = seed + static_cast<uint64_t>(i);
    cfg.gradual = true;
    auto m = gen_program(cfg);
    if (!m) continue;
    ++made;
    Ctx ctx;
    Translation tr = translate(ctx, *m);
    NameStore store;
    bool bad = false;
    std::string where;
    EvalOptions opts;
    opts.fuel = 300;
    opts.on_step = [&](long long, const Reduction& r, const NameStore&) {
      if (bad) return;
      walk_core(r.term, [&](const CorePtr& n) {
        if (bad) return;
        ++out.checked;
        if (reduce_all(n, false).size() > 1) {
          bad = true;
          where = pretty(n);
        }
      });
    };
    evaluate(store, tr.core, opts);
    if (bad) {
      out.ok = false;
      out.detail = "two rules apply to " + where + " in program " + pretty(*m);
      return out;
    }
  }
  return out;
}

PropOutcome prop_gradual_soundness(long long count, uint64_t seed) {
  PropOutcome out{"translate-preserve-progress", true, 0, ""};
  for (long long i = 0; out.checked < count && i < count * 20; ++i) {
    GenConfig cfg;
    cfg.seed = seed + static_cast<uint64_t>(i);
    cfg.gradual = true;
    auto m = gen_program(cfg);
    if (!m) continue;
    ++out.checked;
    auto fail = [&](const std::string& why) {
      out.ok = false;
      out.detail = why + " in program: " + pretty(*m);
    };
    try {
      Ctx gctx;
      TypePtr surface = typecheck_gradual(gctx, *m);
      Ctx tctx;
      Translation tr = translate(tctx, *m);
      if (!type_equal(surface, tr.type)) {
        fail("translation type differs from surface type");
        return out;
      }
      NameStore store0;
      Ctx cctx;
      typecheck_core(store0, cctx, tr.core, &tr.type);
      NameStore store;
      EvalOptions opts;
      opts.fuel = 1000;
      opts.check_type = &tr.type;
      EvalResult r = evaluate(store, tr.core, opts);
      if (r.outcome == Outcome::Stuck) {
        fail("evaluation got stuck at " + pretty(r.term));
        return out;
      }
      if (r.outcome == Outcome::CheckFailed) {
        fail("state re-typecheck failed: " + r.message);
        return out;
      }
    } catch (const TypeError& err) {
      fail(std::string("type error: ") + err.what());
      return out;
    }
  }
  return out;
}

PropOutcome prop_static_conservativity(long long count, uint64_t seed) {
  PropOutcome out{"static-gradual-agreement", true, 0, ""};
  for (long long i = 0; out.checked < count && i < count * 20; ++i) {
    GenConfig cfg;
    cfg.seed = seed + static_cast<uint64_t>(i);
    cfg.gradual = false;
    auto m = gen_program(cfg);
    if (!m) continue;
    ++out.checked;
    auto fail = [&](const std::string& why) {
      out.ok = false;
      out.detail = why + " in program: " + pretty(*m);
    };

    auto check_both = [&](const TermPtr& t) -> std::optional<std::string> {
      std::optional<TypePtr> st, gt;
      try {
        Ctx ctx;
        st = typecheck_static(ctx, t);
      } catch (const TypeError&) {}
      try {
        Ctx ctx;
        gt = typecheck_gradual(ctx, t);
      } catch (const TypeError&) {}
      if (st.has_value() != gt.has_value())
        return std::string(st ? "static accepts but gradual rejects"
                              : "gradual accepts but static rejects");
      if (st && gt && !row_equiv(*st, *gt))
        return "checkers disagree on the type: " + pretty(*st) + " vs " + pretty(*gt);
      return std::nullopt;
    };

    if (auto why = check_both(*m)) {
      fail(*why);
      return out;
    }
    // A crude mutant, to exercise agreement on rejection too.
    if (auto why = check_both(mapp(*m, mint(0)))) {
      fail(*why + " (after mutation)");
      return out;
    }

    try {
      Ctx ctx;
      TypePtr ty = typecheck_static(ctx, *m);
      if (as<Type::Base>(ty)) {
        StaticResult sr = evaluate_static(*m, 2000);
        Ctx tctx;
        Translation tr = translate(tctx, *m);
        NameStore store;
        EvalOptions opts;
        opts.fuel = 5000;
        EvalResult cr = evaluate(store, tr.core, opts);
        if (cr.outcome == Outcome::Blamed) {
          fail("fully static program blamed " + show_blame(*cr.blame));
          return out;
        }
        if (cr.outcome == Outcome::Stuck || sr.outcome == Outcome::Stuck) {
          fail("evaluation got stuck");
          return out;
        }
        if (sr.outcome == Outcome::Value && cr.outcome == Outcome::Value) {
          auto* sl = as<Term::Lit>(sr.term);
          auto* cl = as<Core::Lit>(cr.term);
          if (!sl || !cl || !const_equal(sl->value, cl->value)) {
            fail("static and translated runs disagree: " + pretty(sr.term) + " vs " +
                 pretty(cr.term));
            return out;
          }
        }
      }
    } catch (const TypeError& err) {
      fail(std::string("type error: ") + err.what());
      return out;
    }
  }
  return out;
}

std::vector<PropOutcome> run_all_props(int depth, long long count, uint64_t seed) {
  EnumConfig ecfg;
  ecfg.max_row_depth = depth;
  std::vector<PropOutcome> out;
  out.push_back(prop_equiv_matches_bruteforce(ecfg));
  out.push_back(prop_consistent_equiv_matches_composition(ecfg));
  out.push_back(prop_consistent_equiv_inversion(ecfg));
  out.push_back(prop_merge_sound(ecfg));
  out.push_back(prop_parse_pretty_roundtrip(std::max(count / 10, 1LL), seed));
  out.push_back(prop_unique_redex(std::max(count / 10, 1LL), seed + 1));
  out.push_back(prop_gradual_soundness(count, seed + 2));
  out.push_back(prop_static_conservativity(count, seed + 3));
  return out;
}

}  // namespace rowg
