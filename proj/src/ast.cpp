#include "ast.hpp"

#include <algorithm>

namespace rowg {

TypePtr tvar(std::string name) {
  return std::make_shared<Type>(Type::Var{std::move(name)});
}
TypePtr tname(int id) { return std::make_shared<Type>(Type::TyName{id}); }
TypePtr tdyn() {
  static const TypePtr d = std::make_shared<Type>(Type::Dyn{});
  return d;
}
TypePtr tbase(std::string name) {
  return std::make_shared<Type>(Type::Base{std::move(name)});
}
TypePtr tint() {
  static const TypePtr t = tbase("Int");
  return t;
}
TypePtr tbool() {
  static const TypePtr t = tbase("Bool");
  return t;
}
TypePtr tstr() {
  static const TypePtr t = tbase("Str");
  return t;
}
TypePtr tfun(TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(Type::Fun{std::move(dom), std::move(cod)});
}
TypePtr tforall(std::string var, Kind k, TypePtr body) {
  return std::make_shared<Type>(Type::Forall{std::move(var), k, std::move(body)});
}
TypePtr trecord(TypePtr row) {
  return std::make_shared<Type>(Type::Record{std::move(row)});
}
TypePtr tvariant(TypePtr row) {
  return std::make_shared<Type>(Type::Variant{std::move(row)});
}
TypePtr trempty() {
  static const TypePtr e = std::make_shared<Type>(Type::REmpty{});
  return e;
}
TypePtr trext(std::string label, TypePtr type, TypePtr rest) {
  return std::make_shared<Type>(
      Type::RExt{std::move(label), std::move(type), std::move(rest)});
}

bool is_dyn(const TypePtr& t) { return as<Type::Dyn>(t) != nullptr; }
bool is_rempty(const TypePtr& t) { return as<Type::REmpty>(t) != nullptr; }

ConstPtr cint(long long v) {
  return std::make_shared<Constant>(Constant::Int{v});
}
ConstPtr cbool(bool v) {
  return std::make_shared<Constant>(Constant::Bool{v});
}
ConstPtr cstr(std::string v) {
  return std::make_shared<Constant>(Constant::Str{std::move(v)});
}
ConstPtr cprim(std::string name) {
  return std::make_shared<Constant>(Constant::Prim{std::move(name)});
}

bool is_prim_name(const std::string& s) {
  return s == "add" || s == "leq" || s == "not" || s == "concat";
}

bool const_equal(const ConstPtr& a, const ConstPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = std::get_if<Constant::Int>(&a->node))
    return x->v == std::get<Constant::Int>(b->node).v;
  if (auto* x = std::get_if<Constant::Bool>(&a->node))
    return x->v == std::get<Constant::Bool>(b->node).v;
  if (auto* x = std::get_if<Constant::Str>(&a->node))
    return x->v == std::get<Constant::Str>(b->node).v;
  if (auto* x = std::get_if<Constant::Prim>(&a->node))
    return x->name == std::get<Constant::Prim>(b->node).name;
  auto* x = std::get_if<Constant::Prim1>(&a->node);
  auto& y = std::get<Constant::Prim1>(b->node);
  return x->name == y.name && const_equal(x->arg, y.arg);
}

TypePtr const_type(const ConstPtr& c) {
  if (std::get_if<Constant::Int>(&c->node)) return tint();
  if (std::get_if<Constant::Bool>(&c->node)) return tbool();
  if (std::get_if<Constant::Str>(&c->node)) return tstr();
  if (auto* p = std::get_if<Constant::Prim>(&c->node)) {
    if (p->name == "add") return tfun(tint(), tfun(tint(), tint()));
    if (p->name == "leq") return tfun(tint(), tfun(tint(), tbool()));
    if (p->name == "not") return tfun(tbool(), tbool());
    if (p->name == "concat") return tfun(tstr(), tfun(tstr(), tstr()));
    return nullptr;
  }
  if (auto* p = std::get_if<Constant::Prim1>(&c->node)) {
    if (p->name == "add") return tfun(tint(), tint());
    if (p->name == "leq") return tfun(tint(), tbool());
    if (p->name == "concat") return tfun(tstr(), tstr());
    return nullptr;
  }
  return nullptr;
}

std::optional<ConstPtr> const_apply(const ConstPtr& f, const ConstPtr& a) {
  if (auto* p = std::get_if<Constant::Prim>(&f->node)) {
    if (p->name == "add" || p->name == "leq") {
      if (std::get_if<Constant::Int>(&a->node))
        return std::make_shared<Constant>(Constant::Prim1{p->name, a});
      return std::nullopt;
    }
    if (p->name == "not") {
      if (auto* b = std::get_if<Constant::Bool>(&a->node)) return cbool(!b->v);
      return std::nullopt;
    }
    if (p->name == "concat") {
      if (std::get_if<Constant::Str>(&a->node))
        return std::make_shared<Constant>(Constant::Prim1{p->name, a});
      return std::nullopt;
    }
    return std::nullopt;
  }
  if (auto* p = std::get_if<Constant::Prim1>(&f->node)) {
    if (p->name == "add") {
      auto* x = std::get_if<Constant::Int>(&p->arg->node);
      auto* y = std::get_if<Constant::Int>(&a->node);
      if (x && y) return cint(x->v + y->v);
      return std::nullopt;
    }
    if (p->name == "leq") {
      auto* x = std::get_if<Constant::Int>(&p->arg->node);
      auto* y = std::get_if<Constant::Int>(&a->node);
      if (x && y) return cbool(x->v <= y->v);
      return std::nullopt;
    }
    if (p->name == "concat") {
      auto* x = std::get_if<Constant::Str>(&p->arg->node);
      auto* y = std::get_if<Constant::Str>(&a->node);
      if (x && y) return cstr(x->v + y->v);
      return std::nullopt;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::string show_blame(const BlameLabel& p) {
  std::string s = p.negated ? "~p" : "p";
  return s + std::to_string(p.id);
}

std::string show_conv(const ConvLabel& f) {
  std::string s = f.reveal ? "+a" : "-a";
  return s + std::to_string(f.name);
}

TermPtr mvar(std::string name) {
  return std::make_shared<Term>(Term::Var{std::move(name)});
}
TermPtr mlit(ConstPtr c) { return std::make_shared<Term>(Term::Lit{std::move(c)}); }
TermPtr mint(long long v) { return mlit(cint(v)); }
TermPtr mbool(bool v) { return mlit(cbool(v)); }
TermPtr mstr(std::string v) { return mlit(cstr(std::move(v))); }
TermPtr mlam(std::string var, TypePtr ann, TermPtr body) {
  return std::make_shared<Term>(
      Term::Lam{std::move(var), std::move(ann), std::move(body)});
}
TermPtr mapp(TermPtr fun, TermPtr arg) {
  return std::make_shared<Term>(Term::App{std::move(fun), std::move(arg)});
}
TermPtr mtlam(std::string var, Kind k, TermPtr body) {
  return std::make_shared<Term>(Term::TLam{std::move(var), k, std::move(body)});
}
TermPtr mtapp(TermPtr fun, TypePtr arg) {
  return std::make_shared<Term>(Term::TApp{std::move(fun), std::move(arg)});
}
TermPtr mremp() {
  static const TermPtr e = std::make_shared<Term>(Term::REmp{});
  return e;
}
TermPtr mrext(std::string label, TermPtr field, TermPtr rest) {
  return std::make_shared<Term>(
      Term::RExtend{std::move(label), std::move(field), std::move(rest)});
}
TermPtr mrlet(std::string label, std::string x, std::string y, TermPtr record,
              TermPtr body) {
  return std::make_shared<Term>(Term::RLet{std::move(label), std::move(x),
                                           std::move(y), std::move(record),
                                           std::move(body)});
}
TermPtr minj(std::string label, TermPtr arg) {
  return std::make_shared<Term>(Term::VInj{std::move(label), std::move(arg)});
}
TermPtr membed(std::string label, TypePtr ann, TermPtr arg) {
  return std::make_shared<Term>(
      Term::VEmbed{std::move(label), std::move(ann), std::move(arg)});
}
TermPtr mcase(TermPtr scrut, std::string label, std::string x, TermPtr onlabel,
              std::string y, TermPtr other) {
  return std::make_shared<Term>(Term::VCase{std::move(scrut), std::move(label),
                                            std::move(x), std::move(onlabel),
                                            std::move(y), std::move(other)});
}
TermPtr mascribe(TermPtr body, TypePtr ann) {
  return std::make_shared<Term>(Term::Ascribe{std::move(body), std::move(ann)});
}

CorePtr cvar(std::string name) {
  return std::make_shared<Core>(Core::Var{std::move(name)});
}
CorePtr clit(ConstPtr c) { return std::make_shared<Core>(Core::Lit{std::move(c)}); }
CorePtr ccint(long long v) { return clit(cint(v)); }
CorePtr ccbool(bool v) { return clit(cbool(v)); }
CorePtr ccstr(std::string v) { return clit(cstr(std::move(v))); }
CorePtr clam(std::string var, TypePtr ann, CorePtr body) {
  return std::make_shared<Core>(
      Core::Lam{std::move(var), std::move(ann), std::move(body)});
}
CorePtr capp(CorePtr fun, CorePtr arg) {
  return std::make_shared<Core>(Core::App{std::move(fun), std::move(arg)});
}
CorePtr ctlam(std::string var, Kind k, CorePtr body, TypePtr bodyty) {
  return std::make_shared<Core>(
      Core::TLam{std::move(var), k, std::move(body), std::move(bodyty)});
}
CorePtr ctapp(CorePtr fun, TypePtr arg) {
  return std::make_shared<Core>(Core::TApp{std::move(fun), std::move(arg)});
}
CorePtr cremp() {
  static const CorePtr e = std::make_shared<Core>(Core::REmp{});
  return e;
}
CorePtr crext(std::string label, CorePtr field, CorePtr rest) {
  return std::make_shared<Core>(
      Core::RExtend{std::move(label), std::move(field), std::move(rest)});
}
CorePtr crlet(std::string label, std::string x, std::string y, CorePtr record,
              CorePtr body) {
  return std::make_shared<Core>(Core::RLet{std::move(label), std::move(x),
                                           std::move(y), std::move(record),
                                           std::move(body)});
}
CorePtr cinj(std::string label, CorePtr arg) {
  return std::make_shared<Core>(Core::VInj{std::move(label), std::move(arg)});
}
CorePtr cembed(std::string label, TypePtr ann, CorePtr arg) {
  return std::make_shared<Core>(
      Core::VEmbed{std::move(label), std::move(ann), std::move(arg)});
}
CorePtr ccase(CorePtr scrut, std::string label, std::string x, CorePtr onlabel,
              std::string y, CorePtr other) {
  return std::make_shared<Core>(Core::VCase{std::move(scrut), std::move(label),
                                            std::move(x), std::move(onlabel),
                                            std::move(y), std::move(other)});
}
CorePtr ccast(CorePtr body, TypePtr src, BlameLabel p, TypePtr dst) {
  return std::make_shared<Core>(
      Core::Cast{std::move(body), std::move(src), p, std::move(dst)});
}
CorePtr cconv(CorePtr body, TypePtr src, ConvLabel f, TypePtr dst) {
  return std::make_shared<Core>(
      Core::Conv{std::move(body), std::move(src), f, std::move(dst)});
}
CorePtr cblame(BlameLabel p) { return std::make_shared<Core>(Core::Blame{p}); }

// ---------------------------------------------------------------------------
// Equality up to alpha-renaming

namespace {

// Stack of binder pairs currently in scope.
using Renaming = std::vector<std::pair<std::string, std::string>>;

bool var_eq(const Renaming& rn, const std::string& a, const std::string& b) {
  for (auto it = rn.rbegin(); it != rn.rend(); ++it) {
    if (it->first == a || it->second == b)
      return it->first == a && it->second == b;
  }
  return a == b;
}

bool type_eq(const TypePtr& a, const TypePtr& b, Renaming& rn) {
  if (a.get() == b.get()) {
    // Shared subtree: only sound if no binder in scope renames differently,
    // so check the cheap common case (no renaming) before structural descent.
    if (rn.empty()) return true;
  }
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = std::get_if<Type::Var>(&a->node))
    return var_eq(rn, x->name, std::get<Type::Var>(b->node).name);
  if (auto* x = std::get_if<Type::TyName>(&a->node))
    return x->id == std::get<Type::TyName>(b->node).id;
  if (std::get_if<Type::Dyn>(&a->node)) return true;
  if (auto* x = std::get_if<Type::Base>(&a->node))
    return x->name == std::get<Type::Base>(b->node).name;
  if (auto* x = std::get_if<Type::Fun>(&a->node)) {
    auto& y = std::get<Type::Fun>(b->node);
    return type_eq(x->dom, y.dom, rn) && type_eq(x->cod, y.cod, rn);
  }
  if (auto* x = std::get_if<Type::Forall>(&a->node)) {
    auto& y = std::get<Type::Forall>(b->node);
    if (x->kind != y.kind) return false;
    rn.emplace_back(x->var, y.var);
    bool r = type_eq(x->body, y.body, rn);
    rn.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Type::Record>(&a->node))
    return type_eq(x->row, std::get<Type::Record>(b->node).row, rn);
  if (auto* x = std::get_if<Type::Variant>(&a->node))
    return type_eq(x->row, std::get<Type::Variant>(b->node).row, rn);
  if (std::get_if<Type::REmpty>(&a->node)) return true;
  auto* x = std::get_if<Type::RExt>(&a->node);
  auto& y = std::get<Type::RExt>(b->node);
  return x->label == y.label && type_eq(x->type, y.type, rn) &&
         type_eq(x->rest, y.rest, rn);
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  Renaming rn;
  return type_eq(a, b, rn);
}

namespace {

// Term equality: separate renaming stacks for term and type binders.
struct EqEnv {
  Renaming tm, ty;
};

bool term_eq(const TermPtr& a, const TermPtr& b, EqEnv& env);

bool term_eq(const TermPtr& a, const TermPtr& b, EqEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = std::get_if<Term::Var>(&a->node))
    return var_eq(env.tm, x->name, std::get<Term::Var>(b->node).name);
  if (auto* x = std::get_if<Term::Lit>(&a->node))
    return const_equal(x->value, std::get<Term::Lit>(b->node).value);
  if (auto* x = std::get_if<Term::Lam>(&a->node)) {
    auto& y = std::get<Term::Lam>(b->node);
    if (!type_eq(x->ann, y.ann, env.ty)) return false;
    env.tm.emplace_back(x->var, y.var);
    bool r = term_eq(x->body, y.body, env);
    env.tm.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Term::App>(&a->node)) {
    auto& y = std::get<Term::App>(b->node);
    return term_eq(x->fun, y.fun, env) && term_eq(x->arg, y.arg, env);
  }
  if (auto* x = std::get_if<Term::TLam>(&a->node)) {
    auto& y = std::get<Term::TLam>(b->node);
    if (x->kind != y.kind) return false;
    env.ty.emplace_back(x->var, y.var);
    bool r = term_eq(x->body, y.body, env);
    env.ty.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Term::TApp>(&a->node)) {
    auto& y = std::get<Term::TApp>(b->node);
    return term_eq(x->fun, y.fun, env) && type_eq(x->arg, y.arg, env.ty);
  }
  if (std::get_if<Term::REmp>(&a->node)) return true;
  if (auto* x = std::get_if<Term::RExtend>(&a->node)) {
    auto& y = std::get<Term::RExtend>(b->node);
    return x->label == y.label && term_eq(x->field, y.field, env) &&
           term_eq(x->rest, y.rest, env);
  }
  if (auto* x = std::get_if<Term::RLet>(&a->node)) {
    auto& y = std::get<Term::RLet>(b->node);
    if (x->label != y.label || !term_eq(x->record, y.record, env)) return false;
    env.tm.emplace_back(x->xvar, y.xvar);
    env.tm.emplace_back(x->yvar, y.yvar);
    bool r = term_eq(x->body, y.body, env);
    env.tm.pop_back();
    env.tm.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Term::VInj>(&a->node)) {
    auto& y = std::get<Term::VInj>(b->node);
    return x->label == y.label && term_eq(x->arg, y.arg, env);
  }
  if (auto* x = std::get_if<Term::VEmbed>(&a->node)) {
    auto& y = std::get<Term::VEmbed>(b->node);
    return x->label == y.label && type_eq(x->ann, y.ann, env.ty) &&
           term_eq(x->arg, y.arg, env);
  }
  if (auto* x = std::get_if<Term::VCase>(&a->node)) {
    auto& y = std::get<Term::VCase>(b->node);
    if (x->label != y.label || !term_eq(x->scrut, y.scrut, env)) return false;
    env.tm.emplace_back(x->xvar, y.xvar);
    bool r1 = term_eq(x->onlabel, y.onlabel, env);
    env.tm.pop_back();
    if (!r1) return false;
    env.tm.emplace_back(x->yvar, y.yvar);
    bool r2 = term_eq(x->other, y.other, env);
    env.tm.pop_back();
    return r2;
  }
  auto* x = std::get_if<Term::Ascribe>(&a->node);
  auto& y = std::get<Term::Ascribe>(b->node);
  return term_eq(x->body, y.body, env) && type_eq(x->ann, y.ann, env.ty);
}

bool core_eq(const CorePtr& a, const CorePtr& b, EqEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = std::get_if<Core::Var>(&a->node))
    return var_eq(env.tm, x->name, std::get<Core::Var>(b->node).name);
  if (auto* x = std::get_if<Core::Lit>(&a->node))
    return const_equal(x->value, std::get<Core::Lit>(b->node).value);
  if (auto* x = std::get_if<Core::Lam>(&a->node)) {
    auto& y = std::get<Core::Lam>(b->node);
    if (!type_eq(x->ann, y.ann, env.ty)) return false;
    env.tm.emplace_back(x->var, y.var);
    bool r = core_eq(x->body, y.body, env);
    env.tm.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Core::App>(&a->node)) {
    auto& y = std::get<Core::App>(b->node);
    return core_eq(x->fun, y.fun, env) && core_eq(x->arg, y.arg, env);
  }
  if (auto* x = std::get_if<Core::TLam>(&a->node)) {
    auto& y = std::get<Core::TLam>(b->node);
    if (x->kind != y.kind) return false;
    env.ty.emplace_back(x->var, y.var);
    bool r = core_eq(x->body, y.body, env) && type_eq(x->bodyty, y.bodyty, env.ty);
    env.ty.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Core::TApp>(&a->node)) {
    auto& y = std::get<Core::TApp>(b->node);
    return core_eq(x->fun, y.fun, env) && type_eq(x->arg, y.arg, env.ty);
  }
  if (std::get_if<Core::REmp>(&a->node)) return true;
  if (auto* x = std::get_if<Core::RExtend>(&a->node)) {
    auto& y = std::get<Core::RExtend>(b->node);
    return x->label == y.label && core_eq(x->field, y.field, env) &&
           core_eq(x->rest, y.rest, env);
  }
  if (auto* x = std::get_if<Core::RLet>(&a->node)) {
    auto& y = std::get<Core::RLet>(b->node);
    if (x->label != y.label || !core_eq(x->record, y.record, env)) return false;
    env.tm.emplace_back(x->xvar, y.xvar);
    env.tm.emplace_back(x->yvar, y.yvar);
    bool r = core_eq(x->body, y.body, env);
    env.tm.pop_back();
    env.tm.pop_back();
    return r;
  }
  if (auto* x = std::get_if<Core::VInj>(&a->node)) {
    auto& y = std::get<Core::VInj>(b->node);
    return x->label == y.label && core_eq(x->arg, y.arg, env);
  }
  if (auto* x = std::get_if<Core::VEmbed>(&a->node)) {
    auto& y = std::get<Core::VEmbed>(b->node);
    return x->label == y.label && type_eq(x->ann, y.ann, env.ty) &&
           core_eq(x->arg, y.arg, env);
  }
  if (auto* x = std::get_if<Core::VCase>(&a->node)) {
    auto& y = std::get<Core::VCase>(b->node);
    if (x->label != y.label || !core_eq(x->scrut, y.scrut, env)) return false;
    env.tm.emplace_back(x->xvar, y.xvar);
    bool r1 = core_eq(x->onlabel, y.onlabel, env);
    env.tm.pop_back();
    if (!r1) return false;
    env.tm.emplace_back(x->yvar, y.yvar);
    bool r2 = core_eq(x->other, y.other, env);
    env.tm.pop_back();
    return r2;
  }
  if (auto* x = std::get_if<Core::Cast>(&a->node)) {
    auto& y = std::get<Core::Cast>(b->node);
    return x->label == y.label && core_eq(x->body, y.body, env) &&
           type_eq(x->src, y.src, env.ty) && type_eq(x->dst, y.dst, env.ty);
  }
  if (auto* x = std::get_if<Core::Conv>(&a->node)) {
    auto& y = std::get<Core::Conv>(b->node);
    return x->label == y.label && core_eq(x->body, y.body, env) &&
           type_eq(x->src, y.src, env.ty) && type_eq(x->dst, y.dst, env.ty);
  }
  auto* x = std::get_if<Core::Blame>(&a->node);
  return x->label == std::get<Core::Blame>(b->node).label;
}

}  // namespace

bool term_equal(const TermPtr& a, const TermPtr& b) {
  EqEnv env;
  return term_eq(a, b, env);
}

bool core_equal(const CorePtr& a, const CorePtr& b) {
  EqEnv env;
  return core_eq(a, b, env);
}

// ---------------------------------------------------------------------------
// Free type variables / dynamic-type occurrence

namespace {

void ftv_into(const TypePtr& t, std::set<std::string>& bound,
              std::set<std::string>& out) {
  if (auto* x = std::get_if<Type::Var>(&t->node)) {
    if (!bound.count(x->name)) out.insert(x->name);
    return;
  }
  if (auto* x = std::get_if<Type::Fun>(&t->node)) {
    ftv_into(x->dom, bound, out);
    ftv_into(x->cod, bound, out);
    return;
  }
  if (auto* x = std::get_if<Type::Forall>(&t->node)) {
    bool fresh = bound.insert(x->var).second;
    ftv_into(x->body, bound, out);
    if (fresh) bound.erase(x->var);
    return;
  }
  if (auto* x = std::get_if<Type::Record>(&t->node)) {
    ftv_into(x->row, bound, out);
    return;
  }
  if (auto* x = std::get_if<Type::Variant>(&t->node)) {
    ftv_into(x->row, bound, out);
    return;
  }
  if (auto* x = std::get_if<Type::RExt>(&t->node)) {
    ftv_into(x->type, bound, out);
    ftv_into(x->rest, bound, out);
    return;
  }
}

}  // namespace

std::set<std::string> ftv(const TypePtr& t) {
  std::set<std::string> bound, out;
  ftv_into(t, bound, out);
  return out;
}

bool contains_dyn(const TypePtr& t) {
  if (std::get_if<Type::Dyn>(&t->node)) return true;
  if (auto* x = std::get_if<Type::Fun>(&t->node))
    return contains_dyn(x->dom) || contains_dyn(x->cod);
  if (auto* x = std::get_if<Type::Forall>(&t->node))
    return contains_dyn(x->body);
  if (auto* x = std::get_if<Type::Record>(&t->node))
    return contains_dyn(x->row);
  if (auto* x = std::get_if<Type::Variant>(&t->node))
    return contains_dyn(x->row);
  if (auto* x = std::get_if<Type::RExt>(&t->node))
    return contains_dyn(x->type) || contains_dyn(x->rest);
  return false;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Substitution

TypePtr subst_type(const TypePtr& t, const std::string& x, const TypePtr& s) {
  if (auto* v = std::get_if<Type::Var>(&t->node))
    return v->name == x ? s : t;
  if (std::get_if<Type::TyName>(&t->node)) return t;
  if (std::get_if<Type::Dyn>(&t->node)) return t;
  if (std::get_if<Type::Base>(&t->node)) return t;
  if (auto* f = std::get_if<Type::Fun>(&t->node))
    return tfun(subst_type(f->dom, x, s), subst_type(f->cod, x, s));
  if (auto* q = std::get_if<Type::Forall>(&t->node)) {
    if (q->var == x) return t;
    auto sfv = ftv(s);
    if (sfv.count(q->var)) {
      auto avoid = sfv;
      auto bfv = ftv(q->body);
      avoid.insert(bfv.begin(), bfv.end());
      avoid.insert(x);
      std::string nv = fresh_name(q->var, avoid);
      TypePtr body = subst_type(q->body, q->var, tvar(nv));
      return tforall(nv, q->kind, subst_type(body, x, s));
    }
    return tforall(q->var, q->kind, subst_type(q->body, x, s));
  }
  if (auto* r = std::get_if<Type::Record>(&t->node))
    return trecord(subst_type(r->row, x, s));
  if (auto* v = std::get_if<Type::Variant>(&t->node))
    return tvariant(subst_type(v->row, x, s));
  if (std::get_if<Type::REmpty>(&t->node)) return t;
  auto* e = std::get_if<Type::RExt>(&t->node);
  return trext(e->label, subst_type(e->type, x, s), subst_type(e->rest, x, s));
}

CorePtr subst_type_in_core(const CorePtr& e, const std::string& x,
                           const TypePtr& s) {
  auto st = [&](const TypePtr& t) { return subst_type(t, x, s); };
  auto rec = [&](const CorePtr& c) { return subst_type_in_core(c, x, s); };
  if (std::get_if<Core::Var>(&e->node)) return e;
  if (std::get_if<Core::Lit>(&e->node)) return e;
  if (auto* n = std::get_if<Core::Lam>(&e->node))
    return clam(n->var, st(n->ann), rec(n->body));
  if (auto* n = std::get_if<Core::App>(&e->node))
    return capp(rec(n->fun), rec(n->arg));
  if (auto* n = std::get_if<Core::TLam>(&e->node)) {
    if (n->var == x) return e;
    auto sfv = ftv(s);
    if (sfv.count(n->var)) {
      auto avoid = sfv;
      avoid.insert(x);
      std::string nv = fresh_name(n->var, avoid);
      CorePtr body = subst_type_in_core(n->body, n->var, tvar(nv));
      TypePtr bt = subst_type(n->bodyty, n->var, tvar(nv));
      return ctlam(nv, n->kind, subst_type_in_core(body, x, s),
                   subst_type(bt, x, s));
    }
    return ctlam(n->var, n->kind, rec(n->body), st(n->bodyty));
  }
  if (auto* n = std::get_if<Core::TApp>(&e->node))
    return ctapp(rec(n->fun), st(n->arg));
  if (std::get_if<Core::REmp>(&e->node)) return e;
  if (auto* n = std::get_if<Core::RExtend>(&e->node))
    return crext(n->label, rec(n->field), rec(n->rest));
  if (auto* n = std::get_if<Core::RLet>(&e->node))
    return crlet(n->label, n->xvar, n->yvar, rec(n->record), rec(n->body));
  if (auto* n = std::get_if<Core::VInj>(&e->node))
    return cinj(n->label, rec(n->arg));
  if (auto* n = std::get_if<Core::VEmbed>(&e->node))
    return cembed(n->label, st(n->ann), rec(n->arg));
  if (auto* n = std::get_if<Core::VCase>(&e->node))
    return ccase(rec(n->scrut), n->label, n->xvar, rec(n->onlabel), n->yvar,
                 rec(n->other));
  if (auto* n = std::get_if<Core::Cast>(&e->node))
    return ccast(rec(n->body), st(n->src), n->label, st(n->dst));
  if (auto* n = std::get_if<Core::Conv>(&e->node))
    return cconv(rec(n->body), st(n->src), n->label, st(n->dst));
  return e;  // Blame
}

TermPtr subst_type_in_term(const TermPtr& e, const std::string& x,
                           const TypePtr& s) {
  auto st = [&](const TypePtr& t) { return subst_type(t, x, s); };
  auto rec = [&](const TermPtr& c) { return subst_type_in_term(c, x, s); };
  if (std::get_if<Term::Var>(&e->node)) return e;
  if (std::get_if<Term::Lit>(&e->node)) return e;
  if (auto* n = std::get_if<Term::Lam>(&e->node))
    return mlam(n->var, st(n->ann), rec(n->body));
  if (auto* n = std::get_if<Term::App>(&e->node))
    return mapp(rec(n->fun), rec(n->arg));
  if (auto* n = std::get_if<Term::TLam>(&e->node)) {
    if (n->var == x) return e;
    auto sfv = ftv(s);
    if (sfv.count(n->var)) {
      auto avoid = sfv;
      avoid.insert(x);
      std::string nv = fresh_name(n->var, avoid);
      TermPtr body = subst_type_in_term(n->body, n->var, tvar(nv));
      return mtlam(nv, n->kind, subst_type_in_term(body, x, s));
    }
    return mtlam(n->var, n->kind, rec(n->body));
  }
  if (auto* n = std::get_if<Term::TApp>(&e->node))
    return mtapp(rec(n->fun), st(n->arg));
  if (std::get_if<Term::REmp>(&e->node)) return e;
  if (auto* n = std::get_if<Term::RExtend>(&e->node))
    return mrext(n->label, rec(n->field), rec(n->rest));
  if (auto* n = std::get_if<Term::RLet>(&e->node))
    return mrlet(n->label, n->xvar, n->yvar, rec(n->record), rec(n->body));
  if (auto* n = std::get_if<Term::VInj>(&e->node))
    return minj(n->label, rec(n->arg));
  if (auto* n = std::get_if<Term::VEmbed>(&e->node))
    return membed(n->label, st(n->ann), rec(n->arg));
  if (auto* n = std::get_if<Term::VCase>(&e->node))
    return mcase(rec(n->scrut), n->label, n->xvar, rec(n->onlabel), n->yvar,
                 rec(n->other));
  auto* n = std::get_if<Term::Ascribe>(&e->node);
  return mascribe(rec(n->body), st(n->ann));
}

std::set<std::string> free_vars(const CorePtr& e) {
  std::set<std::string> out;
  if (auto* n = std::get_if<Core::Var>(&e->node)) {
    out.insert(n->name);
    return out;
  }
  auto merge_minus = [&out](std::set<std::string> s,
                            std::initializer_list<std::string> binders) {
    for (auto& b : binders) s.erase(b);
    out.insert(s.begin(), s.end());
  };
  if (auto* n = std::get_if<Core::Lam>(&e->node)) {
    merge_minus(free_vars(n->body), {n->var});
  } else if (auto* n = std::get_if<Core::App>(&e->node)) {
    auto a = free_vars(n->fun), b = free_vars(n->arg);
    out.insert(a.begin(), a.end());
    out.insert(b.begin(), b.end());
  } else if (auto* n = std::get_if<Core::TLam>(&e->node)) {
    auto a = free_vars(n->body);
    out.insert(a.begin(), a.end());
  } else if (auto* n = std::get_if<Core::TApp>(&e->node)) {
    auto a = free_vars(n->fun);
    out.insert(a.begin(), a.end());
  } else if (auto* n = std::get_if<Core::RExtend>(&e->node)) {
    auto a = free_vars(n->field), b = free_vars(n->rest);
    out.insert(a.begin(), a.end());
    out.insert(b.begin(), b.end());
  } else if (auto* n = std::get_if<Core::RLet>(&e->node)) {
    auto a = free_vars(n->record);
    out.insert(a.begin(), a.end());
    merge_minus(free_vars(n->body), {n->xvar, n->yvar});
  } else if (auto* n = std::get_if<Core::VInj>(&e->node)) {
    auto a = free_vars(n->arg);
    out.insert(a.begin(), a.end());
  } else if (auto* n = std::get_if<Core::VEmbed>(&e->node)) {
    auto a = free_vars(n->arg);
    out.insert(a.begin(), a.end());
  } else if (auto* n = std::get_if<Core::VCase>(&e->node)) {
    auto a = free_vars(n->scrut);
    out.insert(a.begin(), a.end());
    merge_minus(free_vars(n->onlabel), {n->xvar});
    merge_minus(free_vars(n->other), {n->yvar});
  } else if (auto* n = std::get_if<Core::Cast>(&e->node)) {
    auto a = free_vars(n->body);
    out.insert(a.begin(), a.end());
  } else if (auto* n = std::get_if<Core::Conv>(&e->node)) {
    auto a = free_vars(n->body);
    out.insert(a.begin(), a.end());
  }
  return out;
}

std::set<std::string> free_vars_term(const TermPtr& e) {
  std::set<std::string> out;
  if (auto* n = std::get_if<Term::Var>(&e->node)) {
    out.insert(n->name);
    return out;
  }
  auto merge_minus = [&out](std::set<std::string> s,
                            std::initializer_list<std::string> binders) {
    for (auto& b : binders) s.erase(b);
    out.insert(s.begin(), s.end());
  };
  auto merge = [&out](std::set<std::string> s) {
    out.insert(s.begin(), s.end());
  };
  if (auto* n = std::get_if<Term::Lam>(&e->node)) {
    merge_minus(free_vars_term(n->body), {n->var});
  } else if (auto* n = std::get_if<Term::App>(&e->node)) {
    merge(free_vars_term(n->fun));
    merge(free_vars_term(n->arg));
  } else if (auto* n = std::get_if<Term::TLam>(&e->node)) {
    merge(free_vars_term(n->body));
  } else if (auto* n = std::get_if<Term::TApp>(&e->node)) {
    merge(free_vars_term(n->fun));
  } else if (auto* n = std::get_if<Term::RExtend>(&e->node)) {
    merge(free_vars_term(n->field));
    merge(free_vars_term(n->rest));
  } else if (auto* n = std::get_if<Term::RLet>(&e->node)) {
    merge(free_vars_term(n->record));
    merge_minus(free_vars_term(n->body), {n->xvar, n->yvar});
  } else if (auto* n = std::get_if<Term::VInj>(&e->node)) {
    merge(free_vars_term(n->arg));
  } else if (auto* n = std::get_if<Term::VEmbed>(&e->node)) {
    merge(free_vars_term(n->arg));
  } else if (auto* n = std::get_if<Term::VCase>(&e->node)) {
    merge(free_vars_term(n->scrut));
    merge_minus(free_vars_term(n->onlabel), {n->xvar});
    merge_minus(free_vars_term(n->other), {n->yvar});
  } else if (auto* n = std::get_if<Term::Ascribe>(&e->node)) {
    merge(free_vars_term(n->body));
  }
  return out;
}

namespace {

// Substitute x:=v in `body` that sits under binder `var`, renaming the binder
// when it would capture. Returns the (possibly renamed) binder and new body.
std::pair<std::string, CorePtr> subst_under(const std::string& var,
                                            const CorePtr& body,
                                            const std::string& x,
                                            const CorePtr& v) {
  if (var == x) return {var, body};
  auto vfv = free_vars(v);
  if (vfv.count(var)) {
    auto avoid = vfv;
    auto bfv = free_vars(body);
    avoid.insert(bfv.begin(), bfv.end());
    avoid.insert(x);
    std::string nv = fresh_name(var, avoid);
    CorePtr renamed = subst_core(body, var, cvar(nv));
    return {nv, subst_core(renamed, x, v)};
  }
  return {var, subst_core(body, x, v)};
}

std::pair<std::string, TermPtr> subst_under_term(const std::string& var,
                                                 const TermPtr& body,
                                                 const std::string& x,
                                                 const TermPtr& v) {
  if (var == x) return {var, body};
  auto vfv = free_vars_term(v);
  if (vfv.count(var)) {
    auto avoid = vfv;
    auto bfv = free_vars_term(body);
    avoid.insert(bfv.begin(), bfv.end());
    avoid.insert(x);
    std::string nv = fresh_name(var, avoid);
    TermPtr renamed = subst_term(body, var, mvar(nv));
    return {nv, subst_term(renamed, x, v)};
  }
  return {var, subst_term(body, x, v)};
}

}  // namespace

CorePtr subst_core(const CorePtr& e, const std::string& x, const CorePtr& v) {
  auto rec = [&](const CorePtr& c) { return subst_core(c, x, v); };
  if (auto* n = std::get_if<Core::Var>(&e->node))
    return n->name == x ? v : e;
  if (std::get_if<Core::Lit>(&e->node)) return e;
  if (auto* n = std::get_if<Core::Lam>(&e->node)) {
    auto [var, body] = subst_under(n->var, n->body, x, v);
    return clam(var, n->ann, body);
  }
  if (auto* n = std::get_if<Core::App>(&e->node))
    return capp(rec(n->fun), rec(n->arg));
  if (auto* n = std::get_if<Core::TLam>(&e->node))
    return ctlam(n->var, n->kind, rec(n->body), n->bodyty);
  if (auto* n = std::get_if<Core::TApp>(&e->node))
    return ctapp(rec(n->fun), n->arg);
  if (std::get_if<Core::REmp>(&e->node)) return e;
  if (auto* n = std::get_if<Core::RExtend>(&e->node))
    return crext(n->label, rec(n->field), rec(n->rest));
  if (auto* n = std::get_if<Core::RLet>(&e->node)) {
    CorePtr record = rec(n->record);
    std::string nx = n->xvar, ny = n->yvar;
    CorePtr body = n->body;
    if (nx != x && ny != x) {
      auto vfv = free_vars(v);
      if (vfv.count(nx) || vfv.count(ny)) {
        auto avoid = vfv;
        auto bfv = free_vars(body);
        avoid.insert(bfv.begin(), bfv.end());
        avoid.insert(x);
        if (vfv.count(nx)) {
          std::string fresh = fresh_name(nx, avoid);
          body = subst_core(body, nx, cvar(fresh));
          nx = fresh;
          avoid.insert(fresh);
        }
        if (vfv.count(ny)) {
          std::string fresh = fresh_name(ny, avoid);
          body = subst_core(body, ny, cvar(fresh));
          ny = fresh;
        }
      }
      body = subst_core(body, x, v);
    }
    return crlet(n->label, nx, ny, record, body);
  }
  if (auto* n = std::get_if<Core::VInj>(&e->node))
    return cinj(n->label, rec(n->arg));
  if (auto* n = std::get_if<Core::VEmbed>(&e->node))
    return cembed(n->label, n->ann, rec(n->arg));
  if (auto* n = std::get_if<Core::VCase>(&e->node)) {
    CorePtr scrut = rec(n->scrut);
    auto [xv, onlabel] = subst_under(n->xvar, n->onlabel, x, v);
    auto [yv, other] = subst_under(n->yvar, n->other, x, v);
    return ccase(scrut, n->label, xv, onlabel, yv, other);
  }
  if (auto* n = std::get_if<Core::Cast>(&e->node))
    return ccast(rec(n->body), n->src, n->label, n->dst);
  if (auto* n = std::get_if<Core::Conv>(&e->node))
    return cconv(rec(n->body), n->src, n->label, n->dst);
  return e;  // Blame
}

TermPtr subst_term(const TermPtr& e, const std::string& x, const TermPtr& v) {
  auto rec = [&](const TermPtr& c) { return subst_term(c, x, v); };
  if (auto* n = std::get_if<Term::Var>(&e->node))
    return n->name == x ? v : e;
  if (std::get_if<Term::Lit>(&e->node)) return e;
  if (auto* n = std::get_if<Term::Lam>(&e->node)) {
    auto [var, body] = subst_under_term(n->var, n->body, x, v);
    return mlam(var, n->ann, body);
  }
  if (auto* n = std::get_if<Term::App>(&e->node))
    return mapp(rec(n->fun), rec(n->arg));
  if (auto* n = std::get_if<Term::TLam>(&e->node))
    return mtlam(n->var, n->kind, rec(n->body));
  if (auto* n = std::get_if<Term::TApp>(&e->node))
    return mtapp(rec(n->fun), n->arg);
  if (std::get_if<Term::REmp>(&e->node)) return e;
  if (auto* n = std::get_if<Term::RExtend>(&e->node))
    return mrext(n->label, rec(n->field), rec(n->rest));
  if (auto* n = std::get_if<Term::RLet>(&e->node)) {
    TermPtr record = rec(n->record);
    std::string nx = n->xvar, ny = n->yvar;
    TermPtr body = n->body;
    if (nx != x && ny != x) {
      auto vfv = free_vars_term(v);
      if (vfv.count(nx) || vfv.count(ny)) {
        auto avoid = vfv;
        auto bfv = free_vars_term(body);
        avoid.insert(bfv.begin(), bfv.end());
        avoid.insert(x);
        if (vfv.count(nx)) {
          std::string fresh = fresh_name(nx, avoid);
          body = subst_term(body, nx, mvar(fresh));
          nx = fresh;
          avoid.insert(fresh);
        }
        if (vfv.count(ny)) {
          std::string fresh = fresh_name(ny, avoid);
          body = subst_term(body, ny, mvar(fresh));
          ny = fresh;
        }
      }
      body = subst_term(body, x, v);
    }
    return mrlet(n->label, nx, ny, record, body);
  }
  if (auto* n = std::get_if<Term::VInj>(&e->node))
    return minj(n->label, rec(n->arg));
  if (auto* n = std::get_if<Term::VEmbed>(&e->node))
    return membed(n->label, n->ann, rec(n->arg));
  if (auto* n = std::get_if<Term::VCase>(&e->node)) {
    TermPtr scrut = rec(n->scrut);
    auto [xv, onlabel] = subst_under_term(n->xvar, n->onlabel, x, v);
    auto [yv, other] = subst_under_term(n->yvar, n->other, x, v);
    return mcase(scrut, n->label, xv, onlabel, yv, other);
  }
  auto* n = std::get_if<Term::Ascribe>(&e->node);
  return mascribe(rec(n->body), n->ann);
}

}  // namespace rowg
