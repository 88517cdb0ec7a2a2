#pragma once

// Shared AST for the row-typed languages: one tree for types and rows,
// a surface term tree, and the runtime term tree with casts/conversions.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace rowg {

enum class Kind { T, R };

inline const char* kind_name(Kind k) { return k == Kind::T ? "T" : "R"; }

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// Types and rows share one tree; the kind system tells them apart.
struct Type {
  struct Var {
    std::string name;
  };
  struct TyName {  // runtime-generated type-and-row name, printed a0, a1, ...
    int id;
  };
  struct Dyn {};
  struct Base {
    std::string name;  // Int, Bool, Str
  };
  struct Fun {
    TypePtr dom, cod;
  };
  struct Forall {
    std::string var;
    Kind kind;
    TypePtr body;
  };
  struct Record {
    TypePtr row;
  };
  struct Variant {
    TypePtr row;
  };
  struct REmpty {};
  struct RExt {
    std::string label;
    TypePtr type;
    TypePtr rest;
  };

  using Node = std::variant<Var, TyName, Dyn, Base, Fun, Forall, Record,
                            Variant, REmpty, RExt>;
  Node node;
  int line = 0, col = 0;  // source span; 0 when synthesized

  explicit Type(Node n) : node(std::move(n)) {}
};

TypePtr tvar(std::string name);
TypePtr tname(int id);
TypePtr tdyn();
TypePtr tbase(std::string name);
TypePtr tint();
TypePtr tbool();
TypePtr tstr();
TypePtr tfun(TypePtr dom, TypePtr cod);
TypePtr tforall(std::string var, Kind k, TypePtr body);
TypePtr trecord(TypePtr row);
TypePtr tvariant(TypePtr row);
TypePtr trempty();
TypePtr trext(std::string label, TypePtr type, TypePtr rest);

template <class T>
const T* as(const TypePtr& t) {
  return t ? std::get_if<T>(&t->node) : nullptr;
}

bool is_dyn(const TypePtr& t);
bool is_rempty(const TypePtr& t);

// Constants: literals plus curried primitives. A partially applied primitive
// is itself a constant (its type stays first-order).
struct Constant;
using ConstPtr = std::shared_ptr<const Constant>;
struct Constant {
  struct Int {
    long long v;
  };
  struct Bool {
    bool v;
  };
  struct Str {
    std::string v;
  };
  struct Prim {
    std::string name;  // add, leq, not, concat
  };
  struct Prim1 {
    std::string name;
    ConstPtr arg;  // first argument already supplied
  };
  using Node = std::variant<Int, Bool, Str, Prim, Prim1>;
  Node node;
  explicit Constant(Node n) : node(std::move(n)) {}
};

ConstPtr cint(long long v);
ConstPtr cbool(bool v);
ConstPtr cstr(std::string v);
ConstPtr cprim(std::string name);
bool is_prim_name(const std::string& s);
bool const_equal(const ConstPtr& a, const ConstPtr& b);
// First-order type of a constant; null for unknown primitive names.
TypePtr const_type(const ConstPtr& c);
// The delta function: apply constant to constant, if defined.
std::optional<ConstPtr> const_apply(const ConstPtr& f, const ConstPtr& a);

struct BlameLabel {
  int id = 0;
  bool negated = false;
  BlameLabel negate() const { return {id, !negated}; }
  bool operator==(const BlameLabel& o) const {
    return id == o.id && negated == o.negated;
  }
};
std::string show_blame(const BlameLabel& p);

struct ConvLabel {
  int name = 0;       // the type-and-row name id
  bool reveal = true;  // +a reveals, -a conceals
  ConvLabel negate() const { return {name, !reveal}; }
  bool operator==(const ConvLabel& o) const {
    return name == o.name && reveal == o.reveal;
  }
};
std::string show_conv(const ConvLabel& f);

// Surface terms (both the fully static and the gradual language).
struct Term;
using TermPtr = std::shared_ptr<const Term>;
struct Term {
  struct Var {
    std::string name;
  };
  struct Lit {
    ConstPtr value;
  };
  struct Lam {
    std::string var;
    TypePtr ann;
    TermPtr body;
  };
  struct App {
    TermPtr fun, arg;
  };
  struct TLam {
    std::string var;
    Kind kind;
    TermPtr body;
  };
  struct TApp {
    TermPtr fun;
    TypePtr arg;
  };
  struct REmp {};
  struct RExtend {
    std::string label;
    TermPtr field, rest;
  };
  struct RLet {  // let {l=x; y} = record in body
    std::string label, xvar, yvar;
    TermPtr record, body;
  };
  struct VInj {
    std::string label;
    TermPtr arg;
  };
  struct VEmbed {  // l ^ A M
    std::string label;
    TypePtr ann;
    TermPtr arg;
  };
  struct VCase {  // case scrut with <l x -> onlabel; y -> other>
    TermPtr scrut;
    std::string label, xvar;
    TermPtr onlabel;
    std::string yvar;
    TermPtr other;
  };
  struct Ascribe {
    TermPtr body;
    TypePtr ann;
  };
  using Node = std::variant<Var, Lit, Lam, App, TLam, TApp, REmp, RExtend,
                            RLet, VInj, VEmbed, VCase, Ascribe>;
  Node node;
  int line = 0, col = 0;
  explicit Term(Node n) : node(std::move(n)) {}
};

TermPtr mvar(std::string name);
TermPtr mlit(ConstPtr c);
TermPtr mint(long long v);
TermPtr mbool(bool v);
TermPtr mstr(std::string v);
TermPtr mlam(std::string var, TypePtr ann, TermPtr body);
TermPtr mapp(TermPtr fun, TermPtr arg);
TermPtr mtlam(std::string var, Kind k, TermPtr body);
TermPtr mtapp(TermPtr fun, TypePtr arg);
TermPtr mremp();
TermPtr mrext(std::string label, TermPtr field, TermPtr rest);
TermPtr mrlet(std::string label, std::string x, std::string y, TermPtr record,
              TermPtr body);
TermPtr minj(std::string label, TermPtr arg);
TermPtr membed(std::string label, TypePtr ann, TermPtr arg);
TermPtr mcase(TermPtr scrut, std::string label, std::string x, TermPtr onlabel,
              std::string y, TermPtr other);
TermPtr mascribe(TermPtr body, TypePtr ann);

template <class T>
const T* as(const TermPtr& t) {
  return t ? std::get_if<T>(&t->node) : nullptr;
}

// Runtime terms: surface constructs minus ascription, type abstraction
// annotated with its body type, plus casts, conversions and blame.
struct Core;
using CorePtr = std::shared_ptr<const Core>;
struct Core {
  struct Var {
    std::string name;
  };
  struct Lit {
    ConstPtr value;
  };
  struct Lam {
    std::string var;
    TypePtr ann;
    CorePtr body;
  };
  struct App {
    CorePtr fun, arg;
  };
  struct TLam {  // Lam X:K. e :: A
    std::string var;
    Kind kind;
    CorePtr body;
    TypePtr bodyty;
  };
  struct TApp {
    CorePtr fun;
    TypePtr arg;
  };
  struct REmp {};
  struct RExtend {
    std::string label;
    CorePtr field, rest;
  };
  struct RLet {
    std::string label, xvar, yvar;
    CorePtr record, body;
  };
  struct VInj {
    std::string label;
    CorePtr arg;
  };
  struct VEmbed {
    std::string label;
    TypePtr ann;
    CorePtr arg;
  };
  struct VCase {
    CorePtr scrut;
    std::string label, xvar;
    CorePtr onlabel;
    std::string yvar;
    CorePtr other;
  };
  struct Cast {  // e : src =p=> dst
    CorePtr body;
    TypePtr src;
    BlameLabel label;
    TypePtr dst;
  };
  struct Conv {  // e : src =F=> dst
    CorePtr body;
    TypePtr src;
    ConvLabel label;
    TypePtr dst;
  };
  struct Blame {
    BlameLabel label;
  };
  using Node = std::variant<Var, Lit, Lam, App, TLam, TApp, REmp, RExtend,
                            RLet, VInj, VEmbed, VCase, Cast, Conv, Blame>;
  Node node;
  explicit Core(Node n) : node(std::move(n)) {}
};

CorePtr cvar(std::string name);
CorePtr clit(ConstPtr c);
CorePtr ccint(long long v);
CorePtr ccbool(bool v);
CorePtr ccstr(std::string v);
CorePtr clam(std::string var, TypePtr ann, CorePtr body);
CorePtr capp(CorePtr fun, CorePtr arg);
CorePtr ctlam(std::string var, Kind k, CorePtr body, TypePtr bodyty);
CorePtr ctapp(CorePtr fun, TypePtr arg);
CorePtr cremp();
CorePtr crext(std::string label, CorePtr field, CorePtr rest);
CorePtr crlet(std::string label, std::string x, std::string y, CorePtr record,
              CorePtr body);
CorePtr cinj(std::string label, CorePtr arg);
CorePtr cembed(std::string label, TypePtr ann, CorePtr arg);
CorePtr ccase(CorePtr scrut, std::string label, std::string x, CorePtr onlabel,
              std::string y, CorePtr other);
CorePtr ccast(CorePtr body, TypePtr src, BlameLabel p, TypePtr dst);
CorePtr cconv(CorePtr body, TypePtr src, ConvLabel f, TypePtr dst);
CorePtr cblame(BlameLabel p);

template <class T>
const T* as(const CorePtr& t) {
  return t ? std::get_if<T>(&t->node) : nullptr;
}

// Structural equality up to alpha-renaming of bound type/term variables
// (spans ignored).
bool type_equal(const TypePtr& a, const TypePtr& b);
bool term_equal(const TermPtr& a, const TermPtr& b);
bool core_equal(const CorePtr& a, const CorePtr& b);

// Free type variables (not names).
std::set<std::string> ftv(const TypePtr& t);
bool contains_dyn(const TypePtr& t);

// Capture-avoiding substitutions.
TypePtr subst_type(const TypePtr& t, const std::string& x, const TypePtr& s);
CorePtr subst_type_in_core(const CorePtr& e, const std::string& x,
                           const TypePtr& s);
TermPtr subst_type_in_term(const TermPtr& e, const std::string& x,
                           const TypePtr& s);
CorePtr subst_core(const CorePtr& e, const std::string& x, const CorePtr& v);
TermPtr subst_term(const TermPtr& e, const std::string& x, const TermPtr& v);

// A name not in `avoid`, derived from `base`.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid);
std::set<std::string> free_vars(const CorePtr& e);
std::set<std::string> free_vars_term(const TermPtr& e);

}  // namespace rowg
