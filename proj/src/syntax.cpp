#include "syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

namespace rowg {

namespace {

enum class Tok {
  LParen, RParen, LBrace, RBrace, LBrack, RBrack, Lt, Gt,
  Semi, Colon, Dot, Eq, Arrow, At, Caret, QMark,
  KwLam, KwTLam, KwLet, KwIn, KwCase, KwWith, KwForall, KwTrue, KwFalse,
  KwInt, KwBool, KwStr, KwBlame,
  Prim,   // add / leq / not / concat
  Ident, IntLit, StrLit, End,
};

struct Token {
  Tok kind;
  std::string text;
  long long num = 0;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line, col);
  }

  void advance(char c) {
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  void skip_trivia() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(c);
      } else if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') advance(src[pos]);
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_trivia();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src[pos];
    auto one = [&](Tok k) {
      advance(c);
      t.kind = k;
      return t;
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case '[': return one(Tok::LBrack);
      case ']': return one(Tok::RBrack);
      case '<': return one(Tok::Lt);
      case '>': return one(Tok::Gt);
      case ';': return one(Tok::Semi);
      case ':': return one(Tok::Colon);
      case '.': return one(Tok::Dot);
      case '=': return one(Tok::Eq);
      case '@': return one(Tok::At);
      case '^': return one(Tok::Caret);
      case '?': return one(Tok::QMark);
      case '-':
        advance(c);
        if (pos < src.size() && src[pos] == '>') {
          advance('>');
          t.kind = Tok::Arrow;
          return t;
        }
        fail("stray '-' (expected '->' or '--' comment)");
      case '"': {
        advance(c);
        std::string out;
        while (pos < src.size() && src[pos] != '"') {
          char d = src[pos];
          if (d == '\\') {
            advance(d);
            if (pos >= src.size()) fail("unterminated string escape");
            char e = src[pos];
            switch (e) {
              case 'n': out.push_back('\n'); break;
              case 't': out.push_back('\t'); break;
              case '\\': out.push_back('\\'); break;
              case '"': out.push_back('"'); break;
              default: fail("unknown string escape");
            }
            advance(e);
          } else if (d == '\n') {
            fail("unterminated string literal");
          } else {
            out.push_back(d);
            advance(d);
          }
        }
        if (pos >= src.size()) fail("unterminated string literal");
        advance('"');
        t.kind = Tok::StrLit;
        t.text = out;
        return t;
      }
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos]))) {
        v = v * 10 + (src[pos] - '0');
        advance(src[pos]);
      }
      t.kind = Tok::IntLit;
      t.num = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '_')) {
        name.push_back(src[pos]);
        advance(src[pos]);
      }
      t.text = name;
      if (name == "lam") t.kind = Tok::KwLam;
      else if (name == "Lam") t.kind = Tok::KwTLam;
      else if (name == "let") t.kind = Tok::KwLet;
      else if (name == "in") t.kind = Tok::KwIn;
      else if (name == "case") t.kind = Tok::KwCase;
      else if (name == "with") t.kind = Tok::KwWith;
      else if (name == "forall") t.kind = Tok::KwForall;
      else if (name == "true") t.kind = Tok::KwTrue;
      else if (name == "false") t.kind = Tok::KwFalse;
      else if (name == "Int") t.kind = Tok::KwInt;
      else if (name == "Bool") t.kind = Tok::KwBool;
      else if (name == "Str") t.kind = Tok::KwStr;
      else if (name == "blame") t.kind = Tok::KwBlame;
      else if (is_prim_name(name)) t.kind = Tok::Prim;
      else t.kind = Tok::Ident;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t idx = 0;
  std::set<std::string> bound;  // term variables currently in scope

  explicit Parser(const std::string& src) {
    Lexer lx(src);
    for (;;) {
      Token t = lx.next();
      toks.push_back(t);
      if (t.kind == Tok::End) break;
    }
  }

  const Token& peek(size_t ahead = 0) const {
    size_t i = idx + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  Token take() { return toks[idx < toks.size() - 1 ? idx++ : idx]; }

  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = peek();
    throw ParseError(msg, t.line, t.col);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    take();
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident)
      fail(std::string("expected ") + what);
    return take().text;
  }

  Kind kind() {
    if (peek().kind != Tok::Ident) fail("expected kind T or R");
    std::string k = take().text;
    if (k == "T") return Kind::T;
    if (k == "R") return Kind::R;
    fail("expected kind T or R");
  }

  // --- types ------------------------------------------------------------

  bool starts_type() const {
    switch (peek().kind) {
      case Tok::KwInt: case Tok::KwBool: case Tok::KwStr: case Tok::QMark:
      case Tok::Dot: case Tok::Ident: case Tok::LBrack: case Tok::Lt:
      case Tok::LParen: case Tok::KwForall:
        return true;
      default:
        return false;
    }
  }

  TypePtr type() {
    if (peek().kind == Tok::KwForall) {
      Token t = take();
      std::string x = ident("type variable after forall");
      expect(Tok::Colon, "':' in forall");
      Kind k = kind();
      expect(Tok::Dot, "'.' after forall binder");
      TypePtr body = type();
      auto r = std::const_pointer_cast<Type>(tforall(x, k, body));
      r->line = t.line;
      r->col = t.col;
      return r;
    }
    TypePtr left = type_atom();
    if (peek().kind == Tok::Arrow) {
      take();
      TypePtr right = type();
      return tfun(left, right);
    }
    return left;
  }

  // A row chain `l:A; ...` or a plain type.
  TypePtr row_or_type() {
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Colon) {
      Token t = take();
      std::string label = t.text;
      take();  // colon
      TypePtr field = type();
      expect(Tok::Semi, "';' after row field");
      TypePtr rest = row_or_type();
      auto r = std::const_pointer_cast<Type>(trext(label, field, rest));
      r->line = t.line;
      r->col = t.col;
      return r;
    }
    return type();
  }

  TypePtr type_atom() {
    const Token& t = peek();
    auto at = [&](TypePtr ty) {
      auto r = std::const_pointer_cast<Type>(std::move(ty));
      r->line = t.line;
      r->col = t.col;
      return TypePtr(r);
    };
    switch (t.kind) {
      case Tok::KwInt: take(); return at(tbase("Int"));
      case Tok::KwBool: take(); return at(tbase("Bool"));
      case Tok::KwStr: take(); return at(tbase("Str"));
      case Tok::QMark: take(); return at(std::make_shared<Type>(Type::Dyn{}));
      case Tok::Dot: take(); return at(std::make_shared<Type>(Type::REmpty{}));
      case Tok::Ident: {
        std::string name = take().text;
        return at(tvar(name));
      }
      case Tok::LBrack: {
        take();
        TypePtr row = row_or_type();
        expect(Tok::RBrack, "']' closing record type");
        return at(trecord(row));
      }
      case Tok::Lt: {
        take();
        TypePtr row = row_or_type();
        expect(Tok::Gt, "'>' closing variant type");
        return at(tvariant(row));
      }
      case Tok::LParen: {
        take();
        TypePtr inner = row_or_type();
        expect(Tok::RParen, "')' closing type");
        return inner;
      }
      default:
        fail("expected a type");
    }
  }

  // --- terms ------------------------------------------------------------

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::LParen: case Tok::LBrace: case Tok::Ident: case Tok::IntLit:
      case Tok::StrLit: case Tok::KwTrue: case Tok::KwFalse: case Tok::Prim:
        return true;
      default:
        return false;
    }
  }

  TermPtr with_span(TermPtr m, const Token& t) {
    auto r = std::const_pointer_cast<Term>(std::move(m));
    r->line = t.line;
    r->col = t.col;
    return r;
  }

  TermPtr term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwLam: {
        take();
        std::string x = ident("parameter name");
        expect(Tok::Colon, "':' in lambda");
        TypePtr a = type();
        expect(Tok::Dot, "'.' after lambda binder");
        bool fresh = bound.insert(x).second;
        TermPtr body = term();
        if (fresh) bound.erase(x);
        return with_span(mlam(x, a, body), t);
      }
      case Tok::KwTLam: {
        take();
        std::string x = ident("type variable");
        expect(Tok::Colon, "':' in type lambda");
        Kind k = kind();
        expect(Tok::Dot, "'.' after type-lambda binder");
        TermPtr body = term();
        return with_span(mtlam(x, k, body), t);
      }
      case Tok::KwLet: {
        take();
        expect(Tok::LBrace, "'{' after let");
        std::string label = ident("field label");
        expect(Tok::Eq, "'=' in let pattern");
        std::string x = ident("field variable");
        expect(Tok::Semi, "';' in let pattern");
        std::string y = ident("rest variable");
        expect(Tok::RBrace, "'}' closing let pattern");
        expect(Tok::Eq, "'=' after let pattern");
        TermPtr record = term();
        expect(Tok::KwIn, "'in'");
        bool fx = bound.insert(x).second;
        bool fy = bound.insert(y).second;
        TermPtr body = term();
        if (fy) bound.erase(y);
        if (fx) bound.erase(x);
        return with_span(mrlet(label, x, y, record, body), t);
      }
      case Tok::KwCase: {
        take();
        TermPtr scrut = term();
        expect(Tok::KwWith, "'with'");
        expect(Tok::Lt, "'<' opening case branches");
        std::string label = ident("case label");
        std::string x = ident("branch variable");
        expect(Tok::Arrow, "'->' in case branch");
        bool fx = bound.insert(x).second;
        TermPtr onlabel = term();
        if (fx) bound.erase(x);
        expect(Tok::Semi, "';' between case branches");
        std::string y = ident("default branch variable");
        expect(Tok::Arrow, "'->' in case branch");
        bool fy = bound.insert(y).second;
        TermPtr other = term();
        if (fy) bound.erase(y);
        expect(Tok::Gt, "'>' closing case branches");
        return with_span(mcase(scrut, label, x, onlabel, y, other), t);
      }
      default: {
        TermPtr m = app_term();
        while (peek().kind == Tok::Colon) {
          Token c = take();
          TypePtr a = type();
          m = with_span(mascribe(m, a), c);
        }
        return m;
      }
    }
  }

  TermPtr app_term() {
    const Token& t = peek();
    TermPtr head;
    if (t.kind == Tok::Ident && peek(1).kind == Tok::Caret) {
      // l ^ A M : variant embedding
      std::string label = take().text;
      take();  // caret
      TypePtr a = type();
      TermPtr arg = atom();
      head = with_span(membed(label, a, arg), t);
    } else if (t.kind == Tok::Ident && !bound.count(t.text) &&
               starts_atom_at(1)) {
      // unbound identifier applied to one atom: an injection
      std::string label = take().text;
      TermPtr arg = atom();
      head = with_span(minj(label, arg), t);
    } else {
      head = atom();
    }
    for (;;) {
      if (peek().kind == Tok::At) {
        Token a = take();
        TypePtr ty = type_atom();
        head = with_span(mtapp(head, ty), a);
      } else if (starts_atom()) {
        TermPtr arg = atom();
        head = mapp(head, arg);
      } else {
        break;
      }
    }
    return head;
  }

  bool starts_atom_at(size_t ahead) const {
    switch (peek(ahead).kind) {
      case Tok::LParen: case Tok::LBrace: case Tok::Ident: case Tok::IntLit:
      case Tok::StrLit: case Tok::KwTrue: case Tok::KwFalse: case Tok::Prim:
        return true;
      default:
        return false;
    }
  }

  TermPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::IntLit: {
        Token n = take();
        return with_span(mint(n.num), n);
      }
      case Tok::StrLit: {
        Token s = take();
        return with_span(mstr(s.text), s);
      }
      case Tok::KwTrue: take(); return with_span(mbool(true), t);
      case Tok::KwFalse: take(); return with_span(mbool(false), t);
      case Tok::Prim: {
        Token p = take();
        return with_span(mlit(cprim(p.text)), p);
      }
      case Tok::Ident: {
        Token v = take();
        return with_span(mvar(v.text), v);
      }
      case Tok::LParen: {
        take();
        TermPtr inner = term();
        expect(Tok::RParen, "')' closing term");
        return inner;
      }
      case Tok::LBrace: {
        take();
        if (peek().kind == Tok::RBrace) {
          take();
          return with_span(mremp(), t);
        }
        return with_span(record_fields(), t);
      }
      default:
        fail("expected a term");
    }
  }

  // Inside '{': one or more `l = M` fields, optionally a trailing tail term.
  TermPtr record_fields() {
    std::string label = ident("field label");
    expect(Tok::Eq, "'=' in record field");
    TermPtr field = term();
    TermPtr rest;
    if (peek().kind == Tok::Semi) {
      take();
      if (peek().kind == Tok::Ident && peek(1).kind == Tok::Eq) {
        rest = record_fields();
      } else {
        rest = term();
        expect(Tok::RBrace, "'}' closing record");
      }
    } else {
      expect(Tok::RBrace, "'}' closing record");
      rest = mremp();
    }
    return mrext(label, field, rest);
  }
};

}  // namespace

TypePtr parse_type(const std::string& src) {
  Parser p(src);
  TypePtr t = p.row_or_type();
  if (p.peek().kind != Tok::End) p.fail("trailing input after type");
  return t;
}

TermPtr parse_term(const std::string& src) {
  Parser p(src);
  TermPtr t = p.term();
  if (p.peek().kind != Tok::End) p.fail("trailing input after term");
  return t;
}

TermPtr parse_program(const std::string& src) { return parse_term(src); }

// ---------------------------------------------------------------------------
// Pretty-printing

namespace {

void print_type(std::ostringstream& out, const TypePtr& t, bool atom_pos);

void print_row(std::ostringstream& out, const TypePtr& t) {
  TypePtr cur = t;
  while (auto* e = as<Type::RExt>(cur)) {
    out << e->label << ":";
    print_type(out, e->type, false);
    out << "; ";
    cur = e->rest;
  }
  print_type(out, cur, false);
}

void print_type(std::ostringstream& out, const TypePtr& t, bool atom_pos) {
  if (auto* v = as<Type::Var>(t)) {
    out << v->name;
  } else if (auto* n = as<Type::TyName>(t)) {
    out << "a" << n->id;
  } else if (as<Type::Dyn>(t)) {
    out << "?";
  } else if (auto* b = as<Type::Base>(t)) {
    out << b->name;
  } else if (auto* f = as<Type::Fun>(t)) {
    if (atom_pos) out << "(";
    print_type(out, f->dom, true);
    out << " -> ";
    print_type(out, f->cod, false);
    if (atom_pos) out << ")";
  } else if (auto* q = as<Type::Forall>(t)) {
    if (atom_pos) out << "(";
    out << "forall " << q->var << ":" << kind_name(q->kind) << ". ";
    print_type(out, q->body, false);
    if (atom_pos) out << ")";
  } else if (auto* r = as<Type::Record>(t)) {
    out << "[";
    print_row(out, r->row);
    out << "]";
  } else if (auto* v = as<Type::Variant>(t)) {
    out << "<";
    print_row(out, v->row);
    out << ">";
  } else if (as<Type::REmpty>(t)) {
    out << ".";
  } else {
    // bare row extension outside brackets: parenthesize so it reparses
    out << "(";
    print_row(out, t);
    out << ")";
  }
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void print_const(std::ostringstream& out, const ConstPtr& c) {
  if (auto* i = std::get_if<Constant::Int>(&c->node)) {
    out << i->v;
  } else if (auto* b = std::get_if<Constant::Bool>(&c->node)) {
    out << (b->v ? "true" : "false");
  } else if (auto* s = std::get_if<Constant::Str>(&c->node)) {
    out << '"' << escape(s->v) << '"';
  } else if (auto* p = std::get_if<Constant::Prim>(&c->node)) {
    out << p->name;
  } else if (auto* p1 = std::get_if<Constant::Prim1>(&c->node)) {
    out << p1->name << "#";
    print_const(out, p1->arg);
  }
}

// Term printing levels: 0 = any term, 1 = application operand chain,
// 2 = atom only.
void print_term(std::ostringstream& out, const TermPtr& t, int level);
void print_core(std::ostringstream& out, const CorePtr& t, int level);

void print_term(std::ostringstream& out, const TermPtr& t, int level) {
  auto wrap = [&](int mylevel, auto body) {
    bool parens = mylevel < level;
    if (parens) out << "(";
    body();
    if (parens) out << ")";
  };
  if (auto* v = as<Term::Var>(t)) {
    out << v->name;
  } else if (auto* l = as<Term::Lit>(t)) {
    print_const(out, l->value);
  } else if (auto* n = as<Term::Lam>(t)) {
    wrap(0, [&] {
      out << "lam " << n->var << ":";
      print_type(out, n->ann, false);
      out << ". ";
      print_term(out, n->body, 0);
    });
  } else if (auto* n = as<Term::App>(t)) {
    wrap(1, [&] {
      print_term(out, n->fun, 1);
      out << " ";
      print_term(out, n->arg, 2);
    });
  } else if (auto* n = as<Term::TLam>(t)) {
    wrap(0, [&] {
      out << "Lam " << n->var << ":" << kind_name(n->kind) << ". ";
      print_term(out, n->body, 0);
    });
  } else if (auto* n = as<Term::TApp>(t)) {
    wrap(1, [&] {
      print_term(out, n->fun, 1);
      out << " @";
      print_type(out, n->arg, true);
    });
  } else if (as<Term::REmp>(t)) {
    out << "{}";
  } else if (as<Term::RExtend>(t)) {
    out << "{";
    TermPtr cur = t;
    bool first = true;
    while (auto* e = as<Term::RExtend>(cur)) {
      if (!first) out << "; ";
      first = false;
      out << e->label << "=";
      print_term(out, e->field, 0);
      cur = e->rest;
    }
    if (!as<Term::REmp>(cur)) {
      out << "; ";
      print_term(out, cur, 0);
    }
    out << "}";
  } else if (auto* n = as<Term::RLet>(t)) {
    wrap(0, [&] {
      out << "let {" << n->label << "=" << n->xvar << "; " << n->yvar
          << "} = ";
      print_term(out, n->record, 0);
      out << " in ";
      print_term(out, n->body, 0);
    });
  } else if (auto* n = as<Term::VInj>(t)) {
    wrap(1, [&] {
      out << n->label << " ";
      print_term(out, n->arg, 2);
    });
  } else if (auto* n = as<Term::VEmbed>(t)) {
    wrap(1, [&] {
      out << n->label << " ^ ";
      print_type(out, n->ann, true);
      out << " ";
      print_term(out, n->arg, 2);
    });
  } else if (auto* n = as<Term::VCase>(t)) {
    wrap(0, [&] {
      out << "case ";
      print_term(out, n->scrut, 0);
      out << " with <" << n->label << " " << n->xvar << " -> ";
      print_term(out, n->onlabel, 0);
      out << "; " << n->yvar << " -> ";
      print_term(out, n->other, 0);
      out << ">";
    });
  } else if (auto* n = as<Term::Ascribe>(t)) {
    wrap(0, [&] {
      print_term(out, n->body, 1);
      out << " : ";
      print_type(out, n->ann, false);
    });
  }
}

void print_core(std::ostringstream& out, const CorePtr& t, int level) {
  auto wrap = [&](int mylevel, auto body) {
    bool parens = mylevel < level;
    if (parens) out << "(";
    body();
    if (parens) out << ")";
  };
  if (auto* v = as<Core::Var>(t)) {
    out << v->name;
  } else if (auto* l = as<Core::Lit>(t)) {
    print_const(out, l->value);
  } else if (auto* n = as<Core::Lam>(t)) {
    wrap(0, [&] {
      out << "lam " << n->var << ":";
      print_type(out, n->ann, false);
      out << ". ";
      print_core(out, n->body, 0);
    });
  } else if (auto* n = as<Core::App>(t)) {
    wrap(1, [&] {
      print_core(out, n->fun, 1);
      out << " ";
      print_core(out, n->arg, 2);
    });
  } else if (auto* n = as<Core::TLam>(t)) {
    wrap(0, [&] {
      out << "Lam " << n->var << ":" << kind_name(n->kind) << ". ";
      print_core(out, n->body, 1);
      out << " :: ";
      print_type(out, n->bodyty, false);
    });
  } else if (auto* n = as<Core::TApp>(t)) {
    wrap(1, [&] {
      print_core(out, n->fun, 1);
      out << " @";
      print_type(out, n->arg, true);
    });
  } else if (as<Core::REmp>(t)) {
    out << "{}";
  } else if (as<Core::RExtend>(t)) {
    out << "{";
    CorePtr cur = t;
    bool first = true;
    while (auto* e = as<Core::RExtend>(cur)) {
      if (!first) out << "; ";
      first = false;
      out << e->label << "=";
      print_core(out, e->field, 0);
      cur = e->rest;
    }
    if (!as<Core::REmp>(cur)) {
      out << "; ";
      print_core(out, cur, 0);
    }
    out << "}";
  } else if (auto* n = as<Core::RLet>(t)) {
    wrap(0, [&] {
      out << "let {" << n->label << "=" << n->xvar << "; " << n->yvar
          << "} = ";
      print_core(out, n->record, 0);
      out << " in ";
      print_core(out, n->body, 0);
    });
  } else if (auto* n = as<Core::VInj>(t)) {
    wrap(1, [&] {
      out << n->label << " ";
      print_core(out, n->arg, 2);
    });
  } else if (auto* n = as<Core::VEmbed>(t)) {
    wrap(1, [&] {
      out << n->label << " ^ ";
      print_type(out, n->ann, true);
      out << " ";
      print_core(out, n->arg, 2);
    });
  } else if (auto* n = as<Core::VCase>(t)) {
    wrap(0, [&] {
      out << "case ";
      print_core(out, n->scrut, 0);
      out << " with <" << n->label << " " << n->xvar << " -> ";
      print_core(out, n->onlabel, 0);
      out << "; " << n->yvar << " -> ";
      print_core(out, n->other, 0);
      out << ">";
    });
  } else if (auto* n = as<Core::Cast>(t)) {
    out << "(";
    print_core(out, n->body, 1);
    out << " : ";
    print_type(out, n->src, false);
    out << " =" << show_blame(n->label) << "=> ";
    print_type(out, n->dst, false);
    out << ")";
  } else if (auto* n = as<Core::Conv>(t)) {
    out << "(";
    print_core(out, n->body, 1);
    out << " : ";
    print_type(out, n->src, false);
    out << " =" << show_conv(n->label) << "=> ";
    print_type(out, n->dst, false);
    out << ")";
  } else if (auto* n = as<Core::Blame>(t)) {
    wrap(1, [&] { out << "blame " << show_blame(n->label); });
  }
}

}  // namespace

std::string pretty(const TypePtr& t) {
  std::ostringstream out;
  print_type(out, t, false);
  return out.str();
}

std::string pretty(const TermPtr& t) {
  std::ostringstream out;
  print_term(out, t, 0);
  return out.str();
}

std::string pretty(const CorePtr& t) {
  std::ostringstream out;
  print_core(out, t, 0);
  return out.str();
}

std::string pretty(const ConstPtr& c) {
  std::ostringstream out;
  print_const(out, c);
  return out.str();
}

TermPtr desugar(const TermPtr& t) {
  auto rec = [&](const TermPtr& m) { return desugar(m); };
  if (as<Term::Var>(t) || as<Term::Lit>(t) || as<Term::REmp>(t)) return t;
  if (auto* n = as<Term::Lam>(t)) return mlam(n->var, n->ann, rec(n->body));
  if (auto* n = as<Term::App>(t)) return mapp(rec(n->fun), rec(n->arg));
  if (auto* n = as<Term::TLam>(t)) return mtlam(n->var, n->kind, rec(n->body));
  if (auto* n = as<Term::TApp>(t)) return mtapp(rec(n->fun), n->arg);
  if (auto* n = as<Term::RExtend>(t))
    return mrext(n->label, rec(n->field), rec(n->rest));
  if (auto* n = as<Term::RLet>(t))
    return mrlet(n->label, n->xvar, n->yvar, rec(n->record), rec(n->body));
  if (auto* n = as<Term::VInj>(t)) return minj(n->label, rec(n->arg));
  if (auto* n = as<Term::VEmbed>(t))
    return membed(n->label, n->ann, rec(n->arg));
  if (auto* n = as<Term::VCase>(t))
    return mcase(rec(n->scrut), n->label, n->xvar, rec(n->onlabel), n->yvar,
                 rec(n->other));
  auto* n = as<Term::Ascribe>(t);
  TermPtr body = rec(n->body);
  auto fv = free_vars_term(body);
  std::string x = fresh_name("x", fv);
  auto lam = std::const_pointer_cast<Term>(mlam(x, n->ann, mvar(x)));
  lam->line = t->line;
  lam->col = t->col;
  auto app = std::const_pointer_cast<Term>(mapp(lam, body));
  app->line = t->line;
  app->col = t->col;
  return app;
}

}  // namespace rowg
