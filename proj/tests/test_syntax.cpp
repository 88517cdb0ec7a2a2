#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <vector>

#include "ast.hpp"
#include "doctest.h"
#include "syntax.hpp"

using namespace rowg;

TEST_CASE("type parsing round-trips through the printer") {
  std::vector<std::string> types = {
      "Int",
      "Bool",
      "Str",
      "?",
      "Int -> Bool",
      "Int -> Bool -> Int",
      "(Int -> Bool) -> Int",
      "? -> ?",
      "[.]",
      "[?]",
      "[l1:Int; .]",
      "[l1:Int; l2:Bool; .]",
      "[l1:Int; ?]",
      "[l1:[l2:Bool; .]; ?]",
      "<.>",
      "<?>",
      "<l1:Int; .>",
      "<l1:Int; l1:Bool; ?>",
      "forall X:T. X -> X",
      "forall X:R. [l1:Int; X] -> [X]",
      "forall X:T. forall Y:R. X -> <Y>",
  };
  for (const auto& s : types) {
    CAPTURE(s);
    CHECK(pretty(parse_type(s)) == s);
  }
}

TEST_CASE("type printing normalizes spacing and parentheses") {
  CHECK(pretty(parse_type("Int->Bool")) == "Int -> Bool");
  CHECK(pretty(parse_type("[ l1 : Int ; . ]")) == "[l1:Int; .]");
  CHECK(pretty(parse_type("Int -> (Bool -> Int)")) == "Int -> Bool -> Int");
  CHECK(pretty(parse_type("((Int))")) == "Int");
}

TEST_CASE("term parsing round-trips through the printer") {
  std::vector<std::string> terms = {
      "0",
      "42",
      "true",
      "false",
      "\"hi\"",
      "add",
      "lam x:Int. x",
      "lam x:Int. lam y:Bool. x",
      "lam f:Int -> Int. f 0",
      "lam f:Int -> Int -> Int. f 0 1",
      "Lam X:T. lam x:X. x",
      "Lam X:R. lam r:[l1:Int; X]. r",
      "{}",
      "{l1=0}",
      "{l1=0; l2=true}",
      "lam r:[?]. let {l1=x; y} = r in x",
      "lam s:<l1:Int; .>. case s with <l1 x -> x; y -> 0>",
      "l1 ^ Bool (l1 0)",
      "lam x:Int. x : ?",
      "(lam x:?. x) 0",
      "(Lam X:T. lam x:X. x) @Int 0",
  };
  for (const auto& s : terms) {
    CAPTURE(s);
    CHECK(pretty(parse_term(s)) == s);
  }
}

TEST_CASE("an unbound identifier applied to an atom is an injection") {
  auto t = parse_term("l1 0");
  auto* inj = as<Term::VInj>(t);
  REQUIRE(inj != nullptr);
  CHECK(inj->label == "l1");
  CHECK(as<Term::Lit>(inj->arg) != nullptr);
}

TEST_CASE("a bound identifier applied to an atom is an application") {
  auto t = parse_term("lam l1:Int -> Int. l1 0");
  auto* lam = as<Term::Lam>(t);
  REQUIRE(lam != nullptr);
  auto* app = as<Term::App>(lam->body);
  REQUIRE(app != nullptr);
  CHECK(as<Term::Var>(app->fun) != nullptr);
}

TEST_CASE("binding decides injection separately under each binder") {
  // Outside the lambda l1 is free again, so the same spelling injects.
  auto t = parse_term("{l1=(lam l1:Int -> Int. l1 0) 0; l2=l1 0; {}}");
  auto* outer = as<Term::RExtend>(t);
  REQUIRE(outer != nullptr);
  auto* rest = as<Term::RExtend>(outer->rest);
  REQUIRE(rest != nullptr);
  CHECK(as<Term::VInj>(rest->field) != nullptr);
  CHECK(as<Term::App>(outer->field) != nullptr);
}

TEST_CASE("injection needs an argument that starts an atom") {
  // A bare unbound identifier stays a variable occurrence (the typechecker
  // rejects it); only one applied to an atom becomes an injection.
  CHECK(as<Term::Var>(parse_term("l1")) != nullptr);
  CHECK(as<Term::VInj>(parse_term("l1 {}")) != nullptr);
  CHECK(as<Term::VInj>(parse_term("l1 (lam x:Int. x)")) != nullptr);
}

TEST_CASE("record literals nest through the rest position") {
  auto t = parse_term("{l1=0; l2=true; {}}");
  auto* r1 = as<Term::RExtend>(t);
  REQUIRE(r1 != nullptr);
  CHECK(r1->label == "l1");
  auto* r2 = as<Term::RExtend>(r1->rest);
  REQUIRE(r2 != nullptr);
  CHECK(r2->label == "l2");
  CHECK(as<Term::REmp>(r2->rest) != nullptr);
  // The empty tail can be written or left implicit; printing elides it.
  CHECK(pretty(parse_term("{l1=0; {}}")) == "{l1=0}");
  CHECK(pretty(parse_term("{l1=0}")) == "{l1=0}");
}

TEST_CASE("record extension over a computed rest") {
  auto t = parse_term("lam r:[.]. {l1=0; r}");
  auto* lam = as<Term::Lam>(t);
  REQUIRE(lam != nullptr);
  auto* ext = as<Term::RExtend>(lam->body);
  REQUIRE(ext != nullptr);
  CHECK(as<Term::Var>(ext->rest) != nullptr);
  CHECK(pretty(t) == "lam r:[.]. {l1=0; r}");
}

TEST_CASE("ascription chains associate to the left") {
  auto t = parse_term("lam x:Int. x : ? : Int");
  auto* lam = as<Term::Lam>(t);
  REQUIRE(lam != nullptr);
  auto* outer = as<Term::Ascribe>(lam->body);
  REQUIRE(outer != nullptr);
  CHECK(pretty(outer->ann) == "Int");
  auto* inner = as<Term::Ascribe>(outer->body);
  REQUIRE(inner != nullptr);
  CHECK(pretty(inner->ann) == "?");
}

TEST_CASE("type application binds tighter than term application") {
  auto t = parse_term("(Lam X:T. lam x:X. x) @Int 0");
  auto* app = as<Term::App>(t);
  REQUIRE(app != nullptr);
  CHECK(as<Term::TApp>(app->fun) != nullptr);
}

TEST_CASE("case scrutinee and branches parse as written") {
  auto t =
      parse_term("lam s:<l1:Int; ?>. case s with <l1 x -> x; y -> 0>");
  auto* lam = as<Term::Lam>(t);
  REQUIRE(lam != nullptr);
  auto* vc = as<Term::VCase>(lam->body);
  REQUIRE(vc != nullptr);
  CHECK(vc->label == "l1");
  CHECK(vc->xvar == "x");
  CHECK(vc->yvar == "y");
  CHECK(as<Term::Var>(vc->scrut) != nullptr);
}

TEST_CASE("comments run to end of line") {
  auto t = parse_term("-- leading note\nlam x:Int. -- inline\n x");
  CHECK(pretty(t) == "lam x:Int. x");
}

TEST_CASE("parse errors carry positions and reject leftovers") {
  CHECK_THROWS_AS(parse_term("lam x:Int."), ParseError);
  CHECK_THROWS_AS(parse_term("{l1=0"), ParseError);
  CHECK_THROWS_AS(parse_type("[l1:Int"), ParseError);
  CHECK_THROWS_AS(parse_program("0 }"), ParseError);
  try {
    parse_term("lam x:Int.\n@");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("the parser rejects cast and blame forms") {
  CHECK_THROWS_AS(parse_term("0 : Int =p0=> ?"), ParseError);
  CHECK_THROWS_AS(parse_term("blame p0"), ParseError);
}

TEST_CASE("desugaring rewrites ascriptions to identity applications") {
  auto t = desugar(parse_term("lam x:Int. x : ?"));
  auto* lam = as<Term::Lam>(t);
  REQUIRE(lam != nullptr);
  auto* app = as<Term::App>(lam->body);
  REQUIRE(app != nullptr);
  auto* id = as<Term::Lam>(app->fun);
  REQUIRE(id != nullptr);
  CHECK(pretty(id->ann) == "?");
  CHECK(as<Term::Var>(id->body) != nullptr);
}

TEST_CASE("string literals escape through the printer") {
  auto t = parse_term("\"a b\"");
  CHECK(pretty(t) == "\"a b\"");
}

TEST_CASE("core printing parenthesizes casts and conversions") {
  auto body = ccast(ccint(0), tint(), BlameLabel{0, false}, tdyn());
  CHECK(pretty(body) == "(0 : Int =p0=> ?)");
  auto neg = ccast(ccint(0), tint(), BlameLabel{0, true}, tdyn());
  CHECK(pretty(neg) == "(0 : Int =~p0=> ?)");
  auto conv = cconv(ccint(0), tname(0), ConvLabel{0, true}, tint());
  CHECK(pretty(conv) == "(0 : a0 =+a0=> Int)");
  auto hide = cconv(ccint(0), tint(), ConvLabel{1, false}, tname(1));
  CHECK(pretty(hide) == "(0 : Int =-a1=> a1)");
  CHECK(pretty(cblame(BlameLabel{2, false})) == "blame p2");
}

TEST_CASE("core type lambdas print their body type") {
  auto e = ctlam("X", Kind::T, clam("x", tvar("X"), cvar("x")),
                 tfun(tvar("X"), tvar("X")));
  CHECK(pretty(e) == "Lam X:T. (lam x:X. x) :: X -> X");
}
