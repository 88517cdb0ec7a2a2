#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "ast.hpp"
#include "core.hpp"
#include "doctest.h"
#include "statics.hpp"
#include "syntax.hpp"

using namespace rowg;

namespace {

std::string translated(const std::string& src) {
  Ctx ctx;
  return pretty(translate(ctx, parse_term(src)).core);
}

// Checks e against `expected` (synthesizes when null) under x bound to xty.
bool core_accepts(const CorePtr& e, const TypePtr* expected,
                  const TypePtr& xty = nullptr) {
  NameStore store;
  Ctx ctx;
  if (xty) ctx.push_term("x", xty);
  try {
    typecheck_core(store, ctx, e, expected);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

}  // namespace

TEST_CASE("translation inserts casts at eliminations with labels allocated "
          "in evaluation order") {
  CHECK(translated("lam f:?. f 0") ==
        "lam f:?. (f : ? =p0=> ? -> ?) (0 : Int =p1=> ?)");
  CHECK(translated("add 1 2") ==
        "((add : Int -> Int -> Int =p0=> Int -> Int -> Int) (1 : Int =p1=> "
        "Int) : Int -> Int =p2=> Int -> Int) (2 : Int =p3=> Int)");
  CHECK(translated("lam x:Int. x") == "lam x:Int. x");
}

TEST_CASE("ascriptions translate as identity applications casting both "
          "sides") {
  CHECK(translated("{l1=0} : [?]") ==
        "((lam x:[?]. x) : [?] -> [?] =p0=> [?] -> [?]) ({l1=0; ({} : [.] "
        "=p1=> [.])} : [l1:Int; .] =p2=> [?])");
}

TEST_CASE("case translation casts the scrutinee and both branches") {
  CHECK(translated("lam s:<l1:Int; .>. case s with <l1 x -> x; y -> 0>") ==
        "lam s:<l1:Int; .>. case (s : <l1:Int; .> =p0=> <l1:Int; .>) with "
        "<l1 x -> (x : Int =p1=> Int); y -> (0 : Int =p2=> Int)>");
}

TEST_CASE("record elimination translation casts the record to its split "
          "shape") {
  CHECK(translated("lam r:[l1:Int; ?]. let {l1=x; y} = r in x") ==
        "lam r:[l1:Int; ?]. let {l1=x; y} = (r : [l1:Int; ?] =p0=> [l1:Int; "
        "?]) in x");
}

TEST_CASE("type application translation keeps the annotation on the "
          "abstraction") {
  CHECK(translated("(Lam X:T. lam x:X. x) @Int 0") ==
        "(((Lam X:T. (lam x:X. x) :: X -> X) : forall X:T. X -> X =p0=> "
        "forall X:T. X -> X) @Int : Int -> Int =p1=> Int -> Int) (0 : Int "
        "=p2=> Int)");
}

TEST_CASE("translation rejects exactly what the gradual checker rejects") {
  for (const char* src : {"0 1", "(lam x:Int. x) true", "x",
                          "let {l3=x; y} = {l1=0} in x"}) {
    CAPTURE(src);
    Ctx c1, c2;
    auto t = parse_term(src);
    bool checker_throws = false, translate_throws = false;
    try {
      typecheck_gradual(c1, t);
    } catch (const TypeError&) {
      checker_throws = true;
    }
    try {
      translate(c2, t);
    } catch (const TypeError&) {
      translate_throws = true;
    }
    CHECK(checker_throws);
    CHECK(checker_throws == translate_throws);
  }
}

TEST_CASE("translations typecheck in the core at the surface type") {
  for (const char* src :
       {"lam f:?. f 0", "{l1=0} : [?]", "add 1 2",
        "lam s:<l1:Int; .>. case s with <l1 x -> x; y -> 0>",
        "(Lam X:T. lam x:X. x) @Int 0", "(Lam X:T. lam x:X. x : ? : X) @Bool",
        "lam r:[l1:Int; ?]. let {l1=x; y} = r in x",
        "Lam X:R. lam r:[l1:Int; X]. let {l1=x; y} = r in x"}) {
    CAPTURE(src);
    Ctx tctx;
    auto tr = translate(tctx, parse_term(src));
    NameStore store;
    Ctx ctx;
    auto got = typecheck_core(store, ctx, tr.core, &tr.type);
    CHECK(type_equal(got, tr.type));
  }
}

TEST_CASE("core variables check at their exact type") {
  auto ty = tfun(tint(), tint());
  CHECK(core_accepts(cvar("x"), &ty, tfun(tint(), tint())));
  auto other = tfun(tint(), tbool());
  CHECK(!core_accepts(cvar("x"), &other, tfun(tint(), tint())));
}

TEST_CASE("a closed variant prefix also checks at any extension of itself") {
  // An injection synthesizes the one-field closed row; positions expecting
  // a longer or open row starting with that prefix still accept it.
  auto inj_ty = tvariant(trext("l1", tint(), trempty()));
  auto wider = tvariant(trext("l1", tint(), trext("l2", tbool(), trempty())));
  auto open = tvariant(trext("l1", tint(), tdyn()));
  CHECK(core_accepts(cvar("x"), &wider, inj_ty));
  CHECK(core_accepts(cvar("x"), &open, inj_ty));
  // The declared prefix has to match in order; reordering is not part of
  // core typing.
  auto reordered =
      tvariant(trext("l2", tbool(), trext("l1", tint(), trempty())));
  CHECK(!core_accepts(cvar("x"), &reordered, inj_ty));
  // Records do not have the freedom: their row is fixed by the value.
  auto rec = trecord(trext("l1", tint(), trempty()));
  auto rec_wide =
      trecord(trext("l1", tint(), trext("l2", tbool(), trempty())));
  CHECK(!core_accepts(cvar("x"), &rec_wide, rec));
  // The slack is covariant: result positions inherit it, argument positions
  // do not.
  auto f_narrow = tfun(tint(), inj_ty);
  auto f_wide = tfun(tint(), open);
  CHECK(core_accepts(cvar("x"), &f_wide, f_narrow));
  auto g_narrow = tfun(inj_ty, tint());
  auto g_wide = tfun(open, tint());
  CHECK(!core_accepts(cvar("x"), &g_wide, g_narrow));
}

TEST_CASE("injections synthesize the minimal closed row") {
  NameStore store;
  Ctx ctx;
  auto got = typecheck_core(store, ctx, cinj("l1", ccint(0)));
  CHECK(pretty(got) == "<l1:Int; .>");
  auto wider = tvariant(trext("l1", tint(), trext("l2", tbool(), trempty())));
  CHECK(core_accepts(cinj("l1", ccint(0)), &wider));
  auto mislabeled = tvariant(trext("l2", tint(), trempty()));
  CHECK(!core_accepts(cinj("l1", ccint(0)), &mislabeled));
}

TEST_CASE("casts require the body at the source and consistent equivalence "
          "to the target") {
  BlameLabel p{0, false};
  CHECK(core_accepts(ccast(ccint(0), tint(), p, tdyn()), nullptr));
  // Body not of the source type.
  CHECK(!core_accepts(ccast(ccint(0), tbool(), p, tdyn()), nullptr));
  // Source and target not consistently equivalent.
  CHECK(!core_accepts(ccast(ccint(0), tint(), p, tbool()), nullptr));
  // Reordering is allowed across a cast.
  auto r1 = trecord(trext("l1", tint(), trext("l2", tbool(), trempty())));
  auto r2 = trecord(trext("l2", tbool(), trext("l1", tint(), trempty())));
  CHECK(core_accepts(ccast(cvar("x"), r1, p, r2), nullptr, r1));
}

TEST_CASE("conversions require convertibility under the store") {
  NameStore store;
  int a = store.fresh(Kind::T, tint());
  Ctx ctx;
  auto conceal = cconv(ccint(0), tint(), ConvLabel{a, false}, tname(a));
  auto got = typecheck_core(store, ctx, conceal);
  CHECK(pretty(got) == "a0");
  auto wrong = cconv(ccbool(true), tbool(), ConvLabel{a, false}, tname(a));
  CHECK_THROWS_AS(typecheck_core(store, ctx, wrong), TypeError);
}

TEST_CASE("blame checks at any type but synthesizes none") {
  BlameLabel p{0, false};
  auto ty = tint();
  CHECK(core_accepts(cblame(p), &ty));
  auto rec = trecord(tdyn());
  CHECK(core_accepts(cblame(p), &rec));
  CHECK(!core_accepts(cblame(p), nullptr));
}

TEST_CASE("convertibility reveals and conceals one name directionally") {
  NameStore store;
  int a = store.fresh(Kind::T, tint());
  int b = store.fresh(Kind::R, trext("l1", tint(), trempty()));
  auto A = tname(a);
  CHECK(convertible(store, A, {a, true}, tint()));
  CHECK(convertible(store, tint(), {a, false}, A));
  CHECK(!convertible(store, tint(), {a, true}, A));
  CHECK(!convertible(store, A, {a, false}, tint()));
  CHECK(!convertible(store, A, {a, true}, tbool()));
  // Types not mentioning the name convert to themselves under any label.
  CHECK(convertible(store, tbool(), {a, true}, tbool()));
  CHECK(convertible(store, A, {b, true}, A));
  // Function domains flip the direction.
  CHECK(convertible(store, tfun(A, tint()), {a, true}, tfun(tint(), tint())));
  CHECK(convertible(store, tfun(tint(), A), {a, true}, tfun(tint(), tint())));
  CHECK(
      !convertible(store, tfun(tint(), tint()), {a, true}, tfun(A, tint())));
  // Row names reveal inside records and variants, pointwise.
  auto stored = trext("l1", tint(), trempty());
  CHECK(convertible(store, trecord(tname(b)), {b, true}, trecord(stored)));
  CHECK(convertible(store, tvariant(tname(b)), {b, true}, tvariant(stored)));
  CHECK(!convertible(store, trecord(tname(b)), {b, true},
                     trecord(trext("l2", tint(), trempty()))));
  // The unknown converts only to itself.
  CHECK(convertible(store, tdyn(), {a, true}, tdyn()));
  CHECK(!convertible(store, tdyn(), {a, true}, tint()));
}

TEST_CASE("translated identity over a sealed variable stays well typed "
          "after instantiation") {
  Ctx ctx;
  auto tr = translate(ctx, parse_term("(Lam X:T. lam x:X. x : ? : X) @Int"));
  NameStore store;
  Ctx cctx;
  auto got = typecheck_core(store, cctx, tr.core, &tr.type);
  CHECK(pretty(got) == "Int -> Int");
}
