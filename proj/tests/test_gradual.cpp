#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "ast.hpp"
#include "doctest.h"
#include "gradual.hpp"
#include "syntax.hpp"

using namespace rowg;

namespace {

bool cons(const char* a, const char* b) {
  return consistent(parse_type(a), parse_type(b));
}

bool ce(const char* a, const char* b) {
  return consistent_equiv(parse_type(a), parse_type(b));
}

std::string merged(const char* a, const char* b) {
  auto r = merge(parse_type(a), parse_type(b));
  return r ? pretty(*r) : "<none>";
}

}  // namespace

TEST_CASE("consistency ignores unknown parts but keeps field order") {
  CHECK(cons("Int", "Int"));
  CHECK(cons("Int", "?"));
  CHECK(cons("?", "Int"));
  CHECK(!cons("Int", "Bool"));
  CHECK(cons("Int -> Bool", "? -> Bool"));
  CHECK(!cons("Int -> Bool", "Bool -> Bool"));
  CHECK(cons("[l1:Int; l2:Bool; .]", "[l1:?; l2:Bool; .]"));
  // Reordering is not part of consistency.
  CHECK(!cons("[l1:Int; l2:Bool; .]", "[l2:Bool; l1:Int; .]"));
}

TEST_CASE("consistency extends rows only through a dynamic tail") {
  CHECK(cons("[l1:Int; ?]", "[l2:Bool; ?]"));
  CHECK(cons("<l1:Int; ?>", "<l2:Bool; l1:Int; ?>"));
  CHECK(!cons("[l1:Int; ?]", "[l2:Bool; .]"));
  CHECK(!cons("[l1:Int; .]", "[l2:Bool; l1:Int; .]"));
  CHECK(cons("[?]", "[l1:Int; l2:Bool; ?]"));
}

TEST_CASE("pointwise unknown fields make same-label rows consistent") {
  CHECK(!cons("[l1:Int; l1:Bool; .]", "[l1:Bool; l1:Int; .]"));
  CHECK(cons("[l1:?; l1:Bool; .]", "[l1:Bool; l1:?; .]"));
}

TEST_CASE("consistent equivalence composes reordering with consistency") {
  CHECK(ce("[l1:Int; l2:Bool; .]", "[l2:Bool; l1:Int; .]"));
  CHECK(ce("<l1:Int; l2:Bool; .>", "<l2:?; l1:Int; ?>"));
  CHECK(ce("[l1:Int; l2:Bool; .]", "[l2:?; l1:Int; ?]"));
  CHECK(!ce("[l1:Int; l2:Bool; .]", "[l2:Int; l1:Bool; .]"));
  // Same-label swaps stay outside the relation even here.
  CHECK(!ce("[l1:Int; l1:Bool; .]", "[l1:Bool; l1:Int; .]"));
}

TEST_CASE("the dynamic type can stand for a quantifier over dynamic parts") {
  CHECK(ce("forall X:T. X -> X", "? -> ?"));
  CHECK(ce("? -> ?", "forall X:T. X -> X"));
  CHECK(ce("forall X:R. [X] -> Int", "[?] -> Int"));
  // Without any unknown part the shapes must match exactly.
  CHECK(!ce("forall X:T. X -> X", "Int -> Int"));
  CHECK(!ce("forall X:T. ?", "Int -> Int"));
  CHECK(ce("forall X:T. X -> X", "forall Y:T. Y -> Y"));
  CHECK(!ce("forall X:T. X -> X", "forall Y:R. Y -> Y"));
}

TEST_CASE("qpoly picks out unknown-bearing non-quantifier value types") {
  CHECK(qpoly(parse_type("?")));
  CHECK(qpoly(parse_type("? -> Int")));
  CHECK(qpoly(parse_type("[l1:?; .]")));
  CHECK(!qpoly(parse_type("Int")));
  CHECK(!qpoly(parse_type("Int -> Bool")));
  CHECK(!qpoly(parse_type("forall X:T. ?")));
}

TEST_CASE("shape matching turns ? into the fully dynamic shape") {
  auto f = match_fun(parse_type("?"));
  REQUIRE(f.has_value());
  CHECK(pretty(f->first) == "?");
  CHECK(pretty(f->second) == "?");
  auto g = match_fun(parse_type("Int -> Bool"));
  REQUIRE(g.has_value());
  CHECK(pretty(g->first) == "Int");
  CHECK(pretty(g->second) == "Bool");
  CHECK(!match_fun(parse_type("Int")).has_value());
  CHECK(!match_fun(parse_type("[l1:Int; .]")).has_value());

  auto q = match_forall(parse_type("?"), Kind::R);
  REQUIRE(q.has_value());
  CHECK(std::get<1>(*q) == Kind::R);
  CHECK(pretty(std::get<2>(*q)) == "?");
  auto q2 = match_forall(parse_type("forall X:T. X -> X"), Kind::R);
  REQUIRE(q2.has_value());
  CHECK(std::get<1>(*q2) == Kind::T);  // the annotation on the type wins

  auto r = match_record(parse_type("?"));
  REQUIRE(r.has_value());
  CHECK(is_dyn(*r));
  auto v = match_variant(parse_type("<l1:Int; .>"));
  REQUIRE(v.has_value());
  CHECK(pretty(tvariant(*v)) == "<l1:Int; .>");
  CHECK(!match_record(parse_type("<l1:Int; .>")).has_value());
  CHECK(!match_variant(parse_type("[l1:Int; .]")).has_value());
}

TEST_CASE("merge joins branch types with the unknown absorbing") {
  CHECK(merged("Int", "Int") == "Int");
  CHECK(merged("Int", "?") == "?");
  CHECK(merged("?", "Int") == "?");
  CHECK(merged("Int", "Bool") == "<none>");
  CHECK(merged("Int -> ?", "? -> Bool") == "? -> ?");
}

TEST_CASE("merge keeps the left operand's field order") {
  CHECK(merged("[l1:Int; l2:Bool; .]", "[l2:Bool; l1:Int; .]") ==
        "[l1:Int; l2:Bool; .]");
  CHECK(merged("[l2:Bool; l1:Int; .]", "[l1:Int; l2:Bool; .]") ==
        "[l2:Bool; l1:Int; .]");
}

TEST_CASE("merge widens tails and unmatched dynamic-tail fields") {
  CHECK(merged("[l1:Int; .]", "[l1:Int; ?]") == "[l1:Int; ?]");
  CHECK(merged("[l1:Int; ?]", "[l2:Bool; ?]") == "[l1:?; ?]");
  CHECK(merged("[l1:?; ?]", "[l1:Int; l2:Bool; .]") == "[l1:?; ?]");
  CHECK(merged("<l1:Int; ?>", "<l1:?; .>") == "<l1:?; ?>");
}

TEST_CASE("merge reaches under quantifiers, preferring the left binder") {
  CHECK(merged("forall X:T. X -> ?", "forall Y:T. Y -> Int") ==
        "forall X:T. X -> ?");
  CHECK(merged("forall X:T. X -> Int", "forall Y:R. [Y] -> Int") == "<none>");
}

TEST_CASE("merge results are consistently equivalent to both operands") {
  const char* pairs[][2] = {
      {"Int", "?"},
      {"[l1:Int; ?]", "[l2:Bool; ?]"},
      {"[l1:Int; l2:Bool; .]", "[l2:Bool; l1:Int; .]"},
      {"<l1:Int; ?>", "<l1:?; .>"},
      {"Int -> ?", "? -> Bool"},
      {"forall X:T. X -> ?", "forall Y:T. Y -> Int"},
  };
  for (auto& p : pairs) {
    CAPTURE(p[0]);
    CAPTURE(p[1]);
    auto r = merge(parse_type(p[0]), parse_type(p[1]));
    REQUIRE(r.has_value());
    CHECK(consistent_equiv(parse_type(p[0]), *r));
    CHECK(consistent_equiv(parse_type(p[1]), *r));
  }
}

TEST_CASE("align_binders renames both bodies to one fresh variable") {
  auto [var, a, b] = align_binders("X", parse_type("forall X:T. X") /*dummy*/,
                                   "Y", tvar("Y"));
  (void)a;
  CHECK(!var.empty());
  CHECK(pretty(b) == var);
}
