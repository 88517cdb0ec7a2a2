#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <string>

#include "ast.hpp"
#include "doctest.h"
#include "rows.hpp"
#include "syntax.hpp"

using namespace rowg;

namespace {

TypePtr row(const std::string& s) { return parse_type("[" + s + "]"); }

// parse_type has no bare-row entry point, so rows are written inside a
// record and unwrapped.
TypePtr bare(const std::string& s) {
  TypePtr t = row(s);
  auto* rec = as<Type::Record>(t);
  REQUIRE(rec != nullptr);
  return rec->row;
}

std::string show_split(const std::optional<std::pair<TypePtr, TypePtr>>& s) {
  if (!s) return "<none>";
  return pretty(s->first) + " | " + pretty(s->second);
}

}  // namespace

TEST_CASE("row_view flattens fields and classifies tails") {
  auto v = row_view(bare("l1:Int; l2:Bool; ."));
  REQUIRE(v.has_value());
  CHECK(v->fields.size() == 2);
  CHECK(v->fields[0].first == "l1");
  CHECK(v->fields[1].first == "l2");
  CHECK(v->tail == RowView::Tail::Empty);

  auto d = row_view(bare("l1:Int; ?"));
  REQUIRE(d.has_value());
  CHECK(d->tail == RowView::Tail::Dyn);

  auto n = row_view(trext("l1", tint(), tname(3)));
  REQUIRE(n.has_value());
  CHECK(n->tail == RowView::Tail::Name);
  CHECK(n->tail_name == 3);

  CHECK(!row_view(tint()).has_value());
  CHECK(!row_view(tfun(tint(), tint())).has_value());
}

TEST_CASE("row_build inverts row_view") {
  for (const char* s :
       {"l1:Int; l2:Bool; .", "l1:Int; ?", ".", "?", "l1:Int; l1:Bool; ."}) {
    CAPTURE(s);
    auto r = bare(s);
    auto v = row_view(r);
    REQUIRE(v.has_value());
    CHECK(type_equal(row_build(*v), r));
  }
}

TEST_CASE("row_dom collects prefix labels as a set") {
  auto d = row_dom(bare("l1:Int; l2:Bool; l1:Str; ?"));
  CHECK(d == std::set<std::string>{"l1", "l2"});
  CHECK(row_dom(bare(".")).empty());
  CHECK(row_dom(bare("?")).empty());
}

TEST_CASE("row_concat appends onto a closed prefix") {
  auto got = row_concat(bare("l1:Int; ."), bare("l2:Bool; ?"));
  REQUIRE(got.has_value());
  CHECK(pretty(trecord(*got)) == "[l1:Int; l2:Bool; ?]");

  // A dynamic or variable left side has no well-defined end.
  CHECK(!row_concat(bare("l1:Int; ?"), bare(".")).has_value());
}

TEST_CASE("split_row finds the first matching field") {
  CHECK(show_split(split_row(bare("l1:Int; l2:Bool; ."), "l1")) ==
        "Int | (l2:Bool; .)");
  CHECK(show_split(split_row(bare("l1:Int; l2:Bool; ."), "l2")) ==
        "Bool | (l1:Int; .)");
  // Scoped labels: the leftmost duplicate wins and the rest stays in order.
  CHECK(show_split(split_row(bare("l1:Int; l1:Bool; ."), "l1")) ==
        "Int | (l1:Bool; .)");
}

TEST_CASE("split_row treats a dynamic tail as holding any label") {
  CHECK(show_split(split_row(bare("?"), "l1")) == "? | ?");
  CHECK(show_split(split_row(bare("l1:Int; ?"), "l2")) == "? | (l1:Int; ?)");
  // The field itself is still found in the prefix when present.
  CHECK(show_split(split_row(bare("l1:Int; ?"), "l1")) == "Int | ?");
}

TEST_CASE("split_row is undefined for an absent label in a closed row") {
  CHECK(!split_row(bare("l1:Int;."), "l2").has_value());
  CHECK(!split_row(bare("."), "l1").has_value());
}

TEST_CASE("row_postpend appends just before the dynamic tail") {
  auto got = row_postpend(bare("l1:Int; ?"), "l2", tbool());
  REQUIRE(got.has_value());
  CHECK(pretty(trecord(*got)) == "[l1:Int; l2:Bool; ?]");
  auto top = row_postpend(bare("?"), "l1", tint());
  REQUIRE(top.has_value());
  CHECK(pretty(trecord(*top)) == "[l1:Int; ?]");
  CHECK(!row_postpend(bare("l1:Int; ."), "l2", tbool()).has_value());
}

TEST_CASE("row_grow computes the ground row shape") {
  auto g = row_grow(bare("l1:Int; l2:Bool; ."));
  REQUIRE(g.has_value());
  CHECK(pretty(trecord(*g)) == "[l1:?; ?]");
  auto e = row_grow(bare("."));
  REQUIRE(e.has_value());
  CHECK(is_rempty(*e));
  auto n = row_grow(tname(2));
  REQUIRE(n.has_value());
  CHECK(as<Type::TyName>(*n) != nullptr);
  CHECK(!row_grow(bare("?")).has_value());
  CHECK(!row_grow(tvar("X")).has_value());
}

TEST_CASE("canonicalize stable-sorts fields by label") {
  CHECK(pretty(canonicalize(row("l2:Bool; l1:Int; ."))) ==
        "[l1:Int; l2:Bool; .]");
  // Duplicate labels keep their original relative order.
  CHECK(pretty(canonicalize(row("l1:Int; l2:Str; l1:Bool; ."))) ==
        "[l1:Int; l1:Bool; l2:Str; .]");
  // Sorting recurses into field types.
  CHECK(pretty(canonicalize(parse_type("[l1:<k2:Int; k1:Bool; .>; .]"))) ==
        "[l1:<k1:Bool; k2:Int; .>; .]");
}

TEST_CASE("row_equiv permits reordering distinct labels only") {
  CHECK(row_equiv(row("l1:Int; l2:Bool; ."), row("l2:Bool; l1:Int; .")));
  CHECK(row_equiv(row("l1:Int; l2:Bool; ?"), row("l2:Bool; l1:Int; ?")));
  // Same-label fields cannot pass each other.
  CHECK(!row_equiv(row("l1:Int; l1:Bool; ."), row("l1:Bool; l1:Int; .")));
  // Tails must agree.
  CHECK(!row_equiv(row("l1:Int; ."), row("l1:Int; ?")));
  // Equivalence reaches under constructors and binders.
  CHECK(row_equiv(parse_type("forall X:R. [l1:Int; l2:Bool; X]"),
                  parse_type("forall Y:R. [l2:Bool; l1:Int; Y]")));
  CHECK(row_equiv(parse_type("<l1:Int; l2:Bool; .> -> Int"),
                  parse_type("<l2:Bool; l1:Int; .> -> Int")));
  CHECK(!row_equiv(parse_type("Int"), parse_type("Bool")));
}

TEST_CASE("row_equiv distinguishes record from variant constructors") {
  CHECK(!row_equiv(parse_type("[l1:Int; .]"), parse_type("<l1:Int; .>")));
}

TEST_CASE("three-field rotation stays within the equivalence") {
  auto a = row("l1:Int; l2:Bool; l3:Str; .");
  auto b = row("l3:Str; l1:Int; l2:Bool; .");
  auto c = row("l2:Bool; l3:Str; l1:Int; .");
  CHECK(row_equiv(a, b));
  CHECK(row_equiv(a, c));
  CHECK(row_equiv(b, c));
}

TEST_CASE("a duplicate-label row reorders around the other label") {
  // l2 can move across both l1 fields, but the l1 fields keep their order.
  auto a = row("l1:Int; l1:Bool; l2:Str; .");
  CHECK(row_equiv(a, row("l2:Str; l1:Int; l1:Bool; .")));
  CHECK(row_equiv(a, row("l1:Int; l2:Str; l1:Bool; .")));
  CHECK(!row_equiv(a, row("l1:Bool; l1:Int; l2:Str; .")));
}

TEST_CASE("ends_with_dyn sees through the field prefix") {
  CHECK(ends_with_dyn(bare("?")));
  CHECK(ends_with_dyn(bare("l1:Int; l2:Bool; ?")));
  CHECK(!ends_with_dyn(bare("l1:Int; .")));
  CHECK(!ends_with_dyn(trext("l1", tint(), tvar("X"))));
}
