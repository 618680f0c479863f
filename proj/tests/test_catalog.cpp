#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "dtrank/catalog.hpp"
#include "dtrank/util.hpp"

using namespace dtrank;

namespace {

bool tables_match(const BoolFun& f, bool (*pred)(std::uint32_t, int), int n) {
  for (std::uint32_t x = 0; x < f.table_size(); ++x)
    if (f.evaluate(x) != pred(x, n)) return false;
  return true;
}

}  // namespace

TEST_CASE("named families match their definitions") {
  for (int n = 1; n <= 5; ++n) {
    CHECK(tables_match(catalog::and_fn(n),
                       [](std::uint32_t x, int n) { return x == (1u << n) - 1; }, n));
    CHECK(tables_match(catalog::or_fn(n),
                       [](std::uint32_t x, int) { return x != 0; }, n));
    CHECK(tables_match(catalog::parity(n),
                       [](std::uint32_t x, int) { return (std::popcount(x) & 1) != 0; },
                       n));
    CHECK(tables_match(catalog::majority(n),
                       [](std::uint32_t x, int n) {
                         return std::popcount(x) >= n / 2 + 1;
                       },
                       n));
    for (int k = 1; k <= n; ++k) {
      const BoolFun thr = catalog::threshold(k, n);
      for (std::uint32_t x = 0; x < thr.table_size(); ++x)
        CHECK(thr.evaluate(x) == (std::popcount(x) >= k));
    }
  }
  CHECK_THROWS_AS(catalog::threshold(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(catalog::threshold(4, 3), std::invalid_argument);
}

TEST_CASE("tribes block layout") {
  // TRIBES(2,2) = (x1 AND x2) OR (x3 AND x4)
  CHECK(catalog::tribes(2, 2).to_hex() == "888f");
  // TRIBES_D(2,2) = (x1 OR x2) AND (x3 OR x4)
  CHECK(catalog::tribes_dual(2, 2).to_hex() == "0eee");
  CHECK(catalog::tribes(2, 2).dual() == catalog::tribes_dual(2, 2));

  const BoolFun t23 = catalog::tribes(2, 3);
  CHECK(t23.arity() == 6);
  for (std::uint32_t x = 0; x < 64; ++x) {
    const bool expect = (x & 7u) == 7u || ((x >> 3) & 7u) == 7u;
    CHECK(t23.evaluate(x) == expect);
  }
}

TEST_CASE("majority-or-parity") {
  const BoolFun f = catalog::maj_or_parity(4);
  for (std::uint32_t x = 0; x < 16; ++x) {
    const int ones = std::popcount(x);
    CHECK(f.evaluate(x) == (ones >= 3 || (ones & 1) != 0));
  }
}

TEST_CASE("expression parsing: named forms") {
  CHECK(parse_function("AND:3") == catalog::and_fn(3));
  CHECK(parse_function("OR:4") == catalog::or_fn(4));
  CHECK(parse_function("PARITY:2") == catalog::parity(2));
  CHECK(parse_function("MAJ:5") == catalog::majority(5));
  CHECK(parse_function("THR:2:4") == catalog::threshold(2, 4));
  CHECK(parse_function("TRIBES:2x3") == catalog::tribes(2, 3));
  CHECK(parse_function("TRIBES_D:3x2") == catalog::tribes_dual(3, 2));
  CHECK(parse_function("MAJ-OR-PARITY:4") == catalog::maj_or_parity(4));
  CHECK(parse_function("TT:0eee:4") == catalog::tribes_dual(2, 2));
}

TEST_CASE("expression parsing: operators") {
  CHECK(parse_function("NOT(AND:2)") == catalog::and_fn(2).negated());
  CHECK(parse_function("DUAL(AND:3)") == catalog::or_fn(3));
  CHECK(parse_function("ITER(MAJ:3,2)") == BoolFun::iterate(catalog::majority(3), 2));
  CHECK(parse_function("COMPOSE(AND:2;OR:2,OR:2)") == catalog::tribes_dual(2, 2));
  CHECK(parse_function("COMPOSE(OR:2;AND:2,PARITY:3)") ==
        BoolFun::compose(catalog::or_fn(2), {catalog::and_fn(2), catalog::parity(3)}));
  CHECK(parse_function("NOT( AND:2 )") == catalog::and_fn(2).negated());
}

TEST_CASE("expression parsing: errors carry a position") {
  CHECK_THROWS_AS(parse_function(""), ParseError);
  CHECK_THROWS_AS(parse_function("AND"), ParseError);
  CHECK_THROWS_AS(parse_function("AND:"), ParseError);
  // parses, but the arity is rejected when the table is built
  CHECK_THROWS_AS(parse_function("AND:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_function("FOO:3"), ParseError);
  CHECK_THROWS_AS(parse_function("NOT(AND:2"), ParseError);
  CHECK_THROWS_AS(parse_function("AND:2 trailing"), ParseError);
  CHECK_THROWS_AS(parse_function("TT:zz:2"), ParseError);
  // parses, but the block count does not match the outer arity
  CHECK_THROWS_AS(parse_function("COMPOSE(AND:2;OR:2)"), std::invalid_argument);
  try {
    parse_function("NOT(AND:x)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() >= 4);
  }
}

TEST_CASE("expression structure: composition and block shape") {
  const FnExpr tribes = parse_expression("TRIBES:2x3");
  const auto comp = tribes.composition();
  REQUIRE(comp.has_value());
  CHECK(comp->outer == catalog::or_fn(2));
  REQUIRE(comp->inners.size() == 2);
  CHECK(comp->inners[0] == catalog::and_fn(3));
  const auto shape = tribes.block_shape();
  REQUIRE(shape.has_value());
  CHECK(shape->rows == 2);
  CHECK(shape->cols == 3);

  const FnExpr mixed = parse_expression("COMPOSE(OR:2;AND:2,PARITY:3)");
  REQUIRE(mixed.composition().has_value());
  CHECK(!mixed.block_shape().has_value());

  const FnExpr iter = parse_expression("ITER(MAJ:3,2)");
  const auto iter_comp = iter.composition();
  REQUIRE(iter_comp.has_value());
  CHECK(iter_comp->outer == catalog::majority(3));
  CHECK(iter_comp->inners.size() == 3);
  CHECK(iter_comp->inners[1] == catalog::majority(3));

  CHECK(!parse_expression("MAJ:3").composition().has_value());
  CHECK(parse_expression("AND:2").arity() == 2);
  CHECK(parse_expression("TRIBES:2x3").arity() == 6);
}

TEST_CASE("closed-form rows for small arities") {
  const auto rows = closed_form_rows(3);
  REQUIRE(rows.size() == 9);  // 2 constants + AND/OR/PARITY/MAJ + THR 1..3
  for (const auto& row : rows) {
    CHECK(row.rank == 3 - row.gap);
    if (row.expression.empty()) continue;
    const BoolFun f = parse_function(row.expression);
    CHECK(f.arity() == 3);
  }
  CHECK_THROWS_AS(closed_form_rows(0), std::invalid_argument);
}

TEST_CASE("truth-table file format") {
  const BoolFun f = catalog::tribes_dual(2, 2);
  const std::string text = to_tt_file(f);
  CHECK(text == "n=4\n0eee\n");
  CHECK(from_tt_file(text) == f);
  CHECK(from_tt_file("n=4\n0eee") == f);
  CHECK(from_tt_file("n=4 \n 0eee \n\n") == f);
  CHECK_THROWS_AS(from_tt_file(""), std::invalid_argument);
  CHECK_THROWS_AS(from_tt_file("4\n0eee\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_tt_file("n=4\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_tt_file("n=4\n0eee\nextra\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_tt_file("n=4\n0ee\n"), std::invalid_argument);
}
