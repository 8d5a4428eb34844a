// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "agentharness/toolcall.hpp"
#include "doctest.h"

using namespace ah;

TEST_CASE("parses dotted names, both quote styles and python literals") {
  auto calls = parse_tool_calls("[currency_conversion.convert(amount=150, from_currency='EUR', to_currency=\"CAD\")]");
  REQUIRE(calls.size() == 1);
  CHECK(calls[0].function == "currency_conversion.convert");
  CHECK(calls[0].argument("amount")->as_int() == 150);
  CHECK(calls[0].argument("from_currency")->as_string() == "EUR");
  CHECK(calls[0].argument("to_currency")->as_string() == "CAD");

  auto lit = parse_tool_calls("[f(a=True, b=false, c=None, d=null, e=-2.5e1, g=[1, 'x', [2]], h={\"k\": 1})]");
  const auto& c = lit[0];
  CHECK(c.argument("a")->as_bool());
  CHECK_FALSE(c.argument("b")->as_bool());
  CHECK(c.argument("c")->is_null());
  CHECK(c.argument("d")->is_null());
  CHECK(c.argument("e")->as_number() == -25.0);
  CHECK(c.argument("e")->is_float());
  CHECK(c.argument("g")->as_list().size() == 3);
  CHECK(c.argument("h")->find("k")->as_int() == 1);
}

TEST_CASE("empty list and zero-argument calls") {
  CHECK(parse_tool_calls("[]").empty());
  CHECK(parse_tool_calls("  [ get_watchlist( ) ]  ").at(0).function == "get_watchlist");
}

TEST_CASE("syntax errors carry a position") {
  for (const char* bad : {"[f(a=1)]]", "f(a=1)", "[f(a=1)", "[f(a 1)]", "[f(a='x)]", "[1f()]", "[f(a=1,)]x",
                          "[f(a=[1, 2)]", "{\"f\": {}}", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_tool_calls(bad), ToolCallSyntaxError);
    CHECK_FALSE(try_parse_tool_calls(bad).has_value());
  }
  try {
    parse_tool_calls("[f(a=1)] trailing");
  } catch (const ToolCallSyntaxError& e) {
    CHECK(e.position() >= 8);
  }
}

TEST_CASE("nesting is bounded") {
  std::string deep = "[f(a=" + std::string(100, '[') + std::string(100, ']') + ")]";
  CHECK_THROWS_AS(parse_tool_calls(deep), ToolCallSyntaxError);
  std::string ok = "[f(a=" + std::string(10, '[') + std::string(10, ']') + ")]";
  CHECK_NOTHROW(parse_tool_calls(ok));
}

TEST_CASE("rendering is canonical") {
  auto calls = parse_tool_calls("[game.save_progress(stage=7, mode='easy'),game.save_progress( stage=3 ,mode='hard')]");
  CHECK(render_tool_calls(calls) ==
        "[game.save_progress(stage=7, mode=\"easy\"), game.save_progress(stage=3, mode=\"hard\")]");
  CHECK(render_value(Value(2.0)) == "2.0");
  CHECK(render_value(Value(13.2)) == "13.2");
  CHECK(render_value(Value("a\"b\\c\n")) == "\"a\\\"b\\\\c\\n\"");
  CHECK(render_tool_calls({}) == "[]");
}

TEST_CASE("batch sequences") {
  auto batches = parse_batch_sequence("[lockDoors(unlock=True)], [lockDoors(unlock=False)]");
  REQUIRE(batches.size() == 2);
  CHECK(batches[1][0].argument("unlock")->as_bool() == false);
  CHECK_THROWS(parse_batch_sequence("[a()], "));
}

TEST_CASE("value literals") {
  CHECK(parse_value_literal(" 42 ").as_int() == 42);
  CHECK(parse_value_literal("'x'").as_string() == "x");
  CHECK_THROWS(parse_value_literal("42 43"));
}

TEST_CASE("argument order does not affect equality") {
  auto a = parse_tool_calls("[f(x=1, y=2)]");
  auto b = parse_tool_calls("[f(y=2, x=1)]");
  CHECK(a == b);
  CHECK_FALSE(parse_tool_calls("[f(x=1)]") == parse_tool_calls("[f(x=1.0)]"));
}
