// SPDX-License-Identifier: Apache-2.0
#include <set>

#include "agentharness/json_io.hpp"
#include "agentharness/policy.hpp"
#include "agentharness/prng.hpp"
#include "doctest.h"

using namespace ah;

TEST_CASE("splitmix64 reference vectors") {
  SplitMix64 a(1234567);
  for (std::uint64_t want : {6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                             4593380528125082431ULL, 16408922859458223821ULL})
    CHECK(a.next() == want);
  SplitMix64 b(42);
  for (std::uint64_t want : {13679457532755275413ULL, 2949826092126892291ULL, 5139283748462763858ULL})
    CHECK(b.next() == want);
}

TEST_CASE("below and unit stay in range") {
  SplitMix64 r(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.below(6);
    CHECK(v < 6);
    seen.insert(v);
    const double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("prompt flattening and token counting") {
  std::vector<ChatMessage> m{{Role::system, "sys"}, {Role::user, "hello there"}};
  CHECK(render_prompt(m) == "system: sys\nuser: hello there\n");
  CHECK(count_whitespace_tokens("  a b\tc\n d ") == 4);
  CHECK(count_whitespace_tokens("") == 0);
}

TEST_CASE("throughput") {
  std::vector<Completion> cs{{"x", 10, 1.0}, {"y", 30, 1.0}};
  CHECK(throughput(cs) == doctest::Approx(20.0));
  std::vector<Completion> zero{{"x", 10, 0.0}};
  CHECK_THROWS_AS(throughput(zero), std::domain_error);
}

TEST_CASE("scripted backend: first match wins, regex rules, default") {
  PolicyScript s;
  s.rules = {{"apple", false, "A"}, {"ap+le|pear", true, "B"}, {"pear", false, "C"}};
  s.default_response = "D";
  ScriptedBackend b(s);
  CHECK(b.respond("an apple") == "A");
  CHECK(b.respond("a pear") == "B");
  CHECK(b.respond("plum") == "D");
  std::vector<ChatMessage> m{{Role::user, "one two pear"}};
  auto c = b.complete(m, {});
  CHECK(c.text == "B");
  CHECK(c.generated_tokens == 1);
  CHECK(c.wall_seconds == doctest::Approx(1.0 / 50.0));
}

TEST_CASE("replay scripts advance on their own previous output") {
  auto s = PolicyScript::replay({"first", "second", "third"});
  ScriptedBackend b(s);
  CHECK(b.respond("start") == "first");
  CHECK(b.respond("start first") == "second");
  CHECK(b.respond("start first second") == "third");
  CHECK_THROWS_AS(PolicyScript::replay({"go", "go north"}), std::invalid_argument);
  CHECK_THROWS_AS(PolicyScript::replay({"a", ""}), std::invalid_argument);
}

TEST_CASE("script json round trip") {
  auto s = PolicyScript::replay({"x1", "x2"});
  s.tokens_per_second = 12.5;
  auto back = script_from_json(to_json(s), "s");
  CHECK(back == s);
  CHECK_THROWS_AS(script_from_json(Json{{"rulez", Json::array()}}, "s"), FormatError);
  CHECK_THROWS(script_from_json(Json{{"rules", {{{"regex", "("}, {"response", "x"}}}}}, "s"));
}

TEST_CASE("recording and failing backends") {
  auto inner = std::make_shared<ScriptedBackend>(PolicyScript{{}, "ok"});
  RecordingBackend rec(inner);
  std::vector<ChatMessage> m{{Role::user, "q"}};
  rec.complete(m, {});
  rec.complete(m, {});
  CHECK(rec.call_count() == 2);
  CHECK(rec.calls()[1] == m);

  FailingBackend f(BackendErrorKind::timeout);
  try {
    f.complete(m, {});
    FAIL("expected a BackendError");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendErrorKind::timeout);
  }
}
