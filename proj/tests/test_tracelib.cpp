#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/tracelib.hpp"

using namespace bicat;

TEST_CASE("build_trace boundaries") {
  Signature sig = functoriality_sig();
  DualPairHandle p = declared_pair(sig, 0);
  TraceExpr t = build_trace(sig, p, id2(p.X));
  Bound b = typecheck_shadow(sig, t.result);
  CHECK(b.src == unit_cell("A"));
  CHECK(b.tgt == unit_cell("B"));

  // a non-matching 2-cell is rejected
  CHECK_THROWS_AS(build_trace(sig, p, id2(p.Y)), TypeError);
}

TEST_CASE("unit pair trace reduces to the identity shadow") {
  Signature sig;
  sig.zero_cells = {"A"};
  sig.shadow_enabled = true;
  TraceExpr t = build_trace(sig, unit_pair("A"), id2(unit_cell("A")));
  CHECK(eq(normalize(sig, ex(t.result)), ex(sid(unit_cell("A")))));
}

TEST_CASE("composing with the unit pair is neutral up to normalization") {
  Signature sig = functoriality_sig();
  DualPairHandle p1 = declared_pair(sig, 0);
  DualPairHandle u = unit_pair("B");
  DualPairHandle c = compose_dual_pairs(sig, p1, u);
  CHECK(c.X == p1.X);
  CHECK(c.Y == p1.Y);
  CHECK(eq(normalize(sig, ex(c.coev)), normalize(sig, ex(p1.coev))));
  CHECK(eq(normalize(sig, ex(c.eval)), normalize(sig, ex(p1.eval))));
}

TEST_CASE("composite dual pair carries verified triangle certificates") {
  Signature sig = functoriality_sig();
  DualPairHandle c =
      compose_dual_pairs(sig, declared_pair(sig, 0), declared_pair(sig, 1));
  CHECK(c.X.word == Word{"X", "Xp"});
  CHECK(c.Y.word == Word{"Yp", "Y"});
  REQUIRE(c.certificates.size() == 2);
  auto rules = builtin_rules(sig);
  for (auto& cert : c.certificates)
    CHECK(verify_script(sig, rules, cert).proved());
}

TEST_CASE("non-composable pairs are rejected") {
  Signature sig = functoriality_sig();
  CHECK_THROWS_AS(
      compose_dual_pairs(sig, declared_pair(sig, 1), declared_pair(sig, 0)),
      TypeError);
}

TEST_CASE("shipped corpus verifies") {
  auto thms = shipped_theorems();
  REQUIRE(thms.size() == 6);
  for (auto& t : thms) {
    CAPTURE(t.name);
    auto rules = builtin_rules(t.sig);
    CHECK(verify_script(t.sig, rules, t.script).proved());
  }
}
