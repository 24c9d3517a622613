#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/engine.hpp"

using namespace bicat;

static Signature test_sig() {
  Signature sig;
  sig.zero_cells = {"A", "B"};
  sig.one_gens = {{"X", "A", "B"}, {"Y", "B", "A"}, {"P", "A", "A"},
                  {"Q", "A", "A"}};
  sig.two_gens = {{"f", OneCell{"A", "B", {"X"}}, OneCell{"A", "B", {"X"}}},
                  {"g", OneCell{"B", "A", {"Y"}}, OneCell{"B", "A", {"Y"}}},
                  {"p", OneCell{"A", "A", {"P"}}, OneCell{"A", "A", {"Q"}}}};
  sig.dual_pairs = {{OneCell{"A", "B", {"X"}}, OneCell{"B", "A", {"Y"}}}};
  sig.symmetric_endo_homs = {"A"};
  sig.shadow_enabled = true;
  return sig;
}

TEST_CASE("piece_at and replace_at") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  TC tri = vcomp({hcomp({coev2(0), id2(x)}), hcomp({id2(x), eval2(0)})});
  Expr e = ex(tri);

  Pos root;
  CHECK(eq(piece_at(e, root), e));

  Pos first;
  first.path = {0};
  CHECK(eq(piece_at(e, first), ex(hcomp({coev2(0), id2(x)}))));

  Pos span;
  span.path = {0};
  span.lo = 0;
  span.hi = 0;
  CHECK(eq(piece_at(e, span), ex(coev2(0))));

  Expr repl = replace_at(e, first, ex(id2(concat(x, make_word(sig, {"Y"})))));
  // replacing a slice with an identity keeps a two-slice vertical composite
  CHECK(!eq(repl, e));

  Pos bad;
  bad.path = {5};
  CHECK_THROWS_AS(piece_at(e, bad), TypeError);
}

TEST_CASE("script: triangle identity as a one-step proof") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  auto rules = builtin_rules(sig);

  ProofScript script;
  script.lhs =
      ex(vcomp({hcomp({coev2(0), id2(x)}), hcomp({id2(x), eval2(0)})}));
  script.rhs = ex(id2(x));
  Step st;
  st.rule = "tri1.0";
  script.steps = {st};
  CHECK(verify_script(sig, rules, script).proved());

  // a wrong rule name fails
  script.steps[0].rule = "tri2.0";
  CHECK_THROWS_AS(verify_script(sig, rules, script), StepMismatch);
}

TEST_CASE("script: rotation involution in two essential steps") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});
  OneCell xy = concat(x, y);
  auto rules = builtin_rules(sig);

  ProofScript script;
  script.lhs = ex(scomp({theta(x, y), theta(y, x)}));
  script.rhs = ex(sid(xy));

  Step s1;  // hexagon backwards with a unit first slot
  s1.rule = "hex";
  s1.reverse = true;
  s1.subst.cells["X"] = unit_cell("A");
  s1.subst.cells["Y"] = x;
  s1.subst.cells["Z"] = y;
  Step s2;
  s2.rule = "thunit.l";
  s2.subst.cells["A"] = unit_cell("A");
  s2.subst.cells["X"] = xy;
  script.steps = {s1, s2};
  CHECK(verify_script(sig, rules, script).proved());

  // the derived involution rule closes the same goal in one step
  ProofScript one;
  one.lhs = script.lhs;
  one.rhs = script.rhs;
  Step sd;
  sd.rule = "thsq";
  sd.subst.cells["X"] = x;
  sd.subst.cells["Y"] = y;
  one.steps = {sd};
  CHECK(verify_script(sig, rules, one).proved());
}

TEST_CASE("step text round trip") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});
  auto rules = builtin_rules(sig);

  Step s1;
  s1.rule = "hex";
  s1.reverse = true;
  s1.pos.path = {1, 0};
  s1.pos.lo = 0;
  s1.pos.hi = 1;
  s1.subst.cells["X"] = unit_cell("A");
  s1.subst.cells["Y"] = x;
  s1.subst.cells["Z"] = y;
  std::string line = render_step(sig, rules, s1);
  CHECK(line == "hex~ @ 1.0:0..1 { X = U_A, Y = X, Z = Y }");
  Step back = parse_step(sig, rules, line);
  CHECK(back.rule == s1.rule);
  CHECK(back.reverse == s1.reverse);
  CHECK(back.pos.path == s1.pos.path);
  CHECK(back.pos.lo == 0);
  CHECK(back.pos.hi == 1);
  CHECK(back.subst.cells == s1.subst.cells);

  Step s2;
  s2.rule = "vunit.r";
  s2.subst.terms["f"] = gen2("p");
  std::string line2 = render_step(sig, rules, s2);
  Step back2 = parse_step(sig, rules, line2);
  CHECK(back2.pos.path.empty());
  CHECK(eq(back2.subst.terms.at("f"), gen2("p")));

  CHECK_THROWS_AS(parse_step(sig, rules, "nosuchrule @ root"), ParseError);
  CHECK_THROWS_AS(parse_step(sig, rules, "hex @ root { W = X }"), ParseError);
}

TEST_CASE("normalization") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell q = make_word(sig, {"Q"});
  TC p = gen2("p");

  // identity slices and unit factors disappear
  Expr e = ex(vcomp({hcomp({p, id2(unit_cell("A"))}), id2(q)}));
  Expr n = normalize(sig, e);
  CHECK(eq(n, ex(p)));

  // shadow of a vertical composite splits; shadow of an identity collapses
  Expr s = ex(sh(vcomp({p, id2(q)})));
  CHECK(eq(normalize(sig, s), ex(sh(p))));
  OneCell xy = concat(x, make_word(sig, {"Y"}));
  CHECK(eq(normalize(sig, ex(sh(id2(xy)))), ex(sid(xy))));

  // rotations with a unit argument vanish
  Expr t = ex(scomp({theta(unit_cell("A"), xy), sid(xy)}));
  CHECK(eq(normalize(sig, t), ex(sid(xy))));

  // idempotent
  CHECK(eq(normalize(sig, n), n));

  // recorded traces replay as scripts
  std::vector<Step> trace;
  Expr n2 = normalize(sig, e, &trace);
  CHECK(!trace.empty());
  ProofScript script;
  script.lhs = e;
  script.rhs = n2;
  script.steps = trace;
  CHECK(verify_script(sig, builtin_rules(sig), script).proved());
}

TEST_CASE("normalization preserves boundaries") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  Expr e = ex(vcomp({hcomp({coev2(0), id2(x)}), hcomp({id2(x), eval2(0)}),
                     id2(x)}));
  Bound before = typecheck(sig, e);
  Expr n = normalize(sig, e);
  Bound after = typecheck(sig, n);
  CHECK(before.src == after.src);
  CHECK(before.tgt == after.tgt);
}

TEST_CASE("search: interchange equality") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});
  auto rules = builtin_rules(sig);

  // sliding two disjoint 2-cells past each other
  Expr lhs = ex(vcomp({hcomp({gen2("f"), id2(y)}), hcomp({id2(x), gen2("g")})}));
  Expr rhs = ex(vcomp({hcomp({id2(x), gen2("g")}), hcomp({gen2("f"), id2(y)})}));
  Certificate c = search_equal(sig, rules, lhs, rhs, SearchBudget{});
  REQUIRE(c.proved());
  CHECK(verify_script(sig, rules, c.script).proved());
}

TEST_CASE("search: rotation involution") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});
  auto rules = builtin_rules(sig);

  Expr lhs = ex(scomp({theta(x, y), theta(y, x)}));
  Expr rhs = ex(sid(concat(x, y)));
  SearchBudget budget;
  budget.max_depth = 6;
  Certificate c = search_equal(sig, rules, lhs, rhs, budget);
  REQUIRE(c.proved());
  Certificate v = verify_script(sig, rules, c.script);
  CHECK(v.proved());
}

TEST_CASE("search: symmetry squares to the identity") {
  Signature sig = test_sig();
  OneCell p = make_word(sig, {"P"});
  OneCell q = make_word(sig, {"Q"});
  auto rules = builtin_rules(sig);

  Expr lhs = ex(vcomp({gamma2(p, q), gamma2(q, p)}));
  Expr rhs = ex(id2(concat(p, q)));
  Certificate c = search_equal(sig, rules, lhs, rhs, SearchBudget{});
  REQUIRE(c.proved());
  CHECK(verify_script(sig, rules, c.script).proved());
}

TEST_CASE("search: distinct generators stay unproved") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  auto rules = builtin_rules(sig);
  SearchBudget budget;
  budget.max_nodes = 2000;
  budget.max_depth = 4;
  Certificate c =
      search_equal(sig, rules, ex(gen2("f")), ex(id2(x)), budget);
  CHECK(!c.proved());
  CHECK(c.verdict == Verdict::Unknown);
}

TEST_CASE("search rejects mismatched boundaries") {
  Signature sig = test_sig();
  auto rules = builtin_rules(sig);
  Certificate c = search_equal(sig, rules, ex(gen2("f")), ex(gen2("g")),
                               SearchBudget{});
  CHECK(!c.proved());
}
