#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/term.hpp"

using namespace bicat;

static Signature test_sig() {
  Signature sig;
  sig.zero_cells = {"A", "B"};
  sig.one_gens = {{"X", "A", "B"}, {"Y", "B", "A"}, {"P", "A", "A"},
                  {"Q", "A", "A"}};
  sig.two_gens = {{"f", OneCell{"A", "B", {"X"}}, OneCell{"A", "B", {"X"}}},
                  {"p", OneCell{"A", "A", {"P"}}, OneCell{"A", "A", {"Q"}}}};
  sig.dual_pairs = {{OneCell{"A", "B", {"X"}}, OneCell{"B", "A", {"Y"}}}};
  sig.symmetric_endo_homs = {"A"};
  sig.shadow_enabled = true;
  return sig;
}

TEST_CASE("one-cell concatenation and units") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});
  OneCell xy = concat(x, y);
  CHECK(xy.src == "A");
  CHECK(xy.tgt == "A");
  CHECK(xy.word == Word{"X", "Y"});
  CHECK(concat(unit_cell("A"), x) == x);
  CHECK(concat(x, unit_cell("B")) == x);
  CHECK(unit_cell("A").is_unit());
  CHECK_THROWS_AS(concat(x, x), TypeError);
  CHECK_THROWS_AS(make_word(sig, {"X", "X"}), TypeError);
  CHECK_THROWS_AS(make_word(sig, {"Z"}), TypeError);
}

TEST_CASE("signature validation") {
  Signature sig = test_sig();
  CHECK(validate_signature(sig).empty());

  SUBCASE("duplicate generator names") {
    sig.one_gens.push_back({"X", "A", "A"});
    CHECK(!validate_signature(sig).empty());
  }
  SUBCASE("reserved names rejected") {
    sig.one_gens.push_back({"U_A", "A", "A"});
    CHECK(!validate_signature(sig).empty());
  }
  SUBCASE("dual pair boundary mismatch") {
    sig.dual_pairs.push_back(
        {OneCell{"A", "B", {"X"}}, OneCell{"A", "A", {"P"}}});
    CHECK(!validate_signature(sig).empty());
  }
  SUBCASE("unknown zero cell on a generator") {
    sig.one_gens.push_back({"W", "A", "C"});
    CHECK(!validate_signature(sig).empty());
  }
  SUBCASE("symmetric flag on unknown zero cell") {
    sig.symmetric_endo_homs.insert("C");
    CHECK(!validate_signature(sig).empty());
  }
}

TEST_CASE("composite constructors flatten") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  TC f = gen2("f");
  TC v = vcomp({vcomp({f, id2(x)}), f});
  CHECK(v->k == TK::VComp);
  CHECK(v->kids.size() == 3);
  CHECK(vcomp({f}) == f);
  TC h = hcomp({hcomp({f, id2(make_word(sig, {"Y"}))}), id2(x)});
  CHECK(h->kids.size() == 3);
  SC s = scomp({scomp({sh(f), sid(x)}), sh(f)});
  CHECK(s->kids.size() == 3);
}

TEST_CASE("2-cell typing") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});

  Bound b = typecheck_2cell(sig, gen2("f"));
  CHECK(b.src == x);
  CHECK(b.tgt == x);

  b = typecheck_2cell(sig, coev2(0));
  CHECK(b.src == unit_cell("A"));
  CHECK(b.tgt == concat(x, y));
  b = typecheck_2cell(sig, eval2(0));
  CHECK(b.src == concat(y, x));
  CHECK(b.tgt == unit_cell("B"));

  // zig-zag composites
  TC tri = vcomp({hcomp({coev2(0), id2(x)}), hcomp({id2(x), eval2(0)})});
  b = typecheck_2cell(sig, tri);
  CHECK(b.src == x);
  CHECK(b.tgt == x);

  // symmetry 2-cell on the flagged endo hom
  OneCell p = make_word(sig, {"P"});
  OneCell q = make_word(sig, {"Q"});
  b = typecheck_2cell(sig, gamma2(p, q));
  CHECK(b.src == concat(p, q));
  CHECK(b.tgt == concat(q, p));
  CHECK_THROWS_AS(typecheck_2cell(sig, gamma2(x, y)), TypeError);

  // mismatched vertical composite
  CHECK_THROWS_AS(typecheck_2cell(sig, vcomp({gen2("p"), gen2("p")})),
                  TypeError);
  // mismatched horizontal composite
  CHECK_THROWS_AS(typecheck_2cell(sig, hcomp({gen2("f"), gen2("f")})),
                  TypeError);
  // metavariables have no boundary
  CHECK_THROWS_AS(typecheck_2cell(sig, mvar2("g")), TypeError);
}

TEST_CASE("shadow typing") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});
  OneCell xy = concat(x, y);
  OneCell yx = concat(y, x);

  Bound b = typecheck_shadow(sig, theta(x, y));
  CHECK(b.src == xy);
  CHECK(b.tgt == yx);

  b = typecheck_shadow(sig, scomp({theta(x, y), theta(y, x)}));
  CHECK(b.src == xy);
  CHECK(b.tgt == xy);

  b = typecheck_shadow(sig, sh(gen2("p")));
  CHECK(b.src == make_word(sig, {"P"}));

  // shadow only applies to endo 2-cells
  CHECK_THROWS_AS(typecheck_shadow(sig, sh(gen2("f"))), TypeError);
  // theta arguments must be anti-parallel
  CHECK_THROWS_AS(typecheck_shadow(sig, theta(x, x)), TypeError);
  // composition boundary mismatch
  CHECK_THROWS_AS(typecheck_shadow(sig, scomp({theta(x, y), theta(x, y)})),
                  TypeError);

  Signature noshadow = test_sig();
  noshadow.shadow_enabled = false;
  CHECK_THROWS_AS(typecheck_shadow(noshadow, sid(xy)), TypeError);
}

TEST_CASE("render/parse round trip") {
  Signature sig = test_sig();
  OneCell x = make_word(sig, {"X"});
  OneCell y = make_word(sig, {"Y"});

  CHECK(render(concat(x, y)) == "X(x)Y");
  CHECK(render(unit_cell("A")) == "U_A");
  CHECK(parse_word(sig, "X(x)Y") == concat(x, y));
  CHECK(parse_word(sig, "U_A") == unit_cell("A"));
  CHECK(parse_word(sig, "X ⊗ Y") == concat(x, y));

  std::vector<TC> terms = {
      gen2("f"),
      id2(concat(x, y)),
      coev2(0),
      eval2(0),
      gamma2(make_word(sig, {"P"}), make_word(sig, {"Q"})),
      vcomp({hcomp({coev2(0), id2(x)}), hcomp({id2(x), eval2(0)})}),
      hcomp({gen2("p"), vcomp({gen2("p"), id2(make_word(sig, {"Q"}))})}),
  };
  for (auto& t : terms) {
    std::string s = render(sig, t);
    CAPTURE(s);
    CHECK(eq(parse_2cell(sig, s), t));
  }

  std::vector<SC> sterms = {
      sid(concat(x, y)),
      theta(x, y),
      sh(gen2("p")),
      scomp({theta(x, y), theta(y, x)}),
      scomp({sh(vcomp({gen2("p"), id2(make_word(sig, {"Q"}))})), sid(
                 make_word(sig, {"Q"}))}),
  };
  for (auto& t : sterms) {
    std::string s = render(sig, t);
    CAPTURE(s);
    CHECK(eq(parse_shadow(sig, s), t));
  }

  CHECK_THROWS_AS(parse_2cell(sig, "coev[P]"), ParseError);  // no such pair
  CHECK_THROWS_AS(parse_2cell(sig, "f ;"), ParseError);
  CHECK_THROWS_AS(parse_2cell(sig, "nosuch"), ParseError);
  CHECK_THROWS_AS(parse_word(sig, "X(x)"), ParseError);
}

TEST_CASE("parser precedence") {
  Signature sig = test_sig();
  // ';' binds looser than '*'
  TC e = parse_2cell(sig, "p * id[Q] ; id[Q] * p");
  CHECK(e->k == TK::VComp);
  CHECK(e->kids.size() == 2);
  CHECK(e->kids[0]->k == TK::HComp);
  // parentheses override
  TC e2 = parse_2cell(sig, "(p ; id[Q]) * p");
  CHECK(e2->k == TK::HComp);
}
