#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/dsl.hpp"

using namespace bicat;

TEST_CASE("minimal signature document") {
  DslDocument doc = parse_document("0cell A; 1cell X : A -> A;");
  CHECK(doc.sig.zero_cells.size() == 1);
  CHECK(doc.sig.one_gens.size() == 1);
  CHECK(doc.sig.one_gens[0].name == "X");
  CHECK(doc.goals.empty());
}

TEST_CASE("full signature with comments and models") {
  std::string text =
      "# covering-space setup\n"
      "0cell b;\n"
      "0cell e;\n"
      "1cell Sf : b -> e;\n"
      "1cell fS : e -> b;  # the other leg\n"
      "2cell u : Sf (x) fS -> Sf (x) fS;\n"
      "dualpair (Sf, fS);\n"
      "shadow;\n"
      "symmetric b;\n"
      "model group G = \"z4.json\";\n"
      "let loop = id[Sf (x) fS] ; u\n";
  DslDocument doc = parse_document(text);
  CHECK(doc.sig.zero_cells.size() == 2);
  CHECK(doc.sig.one_gens.size() == 2);
  CHECK(doc.sig.two_gens.size() == 1);
  CHECK(doc.sig.dual_pairs.size() == 1);
  CHECK(doc.sig.shadow_enabled);
  CHECK(doc.sig.symmetric_endo_homs.count("b") == 1);
  REQUIRE(doc.models.size() == 1);
  CHECK(doc.models[0].kind == "group");
  CHECK(doc.models[0].file == "z4.json");
  REQUIRE(doc.lets.size() == 1);
  CHECK_NOTHROW(typecheck(doc.sig, find_let(doc, "loop")));
  CHECK_THROWS(find_let(doc, "missing"));
}

TEST_CASE("undeclared names are resolution errors with positions") {
  CHECK_THROWS_AS(parse_document("0cell A; 1cell X : A -> A;\ndualpair (X, Y);"),
                  ParseError);
  try {
    parse_document("0cell A;\n2cell f : X -> X;");
    FAIL("should have thrown");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col >= 10);
  }
  CHECK_THROWS_AS(parse_document("frobnicate;"), ParseError);
  CHECK_THROWS_AS(parse_document("0cell A"), ParseError);  // missing ';'
}

TEST_CASE("goal statements") {
  std::string text =
      "0cell A;\n"
      "1cell X : A -> A;\n"
      "2cell f : X -> X;\n"
      "\n"
      "search merge : id[X] ; f == f budget 500;\n"
      "prove unit_slice : f ; id[X] == f by {\n"
      "  vunit.r @ root { f = f }\n"
      "}\n";
  DslDocument doc = parse_document(text);
  REQUIRE(doc.goals.size() == 2);
  CHECK(doc.goals[0].is_search);
  CHECK(doc.goals[0].budget == 500);
  CHECK_FALSE(doc.goals[1].is_search);
  REQUIRE(doc.goals[1].step_lines.size() == 1);

  RunReport rep = run_document(doc);
  CHECK(rep.all_ok());
  // the signature task plus two goals
  REQUIRE(rep.tasks.size() == 3);
  CHECK(rep.tasks[1].kind == "search");
  CHECK(rep.tasks[2].kind == "prove");
}

TEST_CASE("failing goals and bad lets are reported, not thrown") {
  std::string text =
      "0cell A;\n"
      "1cell X : A -> A;\n"
      "2cell f : X -> X;\n"
      "2cell g : X (x) X -> X;\n"
      "let broken = f ; g\n"
      "search hopeless : f == id[X] budget 200;\n";
  RunReport rep = run_document(parse_document(text));
  CHECK_FALSE(rep.all_ok());
  REQUIRE(rep.tasks.size() == 3);
  CHECK(rep.tasks[0].ok);        // signature
  CHECK_FALSE(rep.tasks[1].ok);  // boundary mismatch in the let
  CHECK_FALSE(rep.tasks[2].ok);  // budget exhausted
}

TEST_CASE("print-parse round trips") {
  std::string text =
      "0cell A;\n"
      "1cell X : A -> A;\n"
      "2cell f : X -> X;\n"
      "shadow;\n"
      "let tf = sh(f)\n"
      "\n"
      "search merge : id[X] ; f == f budget 500;\n";
  DslDocument doc = parse_document(text);
  std::string printed = print_document(doc);
  // print o parse is the identity on canonically printed text
  CHECK(print_document(parse_document(printed)) == printed);
  // and the reparse runs identically
  CHECK(run_document(parse_document(printed)).all_ok());
}

TEST_CASE("alternate shadow spelling") {
  DslDocument doc = parse_document(
      "0cell A; 1cell X : A -> A; 2cell f : X -> X; shadow;\n"
      "let s = sh[f]\n");
  CHECK(find_let(doc, "s").is_shadow);
}

TEST_CASE("the whole corpus round-trips through the document format") {
  for (const Theorem& t : shipped_theorems()) {
    CAPTURE(t.name);
    std::string text = theorem_to_dsl(t);
    DslDocument doc = parse_document(text);
    REQUIRE(doc.goals.size() == 1);
    CHECK(doc.goals[0].name == t.name);
    CHECK(print_document(doc) == text);
    RunReport rep = run_document(doc);
    CHECK(rep.all_ok());
  }
}
