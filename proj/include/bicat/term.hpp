#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Typed term language for cells of a shadowed bicategory.
//
// The representation is strict: 1-cells are flat words of generators,
// horizontal/vertical composites are n-ary and flattened on construction,
// and units are empty words. Associators and unitors never appear.

namespace bicat {

struct TypeError : std::runtime_error {
  std::string kind;  // "BoundaryMismatch", "ShadowOnNonEndo", ...
  TypeError(std::string k, const std::string& msg)
      : std::runtime_error(msg), kind(std::move(k)) {}
};

using Word = std::vector<std::string>;

// A 1-cell: a word of composable generators with its 0-cell boundary.
// The empty word at A is the unit U_A (src == tgt == A).
// In rewrite patterns, word entries and 0-cells may be metavariables
// (names starting with '?'); concrete cells never contain them.
struct OneCell {
  std::string src, tgt;
  Word word;

  bool is_unit() const { return word.empty(); }
  bool operator==(const OneCell& o) const {
    return src == o.src && tgt == o.tgt && word == o.word;
  }
  bool operator!=(const OneCell& o) const { return !(*this == o); }
};

OneCell concat(const OneCell& a, const OneCell& b);  // throws on mismatch

struct OneGen {
  std::string name, src, tgt;
};
struct TwoGen {
  std::string name;
  OneCell src, tgt;
};
struct DualPairDecl {
  OneCell X, Y;  // X: A->B, Y: B->A
};

struct Diag {
  std::string code;      // e.g. "dual pair boundary mismatch"
  std::string location;  // offending name or rendering
  std::string detail;
};

struct Signature {
  std::vector<std::string> zero_cells;
  std::vector<OneGen> one_gens;
  std::vector<TwoGen> two_gens;
  std::vector<DualPairDecl> dual_pairs;
  std::set<std::string> symmetric_endo_homs;
  bool shadow_enabled = false;

  bool has_zero(const std::string& a) const;
  const OneGen* find1(const std::string& n) const;
  const TwoGen* find2(const std::string& n) const;
  int pair_by_x(const Word& x) const;  // -1 if absent
};

std::vector<Diag> validate_signature(const Signature& sig);

// Builds a 1-cell from generator names, computing and checking the boundary.
OneCell make_word(const Signature& sig, const Word& gens);
OneCell unit_cell(const std::string& a);

// ---------------------------------------------------------------------------
// 2-cells

enum class TK { Id, Gen, Coev, Eval, Gamma, VComp, HComp, MVar };

struct TwoCell;
using TC = std::shared_ptr<const TwoCell>;

struct TwoCell {
  TK k;
  OneCell cell;         // Id
  std::string name;     // Gen / MVar
  int pair = -1;        // Coev / Eval
  OneCell ga, gb;       // Gamma arguments
  std::vector<TC> kids; // VComp / HComp, flattened, size >= 2
};

TC id2(OneCell x);
TC gen2(std::string name);
TC coev2(int pair);
TC eval2(int pair);
TC gamma2(OneCell a, OneCell b);
TC mvar2(std::string name);
TC vcomp(std::vector<TC> kids);  // flattens nested VComp, collapses singletons
TC hcomp(std::vector<TC> kids);

bool eq(const TC& a, const TC& b);

// ---------------------------------------------------------------------------
// Shadow-level cells

enum class SK { Sh, Theta, SId, SComp, SMVar };

struct ShadowCell;
using SC = std::shared_ptr<const ShadowCell>;

struct ShadowCell {
  SK k;
  TC f;                 // Sh
  OneCell ta, tb;       // Theta arguments
  OneCell cell;         // SId
  std::string name;     // SMVar
  std::vector<SC> kids; // SComp, flattened, size >= 2
};

SC sh(TC f);
SC theta(OneCell a, OneCell b);
SC sid(OneCell x);
SC smvar(std::string name);
SC scomp(std::vector<SC> kids);

bool eq(const SC& a, const SC& b);

// ---------------------------------------------------------------------------
// Typing

struct Bound {
  OneCell src, tgt;
};

// Boundary of a 2-cell, strict-word form. Throws TypeError.
Bound typecheck_2cell(const Signature& sig, const TC& e);

// Boundary at the shadow level; both cells are endo 1-cells and their
// src 0-cell names the hom category the shadow was taken over.
Bound typecheck_shadow(const Signature& sig, const SC& e);

// ---------------------------------------------------------------------------
// Canonical text rendering and parsing.
//
//   words:    U_A | X(x)Y            (parser also accepts UTF-8 ⊗)
//   2-cells:  id[W] | f | coev[X] | eval[X] | gamma[W1; W2] | e * e | e ; e
//   shadow:   sh(e) | th[W1; W2] | sid[W] | s ; s
//
// ';' is diagrammatic vertical composition and binds loosest; '*' is
// horizontal composition. coev/eval refer to a declared dual pair by its
// X word. Metavariables render as ?name.

std::string render(const OneCell& w);
std::string render(const TC& e);
std::string render(const SC& e);

// Signature-aware renderings resolve coev/eval to their pair's X word so
// the output parses back; the plain forms print a raw pair index instead.
std::string render(const Signature& sig, const TC& e);
std::string render(const Signature& sig, const SC& e);

struct ParseError : std::runtime_error {
  int line, col;
  std::string expected;
  ParseError(int l, int c, const std::string& exp, const std::string& msg)
      : std::runtime_error(msg), line(l), col(c), expected(exp) {}
};

OneCell parse_word(const Signature& sig, const std::string& text);
TC parse_2cell(const Signature& sig, const std::string& text);
SC parse_shadow(const Signature& sig, const std::string& text);

}  // namespace bicat
