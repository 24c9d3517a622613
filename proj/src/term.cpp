#include "bicat/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bicat {

OneCell concat(const OneCell& a, const OneCell& b) {
  if (a.tgt != b.src)
    throw TypeError("BoundaryMismatch",
                    "cannot compose " + render(a) + " with " + render(b));
  OneCell r{a.src, b.tgt, a.word};
  r.word.insert(r.word.end(), b.word.begin(), b.word.end());
  return r;
}

bool Signature::has_zero(const std::string& a) const {
  return std::find(zero_cells.begin(), zero_cells.end(), a) != zero_cells.end();
}

const OneGen* Signature::find1(const std::string& n) const {
  for (auto& g : one_gens)
    if (g.name == n) return &g;
  return nullptr;
}

const TwoGen* Signature::find2(const std::string& n) const {
  for (auto& g : two_gens)
    if (g.name == n) return &g;
  return nullptr;
}

int Signature::pair_by_x(const Word& x) const {
  for (size_t i = 0; i < dual_pairs.size(); ++i)
    if (dual_pairs[i].X.word == x) return static_cast<int>(i);
  return -1;
}

static bool reserved_name(const std::string& n) {
  return n == "id" || n == "coev" || n == "eval" || n == "gamma" ||
         n == "sh" || n == "th" || n == "sid" || n.rfind("U_", 0) == 0 ||
         n.rfind("?", 0) == 0;
}

// Recomputes the boundary of a concrete 1-cell and checks it against the
// stored one.
static void check_cell(const Signature& sig, const OneCell& w,
                       std::vector<Diag>* diags, const std::string& where) {
  auto bad = [&](const std::string& code, const std::string& detail) {
    if (diags)
      diags->push_back({code, where, detail});
    else
      throw TypeError(code, where + ": " + detail);
  };
  if (w.word.empty()) {
    if (w.src != w.tgt) return bad("unit boundary", "unit word needs src == tgt");
    if (!sig.has_zero(w.src)) return bad("unknown 0-cell", w.src);
    return;
  }
  std::string cur;
  for (size_t i = 0; i < w.word.size(); ++i) {
    const OneGen* g = sig.find1(w.word[i]);
    if (!g) return bad("unknown 1-cell", w.word[i]);
    if (i == 0) {
      if (g->src != w.src) return bad("word boundary", "source 0-cell mismatch");
    } else if (g->src != cur) {
      return bad("word chain", "at position " + std::to_string(i));
    }
    cur = g->tgt;
  }
  if (cur != w.tgt) bad("word boundary", "target 0-cell mismatch");
}

std::vector<Diag> validate_signature(const Signature& sig) {
  std::vector<Diag> out;
  std::set<std::string> seen;
  for (auto& z : sig.zero_cells)
    if (!seen.insert("0:" + z).second)
      out.push_back({"duplicate generator", z, "0-cell"});
  for (auto& g : sig.one_gens) {
    if (!seen.insert("1:" + g.name).second)
      out.push_back({"duplicate generator", g.name, "1-cell"});
    if (reserved_name(g.name))
      out.push_back({"reserved name", g.name, "1-cell"});
    if (!sig.has_zero(g.src) || !sig.has_zero(g.tgt))
      out.push_back({"unknown 0-cell", g.name, "1-cell boundary"});
  }
  for (auto& g : sig.two_gens) {
    if (!seen.insert("2:" + g.name).second)
      out.push_back({"duplicate generator", g.name, "2-cell"});
    if (reserved_name(g.name))
      out.push_back({"reserved name", g.name, "2-cell"});
    check_cell(sig, g.src, &out, g.name);
    check_cell(sig, g.tgt, &out, g.name);
    if (g.src.src != g.tgt.src || g.src.tgt != g.tgt.tgt)
      out.push_back({"hom mismatch", g.name,
                     "source and target live in different hom categories"});
  }
  std::set<Word> pair_seen;
  for (auto& p : sig.dual_pairs) {
    check_cell(sig, p.X, &out, "dual pair");
    check_cell(sig, p.Y, &out, "dual pair");
    if (p.X.src != p.Y.tgt || p.X.tgt != p.Y.src)
      out.push_back({"dual pair boundary mismatch", render(p.X),
                     "need X: A->B, Y: B->A"});
    if (!pair_seen.insert(p.X.word).second)
      out.push_back({"duplicate dual pair", render(p.X), ""});
  }
  for (auto& a : sig.symmetric_endo_homs)
    if (!sig.has_zero(a)) out.push_back({"unknown 0-cell", a, "symmetric flag"});
  return out;
}

OneCell make_word(const Signature& sig, const Word& gens) {
  if (gens.empty())
    throw TypeError("EmptyWord", "make_word needs generators; use unit_cell");
  OneCell w;
  w.word = gens;
  const OneGen* g0 = sig.find1(gens[0]);
  if (!g0) throw TypeError("UnknownGenerator", gens[0]);
  w.src = g0->src;
  std::string cur = g0->tgt;
  for (size_t i = 1; i < gens.size(); ++i) {
    const OneGen* g = sig.find1(gens[i]);
    if (!g) throw TypeError("UnknownGenerator", gens[i]);
    if (g->src != cur)
      throw TypeError("BoundaryMismatch",
                      "word does not chain at " + gens[i]);
    cur = g->tgt;
  }
  w.tgt = cur;
  return w;
}

OneCell unit_cell(const std::string& a) { return OneCell{a, a, {}}; }

// ---------------------------------------------------------------------------
// constructors

TC id2(OneCell x) {
  auto n = std::make_shared<TwoCell>();
  n->k = TK::Id;
  n->cell = std::move(x);
  return n;
}
TC gen2(std::string name) {
  auto n = std::make_shared<TwoCell>();
  n->k = TK::Gen;
  n->name = std::move(name);
  return n;
}
TC coev2(int pair) {
  auto n = std::make_shared<TwoCell>();
  n->k = TK::Coev;
  n->pair = pair;
  return n;
}
TC eval2(int pair) {
  auto n = std::make_shared<TwoCell>();
  n->k = TK::Eval;
  n->pair = pair;
  return n;
}
TC gamma2(OneCell a, OneCell b) {
  auto n = std::make_shared<TwoCell>();
  n->k = TK::Gamma;
  n->ga = std::move(a);
  n->gb = std::move(b);
  return n;
}
TC mvar2(std::string name) {
  auto n = std::make_shared<TwoCell>();
  n->k = TK::MVar;
  n->name = std::move(name);
  return n;
}

static std::vector<TC> flatten(TK kind, std::vector<TC> kids) {
  std::vector<TC> out;
  for (auto& k : kids) {
    if (k->k == kind)
      out.insert(out.end(), k->kids.begin(), k->kids.end());
    else
      out.push_back(std::move(k));
  }
  return out;
}

TC vcomp(std::vector<TC> kids) {
  auto flat = flatten(TK::VComp, std::move(kids));
  if (flat.empty()) throw TypeError("EmptyComposite", "vcomp of nothing");
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<TwoCell>();
  n->k = TK::VComp;
  n->kids = std::move(flat);
  return n;
}

TC hcomp(std::vector<TC> kids) {
  auto flat = flatten(TK::HComp, std::move(kids));
  if (flat.empty()) throw TypeError("EmptyComposite", "hcomp of nothing");
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<TwoCell>();
  n->k = TK::HComp;
  n->kids = std::move(flat);
  return n;
}

bool eq(const TC& a, const TC& b) {
  if (a.get() == b.get()) return true;
  if (a->k != b->k) return false;
  switch (a->k) {
    case TK::Id: return a->cell == b->cell;
    case TK::Gen:
    case TK::MVar: return a->name == b->name;
    case TK::Coev:
    case TK::Eval: return a->pair == b->pair;
    case TK::Gamma: return a->ga == b->ga && a->gb == b->gb;
    case TK::VComp:
    case TK::HComp: {
      if (a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!eq(a->kids[i], b->kids[i])) return false;
      return true;
    }
  }
  return false;
}

SC sh(TC f) {
  auto n = std::make_shared<ShadowCell>();
  n->k = SK::Sh;
  n->f = std::move(f);
  return n;
}
SC theta(OneCell a, OneCell b) {
  auto n = std::make_shared<ShadowCell>();
  n->k = SK::Theta;
  n->ta = std::move(a);
  n->tb = std::move(b);
  return n;
}
SC sid(OneCell x) {
  auto n = std::make_shared<ShadowCell>();
  n->k = SK::SId;
  n->cell = std::move(x);
  return n;
}
SC smvar(std::string name) {
  auto n = std::make_shared<ShadowCell>();
  n->k = SK::SMVar;
  n->name = std::move(name);
  return n;
}
SC scomp(std::vector<SC> kids) {
  std::vector<SC> flat;
  for (auto& k : kids) {
    if (k->k == SK::SComp)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(std::move(k));
  }
  if (flat.empty()) throw TypeError("EmptyComposite", "scomp of nothing");
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<ShadowCell>();
  n->k = SK::SComp;
  n->kids = std::move(flat);
  return n;
}

bool eq(const SC& a, const SC& b) {
  if (a.get() == b.get()) return true;
  if (a->k != b->k) return false;
  switch (a->k) {
    case SK::Sh: return eq(a->f, b->f);
    case SK::Theta: return a->ta == b->ta && a->tb == b->tb;
    case SK::SId: return a->cell == b->cell;
    case SK::SMVar: return a->name == b->name;
    case SK::SComp: {
      if (a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!eq(a->kids[i], b->kids[i])) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// typing

static void require_concrete_cell(const Signature& sig, const OneCell& w) {
  check_cell(sig, w, nullptr, render(w));
}

Bound typecheck_2cell(const Signature& sig, const TC& e) {
  switch (e->k) {
    case TK::Id: {
      require_concrete_cell(sig, e->cell);
      return {e->cell, e->cell};
    }
    case TK::Gen: {
      const TwoGen* g = sig.find2(e->name);
      if (!g) throw TypeError("UnknownGenerator", e->name);
      return {g->src, g->tgt};
    }
    case TK::Coev: {
      if (e->pair < 0 || e->pair >= static_cast<int>(sig.dual_pairs.size()))
        throw TypeError("UnknownPair", "coev pair index");
      auto& p = sig.dual_pairs[e->pair];
      return {unit_cell(p.X.src), concat(p.X, p.Y)};
    }
    case TK::Eval: {
      if (e->pair < 0 || e->pair >= static_cast<int>(sig.dual_pairs.size()))
        throw TypeError("UnknownPair", "eval pair index");
      auto& p = sig.dual_pairs[e->pair];
      return {concat(p.Y, p.X), unit_cell(p.X.tgt)};
    }
    case TK::Gamma: {
      require_concrete_cell(sig, e->ga);
      require_concrete_cell(sig, e->gb);
      if (e->ga.src != e->ga.tgt || e->gb.src != e->gb.tgt ||
          e->ga.src != e->gb.src)
        throw TypeError("BoundaryMismatch", "gamma needs endo 1-cells at one 0-cell");
      if (!sig.symmetric_endo_homs.count(e->ga.src))
        throw TypeError("SymmetryUnavailable",
                        "0-cell " + e->ga.src + " is not flagged symmetric");
      return {concat(e->ga, e->gb), concat(e->gb, e->ga)};
    }
    case TK::VComp: {
      Bound b0 = typecheck_2cell(sig, e->kids[0]);
      OneCell cur = b0.tgt;
      for (size_t i = 1; i < e->kids.size(); ++i) {
        Bound bi = typecheck_2cell(sig, e->kids[i]);
        if (bi.src != cur)
          throw TypeError("BoundaryMismatch",
                          "vertical composite breaks at slice " +
                              std::to_string(i) + ": " + render(cur) +
                              " vs " + render(bi.src));
        cur = bi.tgt;
      }
      return {b0.src, cur};
    }
    case TK::HComp: {
      Bound acc = typecheck_2cell(sig, e->kids[0]);
      for (size_t i = 1; i < e->kids.size(); ++i) {
        Bound bi = typecheck_2cell(sig, e->kids[i]);
        if (acc.src.tgt != bi.src.src)
          throw TypeError("BoundaryMismatch",
                          "horizontal composite breaks at factor " +
                              std::to_string(i));
        acc = {concat(acc.src, bi.src), concat(acc.tgt, bi.tgt)};
      }
      return acc;
    }
    case TK::MVar:
      throw TypeError("Metavariable", "cannot typecheck pattern ?" + e->name);
  }
  throw TypeError("Internal", "unreachable");
}

Bound typecheck_shadow(const Signature& sig, const SC& e) {
  if (!sig.shadow_enabled)
    throw TypeError("ShadowDisabled", "signature has no shadow");
  switch (e->k) {
    case SK::Sh: {
      Bound b = typecheck_2cell(sig, e->f);
      if (b.src.src != b.src.tgt)
        throw TypeError("ShadowOnNonEndo",
                        "shadow of a 2-cell between non-endo 1-cells: " +
                            render(b.src));
      return b;
    }
    case SK::Theta: {
      require_concrete_cell(sig, e->ta);
      require_concrete_cell(sig, e->tb);
      if (e->ta.tgt != e->tb.src || e->tb.tgt != e->ta.src)
        throw TypeError("BoundaryMismatch", "theta needs X: A->B, Y: B->A");
      return {concat(e->ta, e->tb), concat(e->tb, e->ta)};
    }
    case SK::SId: {
      require_concrete_cell(sig, e->cell);
      if (e->cell.src != e->cell.tgt)
        throw TypeError("ShadowOnNonEndo", "sid of non-endo 1-cell");
      return {e->cell, e->cell};
    }
    case SK::SComp: {
      Bound b0 = typecheck_shadow(sig, e->kids[0]);
      OneCell cur = b0.tgt;
      for (size_t i = 1; i < e->kids.size(); ++i) {
        Bound bi = typecheck_shadow(sig, e->kids[i]);
        if (bi.src != cur)
          throw TypeError("BoundaryMismatch",
                          "shadow composite breaks at slice " +
                              std::to_string(i));
        cur = bi.tgt;
      }
      return {b0.src, cur};
    }
    case SK::SMVar:
      throw TypeError("Metavariable", "cannot typecheck pattern ?" + e->name);
  }
  throw TypeError("Internal", "unreachable");
}

// ---------------------------------------------------------------------------
// rendering

std::string render(const OneCell& w) {
  if (w.word.empty()) return "U_" + w.src;
  std::string s;
  for (size_t i = 0; i < w.word.size(); ++i) {
    if (i) s += "(x)";
    s += w.word[i];
  }
  return s;
}

// Without a signature, coev/eval render with their pair index ("coev#0");
// with one, they render by the pair's X word ("coev[X]"), which is what the
// parser accepts. Script and DSL output uses the latter.
static std::string render_tc(const TC& e, const Signature* sig) {
  switch (e->k) {
    case TK::Id: return "id[" + render(e->cell) + "]";
    case TK::Gen: return e->name;
    case TK::MVar: return "?" + e->name;
    case TK::Coev:
    case TK::Eval: {
      std::string kw = e->k == TK::Coev ? "coev" : "eval";
      if (sig && e->pair >= 0 &&
          e->pair < static_cast<int>(sig->dual_pairs.size()))
        return kw + "[" + render(sig->dual_pairs[e->pair].X) + "]";
      return kw + "#" + std::to_string(e->pair);
    }
    case TK::Gamma:
      return "gamma[" + render(e->ga) + "; " + render(e->gb) + "]";
    case TK::VComp: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " ; ";
        s += render_tc(e->kids[i], sig);
      }
      return s;
    }
    case TK::HComp: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " * ";
        auto& k = e->kids[i];
        if (k->k == TK::VComp)
          s += "(" + render_tc(k, sig) + ")";
        else
          s += render_tc(k, sig);
      }
      return s;
    }
  }
  return "?";
}

static std::string render_sc(const SC& e, const Signature* sig) {
  switch (e->k) {
    case SK::Sh: return "sh(" + render_tc(e->f, sig) + ")";
    case SK::Theta: return "th[" + render(e->ta) + "; " + render(e->tb) + "]";
    case SK::SId: return "sid[" + render(e->cell) + "]";
    case SK::SMVar: return "?" + e->name;
    case SK::SComp: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " ; ";
        s += render_sc(e->kids[i], sig);
      }
      return s;
    }
  }
  return "?";
}

std::string render(const TC& e) { return render_tc(e, nullptr); }
std::string render(const SC& e) { return render_sc(e, nullptr); }
std::string render(const Signature& sig, const TC& e) {
  return render_tc(e, &sig);
}
std::string render(const Signature& sig, const SC& e) {
  return render_sc(e, &sig);
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < text.size(); ++i, ++pos) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      advance(1);
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool lit(const std::string& s) {
    skip_ws();
    if (text.compare(pos, s.size(), s) == 0) {
      advance(s.size());
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (!lit(s)) throw ParseError(line, col, s, "expected '" + s + "'");
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) advance(1);
    if (start == pos)
      throw ParseError(line, col, "identifier", "expected an identifier");
    return text.substr(start, pos - start);
  }
  bool peek_kw(const std::string& kw) {
    skip_ws();
    if (text.compare(pos, kw.size(), kw) != 0) return false;
    size_t after = pos + kw.size();
    return after >= text.size() || !ident_char(text[after]);
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
};

struct ExprParser {
  const Signature& sig;
  Lexer lx;

  ExprParser(const Signature& s, const std::string& t) : sig(s), lx(t) {}

  [[noreturn]] void fail(const std::string& expected, const std::string& msg) {
    throw ParseError(lx.line, lx.col, expected, msg);
  }

  OneCell word() {
    std::string first = lx.ident();
    if (first.rfind("U_", 0) == 0) {
      std::string a = first.substr(2);
      if (!sig.has_zero(a)) fail("0-cell", "unknown 0-cell " + a);
      return unit_cell(a);
    }
    Word gens{first};
    while (true) {
      size_t save = lx.pos;
      int sl = lx.line, sc = lx.col;
      if (lx.lit("(x)") || lx.lit("\xE2\x8A\x97")) {
        gens.push_back(lx.ident());
      } else {
        lx.pos = save;
        lx.line = sl;
        lx.col = sc;
        break;
      }
    }
    return make_word(sig, gens);
  }

  OneCell bracket_word() {
    lx.expect("[");
    OneCell w = word();
    lx.expect("]");
    return w;
  }

  TC atom2() {
    char c = lx.peek();
    if (c == '(') {
      lx.expect("(");
      TC e = expr2();
      lx.expect(")");
      return e;
    }
    if (c == '?') {
      lx.expect("?");
      return mvar2(lx.ident());
    }
    if (lx.peek_kw("id")) {
      lx.ident();
      return id2(bracket_word());
    }
    if (lx.peek_kw("coev") || lx.peek_kw("eval")) {
      std::string kw = lx.ident();
      OneCell x = bracket_word();
      int p = sig.pair_by_x(x.word);
      if (p < 0) fail("dual pair", "no dual pair with X = " + render(x));
      return kw == "coev" ? coev2(p) : eval2(p);
    }
    if (lx.peek_kw("gamma")) {
      lx.ident();
      lx.expect("[");
      OneCell a = word();
      lx.expect(";");
      OneCell b = word();
      lx.expect("]");
      return gamma2(a, b);
    }
    std::string n = lx.ident();
    if (!sig.find2(n)) fail("2-cell", "unknown 2-cell generator " + n);
    return gen2(n);
  }

  TC hexpr() {
    std::vector<TC> fs{atom2()};
    while (lx.lit("*")) fs.push_back(atom2());
    return hcomp(std::move(fs));
  }

  TC expr2() {
    std::vector<TC> ss{hexpr()};
    while (lx.lit(";")) ss.push_back(hexpr());
    return vcomp(std::move(ss));
  }

  SC satom() {
    char c = lx.peek();
    if (c == '(') {
      lx.expect("(");
      SC e = sexpr();
      lx.expect(")");
      return e;
    }
    if (c == '?') {
      lx.expect("?");
      return smvar(lx.ident());
    }
    if (lx.peek_kw("sh")) {
      lx.ident();
      // sh(...) canonically; sh[...] accepted as an alternate spelling
      bool square = lx.lit("[");
      if (!square) lx.expect("(");
      TC f = expr2();
      lx.expect(square ? "]" : ")");
      return sh(f);
    }
    if (lx.peek_kw("th")) {
      lx.ident();
      lx.expect("[");
      OneCell a = word();
      lx.expect(";");
      OneCell b = word();
      lx.expect("]");
      return theta(a, b);
    }
    if (lx.peek_kw("sid")) {
      lx.ident();
      return sid(bracket_word());
    }
    fail("shadow expression", "expected sh(...), th[...], sid[...] or '('");
  }

  SC sexpr() {
    std::vector<SC> ss{satom()};
    while (lx.lit(";")) ss.push_back(satom());
    return scomp(std::move(ss));
  }

  void done() {
    if (!lx.at_end()) fail("end of input", "trailing characters");
  }
};

}  // namespace

OneCell parse_word(const Signature& sig, const std::string& text) {
  ExprParser p(sig, text);
  OneCell w = p.word();
  p.done();
  return w;
}

TC parse_2cell(const Signature& sig, const std::string& text) {
  ExprParser p(sig, text);
  TC e = p.expr2();
  p.done();
  return e;
}

SC parse_shadow(const Signature& sig, const std::string& text) {
  ExprParser p(sig, text);
  SC e = p.sexpr();
  p.done();
  return e;
}

}  // namespace bicat
