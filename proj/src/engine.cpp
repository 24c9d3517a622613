#include "bicat/engine.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace bicat {

Expr ex(TC t) {
  Expr e;
  e.is_shadow = false;
  e.t = std::move(t);
  return e;
}
Expr ex(SC s) {
  Expr e;
  e.is_shadow = true;
  e.s = std::move(s);
  return e;
}

bool eq(const Expr& a, const Expr& b) {
  if (a.is_shadow != b.is_shadow) return false;
  return a.is_shadow ? eq(a.s, b.s) : eq(a.t, b.t);
}

std::string render(const Expr& e) { return e.is_shadow ? render(e.s) : render(e.t); }

Bound typecheck(const Signature& sig, const Expr& e) {
  return e.is_shadow ? typecheck_shadow(sig, e.s) : typecheck_2cell(sig, e.t);
}

static int tsize(const TC& e) {
  int n = 1;
  if (e->k == TK::VComp || e->k == TK::HComp)
    for (auto& k : e->kids) n += tsize(k);
  return n;
}
static int ssize(const SC& e) {
  switch (e->k) {
    case SK::Sh: return 1 + tsize(e->f);
    case SK::SComp: {
      int n = 1;
      for (auto& k : e->kids) n += ssize(k);
      return n;
    }
    default: return 1;
  }
}
int tree_size(const Expr& e) { return e.is_shadow ? ssize(e.s) : tsize(e.t); }

// ---------------------------------------------------------------------------
// matching

using SubstList = std::vector<Subst>;

static bool is_var(const std::string& s) { return !s.empty() && s[0] == '?'; }

static bool bind_cell(Subst& s, const std::string& var, const OneCell& val) {
  auto it = s.cells.find(var);
  if (it == s.cells.end()) {
    s.cells.emplace(var, val);
    return true;
  }
  return it->second == val;
}

static std::vector<std::string> word_bounds(const Signature& sig,
                                            const OneCell& w) {
  std::vector<std::string> b{w.src};
  for (auto& g : w.word) {
    const OneGen* og = sig.find1(g);
    b.push_back(og ? og->tgt : "");
  }
  return b;
}

static SubstList match_cell(const Signature& sig, const OneCell& pat,
                            const OneCell& sub, SubstList in) {
  if (in.empty()) return in;
  SubstList out;
  if (pat.word.empty()) {
    if (!sub.word.empty()) return out;
    if (is_var(pat.src)) {
      std::string v = pat.src.substr(1);
      for (auto s : in)
        if (bind_cell(s, v, unit_cell(sub.src))) out.push_back(std::move(s));
    } else if (pat.src.empty() || pat.src == sub.src) {
      out = std::move(in);
    }
    return out;
  }
  auto bounds = word_bounds(sig, sub);
  const size_t n = sub.word.size();
  // recursive sequence match with word metavariables
  std::function<void(size_t, size_t, Subst)> rec = [&](size_t ip, size_t jp,
                                                       Subst s) {
    if (ip == pat.word.size()) {
      if (jp == n) out.push_back(std::move(s));
      return;
    }
    const std::string& item = pat.word[ip];
    if (!is_var(item)) {
      if (jp < n && sub.word[jp] == item) rec(ip + 1, jp + 1, std::move(s));
      return;
    }
    std::string v = item.substr(1);
    auto it = s.cells.find(v);
    if (it != s.cells.end()) {
      size_t len = it->second.word.size();
      if (jp + len <= n &&
          std::equal(it->second.word.begin(), it->second.word.end(),
                     sub.word.begin() + jp))
        rec(ip + 1, jp + len, std::move(s));
      return;
    }
    for (size_t len = 0; jp + len <= n; ++len) {
      Subst s2 = s;
      OneCell val{bounds[jp], bounds[jp + len],
                  Word(sub.word.begin() + jp, sub.word.begin() + jp + len)};
      if (bind_cell(s2, v, val)) rec(ip + 1, jp + len, std::move(s2));
    }
  };
  for (auto& s : in) rec(0, 0, s);
  return out;
}

static SubstList match_tc(const Signature& sig, const TC& pat, const TC& sub,
                          SubstList in);
static SubstList match_sc(const Signature& sig, const SC& pat, const SC& sub,
                          SubstList in);

// Matches a sequence of composite-pattern children against a flattened kid
// list, enumerating partitions into consecutive nonempty groups.
template <typename Cell, typename MatchOne, typename Wrap>
static void match_seq(const std::vector<Cell>& pats,
                      const std::vector<Cell>& subs, size_t ip, size_t jp,
                      SubstList cur, const MatchOne& match_one,
                      const Wrap& wrap, SubstList& out) {
  if (cur.empty()) return;
  if (ip == pats.size()) {
    if (jp == subs.size())
      out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  size_t remaining_pats = pats.size() - ip - 1;
  for (size_t len = 1; jp + len + remaining_pats <= subs.size(); ++len) {
    Cell grouped = wrap(subs, jp, jp + len - 1);
    SubstList next = match_one(pats[ip], grouped, cur);
    if (!next.empty())
      match_seq(pats, subs, ip + 1, jp + len, std::move(next), match_one, wrap,
                out);
  }
}

static TC wrap_tc(TK kind, const std::vector<TC>& kids, int lo, int hi) {
  if (lo == hi) return kids[lo];
  auto n = std::make_shared<TwoCell>();
  n->k = kind;
  n->kids.assign(kids.begin() + lo, kids.begin() + hi + 1);
  return n;
}
static SC wrap_sc(const std::vector<SC>& kids, int lo, int hi) {
  if (lo == hi) return kids[lo];
  auto n = std::make_shared<ShadowCell>();
  n->k = SK::SComp;
  n->kids.assign(kids.begin() + lo, kids.begin() + hi + 1);
  return n;
}

static SubstList match_tc(const Signature& sig, const TC& pat, const TC& sub,
                          SubstList in) {
  if (in.empty()) return in;
  if (pat->k == TK::MVar) {
    SubstList out;
    for (auto s : in) {
      auto it = s.terms.find(pat->name);
      if (it == s.terms.end()) {
        s.terms.emplace(pat->name, sub);
        out.push_back(std::move(s));
      } else if (eq(it->second, sub)) {
        out.push_back(std::move(s));
      }
    }
    return out;
  }
  switch (pat->k) {
    case TK::Id:
      if (sub->k != TK::Id) return {};
      return match_cell(sig, pat->cell, sub->cell, std::move(in));
    case TK::Gen:
      return (sub->k == TK::Gen && sub->name == pat->name) ? in : SubstList{};
    case TK::Coev:
      return (sub->k == TK::Coev && sub->pair == pat->pair) ? in : SubstList{};
    case TK::Eval:
      return (sub->k == TK::Eval && sub->pair == pat->pair) ? in : SubstList{};
    case TK::Gamma: {
      if (sub->k != TK::Gamma) return {};
      auto mid = match_cell(sig, pat->ga, sub->ga, std::move(in));
      return match_cell(sig, pat->gb, sub->gb, std::move(mid));
    }
    case TK::VComp:
    case TK::HComp: {
      if (sub->k != pat->k) return {};
      SubstList out;
      auto match_one = [&](const TC& p, const TC& grouped, SubstList cur) {
        return match_tc(sig, p, grouped, std::move(cur));
      };
      auto wrap = [&](const std::vector<TC>& kids, int lo, int hi) {
        return wrap_tc(sub->k, kids, lo, hi);
      };
      match_seq(pat->kids, sub->kids, 0, 0, std::move(in), match_one, wrap,
                out);
      return out;
    }
    default: return {};
  }
}

static SubstList match_sc(const Signature& sig, const SC& pat, const SC& sub,
                          SubstList in) {
  if (in.empty()) return in;
  if (pat->k == SK::SMVar) {
    SubstList out;
    for (auto s : in) {
      auto it = s.sterms.find(pat->name);
      if (it == s.sterms.end()) {
        s.sterms.emplace(pat->name, sub);
        out.push_back(std::move(s));
      } else if (eq(it->second, sub)) {
        out.push_back(std::move(s));
      }
    }
    return out;
  }
  switch (pat->k) {
    case SK::Sh:
      if (sub->k != SK::Sh) return {};
      return match_tc(sig, pat->f, sub->f, std::move(in));
    case SK::SId:
      if (sub->k != SK::SId) return {};
      return match_cell(sig, pat->cell, sub->cell, std::move(in));
    case SK::Theta: {
      if (sub->k != SK::Theta) return {};
      auto mid = match_cell(sig, pat->ta, sub->ta, std::move(in));
      return match_cell(sig, pat->tb, sub->tb, std::move(mid));
    }
    case SK::SComp: {
      if (sub->k != SK::SComp) return {};
      SubstList out;
      auto match_one = [&](const SC& p, const SC& grouped, SubstList cur) {
        return match_sc(sig, p, grouped, std::move(cur));
      };
      auto wrap = [&](const std::vector<SC>& kids, int lo, int hi) {
        return wrap_sc(kids, lo, hi);
      };
      match_seq(pat->kids, sub->kids, 0, 0, std::move(in), match_one, wrap,
                out);
      return out;
    }
    default: return {};
  }
}

static SubstList match_expr(const Signature& sig, const Expr& pat,
                            const Expr& sub) {
  if (pat.is_shadow != sub.is_shadow) return {};
  SubstList in{Subst{}};
  return pat.is_shadow ? match_sc(sig, pat.s, sub.s, std::move(in))
                       : match_tc(sig, pat.t, sub.t, std::move(in));
}

// ---------------------------------------------------------------------------
// instantiation

static OneCell inst_cell(const Signature& sig, const OneCell& pat,
                         const Subst& s) {
  if (pat.word.empty()) {
    if (is_var(pat.src)) {
      auto it = s.cells.find(pat.src.substr(1));
      if (it == s.cells.end())
        throw TypeError("Unbound", "metavariable " + pat.src);
      if (!it->second.word.empty())
        throw TypeError("Inconsistent", pat.src + " bound to non-unit");
      return it->second;
    }
    return pat;
  }
  std::vector<OneCell> pieces;
  for (auto& item : pat.word) {
    if (is_var(item)) {
      auto it = s.cells.find(item.substr(1));
      if (it == s.cells.end())
        throw TypeError("Unbound", "metavariable " + item);
      pieces.push_back(it->second);
    } else {
      const OneGen* g = sig.find1(item);
      if (!g) throw TypeError("UnknownGenerator", item);
      pieces.push_back(OneCell{g->src, g->tgt, {item}});
    }
  }
  OneCell acc = pieces[0];
  for (size_t i = 1; i < pieces.size(); ++i) acc = concat(acc, pieces[i]);
  return acc;
}

static TC inst_tc(const Signature& sig, const TC& pat, const Subst& s) {
  switch (pat->k) {
    case TK::MVar: {
      auto it = s.terms.find(pat->name);
      if (it == s.terms.end())
        throw TypeError("Unbound", "metavariable ?" + pat->name);
      return it->second;
    }
    case TK::Id: return id2(inst_cell(sig, pat->cell, s));
    case TK::Gamma:
      return gamma2(inst_cell(sig, pat->ga, s), inst_cell(sig, pat->gb, s));
    case TK::Gen:
    case TK::Coev:
    case TK::Eval: return pat;
    case TK::VComp:
    case TK::HComp: {
      std::vector<TC> kids;
      for (auto& k : pat->kids) kids.push_back(inst_tc(sig, k, s));
      return pat->k == TK::VComp ? vcomp(std::move(kids))
                                 : hcomp(std::move(kids));
    }
  }
  throw TypeError("Internal", "unreachable");
}

static SC inst_sc(const Signature& sig, const SC& pat, const Subst& s) {
  switch (pat->k) {
    case SK::SMVar: {
      auto it = s.sterms.find(pat->name);
      if (it == s.sterms.end())
        throw TypeError("Unbound", "metavariable ?" + pat->name);
      return it->second;
    }
    case SK::Sh: return sh(inst_tc(sig, pat->f, s));
    case SK::SId: return sid(inst_cell(sig, pat->cell, s));
    case SK::Theta:
      return theta(inst_cell(sig, pat->ta, s), inst_cell(sig, pat->tb, s));
    case SK::SComp: {
      std::vector<SC> kids;
      for (auto& k : pat->kids) kids.push_back(inst_sc(sig, k, s));
      return scomp(std::move(kids));
    }
  }
  throw TypeError("Internal", "unreachable");
}

static Expr inst_expr(const Signature& sig, const Expr& pat, const Subst& s) {
  return pat.is_shadow ? ex(inst_sc(sig, pat.s, s)) : ex(inst_tc(sig, pat.t, s));
}

// ---------------------------------------------------------------------------
// builtin rules

static void need_cell(Subst& s, const std::string& v, const OneCell& val) {
  auto it = s.cells.find(v);
  if (it == s.cells.end())
    s.cells.emplace(v, val);
  else if (!(it->second == val))
    throw TypeError("Inconsistent", "derived binding for " + v + " conflicts");
}

std::vector<Rule> builtin_rules(const Signature& sig) {
  std::vector<Rule> rules;
  auto wv = [](const std::string& v) { return OneCell{"", "", {"?" + v}}; };
  auto wv2 = [](const std::string& a, const std::string& b) {
    return OneCell{"", "", {"?" + a, "?" + b}};
  };
  auto uv = [](const std::string& a) {
    return OneCell{"?" + a, "?" + a, {}};
  };
  auto f_ = mvar2("f");
  auto g_ = mvar2("g");
  auto h_ = mvar2("h");
  auto k_ = mvar2("k");

  auto add = [&](std::string name, Expr l, Expr r,
                 std::function<void(const Signature&, Subst&)> complete = {},
                 bool derived = false) {
    rules.push_back(Rule{std::move(name), std::move(l), std::move(r), derived,
                         std::move(complete)});
  };

  // triangle identities per declared dual pair
  for (size_t i = 0; i < sig.dual_pairs.size(); ++i) {
    auto& p = sig.dual_pairs[i];
    int pi = static_cast<int>(i);
    add("tri1." + std::to_string(i),
        ex(vcomp({hcomp({coev2(pi), id2(p.X)}), hcomp({id2(p.X), eval2(pi)})})),
        ex(id2(p.X)));
    add("tri2." + std::to_string(i),
        ex(vcomp({hcomp({id2(p.Y), coev2(pi)}), hcomp({eval2(pi), id2(p.Y)})})),
        ex(id2(p.Y)));
  }

  // vertical and horizontal unit laws
  add("vunit.r", ex(vcomp({f_, id2(wv("W"))})), ex(f_),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("f");
        if (it != s.terms.end())
          need_cell(s, "W", typecheck_2cell(sg, it->second).tgt);
      });
  add("vunit.l", ex(vcomp({id2(wv("W")), f_})), ex(f_),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("f");
        if (it != s.terms.end())
          need_cell(s, "W", typecheck_2cell(sg, it->second).src);
      });
  add("hunit.r", ex(hcomp({f_, id2(uv("A"))})), ex(f_),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("f");
        if (it != s.terms.end())
          need_cell(s, "A",
                    unit_cell(typecheck_2cell(sg, it->second).src.tgt));
      });
  add("hunit.l", ex(hcomp({id2(uv("A")), f_})), ex(f_),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("f");
        if (it != s.terms.end())
          need_cell(s, "A",
                    unit_cell(typecheck_2cell(sg, it->second).src.src));
      });
  add("idmerge", ex(hcomp({id2(wv("X")), id2(wv("Y"))})),
      ex(id2(wv2("X", "Y"))));

  // interchange family, n-ary form: the binary interchange plus the four
  // ways of distributing a horizontal factor over a vertical composite
  add("xchg", ex(vcomp({hcomp({f_, g_}), hcomp({h_, k_})})),
      ex(hcomp({vcomp({f_, h_}), vcomp({g_, k_})})));
  add("dist.l1", ex(hcomp({vcomp({f_, g_}), h_})),
      ex(vcomp({hcomp({f_, h_}), hcomp({g_, id2(wv("D"))})})),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("h");
        if (it != s.terms.end())
          need_cell(s, "D", typecheck_2cell(sg, it->second).tgt);
      });
  add("dist.l2", ex(hcomp({vcomp({f_, g_}), h_})),
      ex(vcomp({hcomp({f_, id2(wv("C"))}), hcomp({g_, h_})})),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("h");
        if (it != s.terms.end())
          need_cell(s, "C", typecheck_2cell(sg, it->second).src);
      });
  add("dist.r1", ex(hcomp({h_, vcomp({f_, g_})})),
      ex(vcomp({hcomp({h_, f_}), hcomp({id2(wv("D")), g_})})),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("h");
        if (it != s.terms.end())
          need_cell(s, "D", typecheck_2cell(sg, it->second).tgt);
      });
  add("dist.r2", ex(hcomp({h_, vcomp({f_, g_})})),
      ex(vcomp({hcomp({id2(wv("C")), f_}), hcomp({h_, g_})})),
      [](const Signature& sg, Subst& s) {
        auto it = s.terms.find("h");
        if (it != s.terms.end())
          need_cell(s, "C", typecheck_2cell(sg, it->second).src);
      });

  // derived: sliding two 2-cells on disjoint strands past each other
  // (two interchange steps; certificate in the corpus)
  add("slide", ex(vcomp({hcomp({f_, id2(wv("B"))}), hcomp({id2(wv("A2")), g_})})),
      ex(vcomp({hcomp({id2(wv("A1")), g_}), hcomp({f_, id2(wv("B2"))})})),
      [](const Signature& sg, Subst& s) {
        auto itf = s.terms.find("f");
        auto itg = s.terms.find("g");
        if (itf != s.terms.end()) {
          Bound b = typecheck_2cell(sg, itf->second);
          need_cell(s, "A1", b.src);
          need_cell(s, "A2", b.tgt);
        }
        if (itg != s.terms.end()) {
          Bound b = typecheck_2cell(sg, itg->second);
          need_cell(s, "B", b.src);
          need_cell(s, "B2", b.tgt);
        }
      },
      true);

  if (sig.shadow_enabled) {
    auto u_ = smvar("u");
    // the shadow is a functor
    add("sh.comp", ex(sh(vcomp({f_, g_}))), ex(scomp({sh(f_), sh(g_)})));
    add("sh.id", ex(sh(id2(wv("X")))), ex(sid(wv("X"))));
    add("sunit.r", ex(scomp({u_, sid(wv("W"))})), ex(u_),
        [](const Signature& sg, Subst& s) {
          auto it = s.sterms.find("u");
          if (it != s.sterms.end())
            need_cell(s, "W", typecheck_shadow(sg, it->second).tgt);
        });
    add("sunit.l", ex(scomp({sid(wv("W")), u_})), ex(u_),
        [](const Signature& sg, Subst& s) {
          auto it = s.sterms.find("u");
          if (it != s.sterms.end())
            need_cell(s, "W", typecheck_shadow(sg, it->second).src);
        });
    // cyclic rotation: hexagon and unit axioms
    add("hex", ex(theta(wv("X"), wv2("Y", "Z"))),
        ex(scomp({theta(wv2("X", "Y"), wv("Z")),
                  theta(wv2("Z", "X"), wv("Y"))})));
    add("thunit.r", ex(theta(wv("X"), uv("A"))), ex(sid(wv("X"))),
        [](const Signature&, Subst& s) {
          auto it = s.cells.find("X");
          if (it != s.cells.end())
            need_cell(s, "A", unit_cell(it->second.tgt));
        });
    add("thunit.l", ex(theta(uv("A"), wv("X"))), ex(sid(wv("X"))),
        [](const Signature&, Subst& s) {
          auto it = s.cells.find("X");
          if (it != s.cells.end())
            need_cell(s, "A", unit_cell(it->second.src));
        });
    // naturality of the rotation in each 1-cell slot
    auto fill_fb = [](const Signature& sg, Subst& s, const char* sv,
                      const char* tv) {
      auto it = s.terms.find("f");
      if (it != s.terms.end()) {
        Bound b = typecheck_2cell(sg, it->second);
        need_cell(s, sv, b.src);
        need_cell(s, tv, b.tgt);
      }
    };
    add("thnat.l",
        ex(scomp({sh(hcomp({f_, id2(wv("Y"))})), theta(wv("Xt"), wv("Y"))})),
        ex(scomp({theta(wv("Xs"), wv("Y")), sh(hcomp({id2(wv("Y")), f_}))})),
        [fill_fb](const Signature& sg, Subst& s) { fill_fb(sg, s, "Xs", "Xt"); });
    add("thnat.r",
        ex(scomp({sh(hcomp({id2(wv("X")), f_})), theta(wv("X"), wv("Yt"))})),
        ex(scomp({theta(wv("X"), wv("Ys")), sh(hcomp({f_, id2(wv("X"))}))})),
        [fill_fb](const Signature& sg, Subst& s) { fill_fb(sg, s, "Ys", "Yt"); });
    // derived: the rotation is an involution (certificate in the corpus)
    add("thsq", ex(scomp({theta(wv("X"), wv("Y")), theta(wv("Y"), wv("X"))})),
        ex(sid(wv2("X", "Y"))), {}, true);
  }

  if (!sig.symmetric_endo_homs.empty()) {
    add("gsym", ex(vcomp({gamma2(wv("X"), wv("Y")), gamma2(wv("Y"), wv("X"))})),
        ex(id2(wv2("X", "Y"))));
    add("gunit.r", ex(gamma2(wv("X"), uv("A"))), ex(id2(wv("X"))),
        [](const Signature&, Subst& s) {
          auto it = s.cells.find("X");
          if (it != s.cells.end())
            need_cell(s, "A", unit_cell(it->second.src));
        });
    add("gunit.l", ex(gamma2(uv("A"), wv("X"))), ex(id2(wv("X"))),
        [](const Signature&, Subst& s) {
          auto it = s.cells.find("X");
          if (it != s.cells.end())
            need_cell(s, "A", unit_cell(it->second.src));
        });
    add("gnat", ex(vcomp({hcomp({f_, g_}), gamma2(wv("Xt"), wv("Yt"))})),
        ex(vcomp({gamma2(wv("Xs"), wv("Ys")), hcomp({g_, f_})})),
        [](const Signature& sg, Subst& s) {
          auto itf = s.terms.find("f");
          if (itf != s.terms.end()) {
            Bound b = typecheck_2cell(sg, itf->second);
            need_cell(s, "Xs", b.src);
            need_cell(s, "Xt", b.tgt);
          }
          auto itg = s.terms.find("g");
          if (itg != s.terms.end()) {
            Bound b = typecheck_2cell(sg, itg->second);
            need_cell(s, "Ys", b.src);
            need_cell(s, "Yt", b.tgt);
          }
        });
  }
  return rules;
}

const Rule* find_rule(const std::vector<Rule>& rules, const std::string& name) {
  for (auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------
// positions

static Expr piece_tc(const TC& e, const int* path, size_t n, int lo, int hi) {
  if (n == 0) {
    if (lo < 0) return ex(e);
    if ((e->k != TK::VComp && e->k != TK::HComp) || lo > hi || lo < 0 ||
        hi >= static_cast<int>(e->kids.size()))
      throw TypeError("BadPosition", "span does not address a composite");
    return ex(wrap_tc(e->k, e->kids, lo, hi));
  }
  if ((e->k != TK::VComp && e->k != TK::HComp) || path[0] < 0 ||
      path[0] >= static_cast<int>(e->kids.size()))
    throw TypeError("BadPosition", "path leaves the expression");
  return piece_tc(e->kids[path[0]], path + 1, n - 1, lo, hi);
}

static Expr piece_sc(const SC& e, const int* path, size_t n, int lo, int hi) {
  if (n == 0) {
    if (lo < 0) return ex(e);
    if (e->k != SK::SComp || lo > hi || lo < 0 ||
        hi >= static_cast<int>(e->kids.size()))
      throw TypeError("BadPosition", "span does not address a composite");
    return ex(wrap_sc(e->kids, lo, hi));
  }
  if (e->k == SK::Sh) {
    if (path[0] != 0) throw TypeError("BadPosition", "sh has one child");
    return piece_tc(e->f, path + 1, n - 1, lo, hi);
  }
  if (e->k != SK::SComp || path[0] < 0 ||
      path[0] >= static_cast<int>(e->kids.size()))
    throw TypeError("BadPosition", "path leaves the expression");
  return piece_sc(e->kids[path[0]], path + 1, n - 1, lo, hi);
}

Expr piece_at(const Expr& e, const Pos& pos) {
  return e.is_shadow
             ? piece_sc(e.s, pos.path.data(), pos.path.size(), pos.lo, pos.hi)
             : piece_tc(e.t, pos.path.data(), pos.path.size(), pos.lo, pos.hi);
}

static TC replace_tc(const TC& e, const int* path, size_t n, int lo, int hi,
                     const Expr& repl) {
  if (n == 0 && lo < 0) {
    if (repl.is_shadow) throw TypeError("BadPosition", "level mismatch");
    return repl.t;
  }
  if (e->k != TK::VComp && e->k != TK::HComp)
    throw TypeError("BadPosition", "path leaves the expression");
  std::vector<TC> kids = e->kids;
  if (n == 0) {
    if (repl.is_shadow) throw TypeError("BadPosition", "level mismatch");
    if (lo > hi || lo < 0 || hi >= static_cast<int>(kids.size()))
      throw TypeError("BadPosition", "bad span");
    kids.erase(kids.begin() + lo, kids.begin() + hi + 1);
    kids.insert(kids.begin() + lo, repl.t);
  } else {
    if (path[0] < 0 || path[0] >= static_cast<int>(kids.size()))
      throw TypeError("BadPosition", "path leaves the expression");
    kids[path[0]] = replace_tc(kids[path[0]], path + 1, n - 1, lo, hi, repl);
  }
  return e->k == TK::VComp ? vcomp(std::move(kids)) : hcomp(std::move(kids));
}

static SC replace_sc(const SC& e, const int* path, size_t n, int lo, int hi,
                     const Expr& repl) {
  if (n == 0 && lo < 0) {
    if (!repl.is_shadow) throw TypeError("BadPosition", "level mismatch");
    return repl.s;
  }
  if (e->k == SK::Sh) {
    if (n == 0 || path[0] != 0)
      throw TypeError("BadPosition", "sh has one child");
    return sh(replace_tc(e->f, path + 1, n - 1, lo, hi, repl));
  }
  if (e->k != SK::SComp)
    throw TypeError("BadPosition", "path leaves the expression");
  std::vector<SC> kids = e->kids;
  if (n == 0) {
    if (!repl.is_shadow) throw TypeError("BadPosition", "level mismatch");
    if (lo > hi || lo < 0 || hi >= static_cast<int>(kids.size()))
      throw TypeError("BadPosition", "bad span");
    kids.erase(kids.begin() + lo, kids.begin() + hi + 1);
    kids.insert(kids.begin() + lo, repl.s);
  } else {
    if (path[0] < 0 || path[0] >= static_cast<int>(kids.size()))
      throw TypeError("BadPosition", "path leaves the expression");
    kids[path[0]] = replace_sc(kids[path[0]], path + 1, n - 1, lo, hi, repl);
  }
  return scomp(std::move(kids));
}

Expr replace_at(const Expr& e, const Pos& pos, const Expr& repl) {
  return e.is_shadow ? ex(replace_sc(e.s, pos.path.data(), pos.path.size(),
                                     pos.lo, pos.hi, repl))
                     : ex(replace_tc(e.t, pos.path.data(), pos.path.size(),
                                     pos.lo, pos.hi, repl));
}

// ---------------------------------------------------------------------------
// step application and script verification

Expr apply_step(const Signature& sig, const std::vector<Rule>& rules,
                const Expr& e, const Step& st, int index) {
  const Rule* rule = find_rule(rules, st.rule);
  if (!rule) throw StepMismatch(index, "unknown rule " + st.rule);
  const Expr& from = st.reverse ? rule->rhs : rule->lhs;
  const Expr& to = st.reverse ? rule->lhs : rule->rhs;
  Subst subst = st.subst;
  Expr piece = piece_at(e, st.pos);
  try {
    if (rule->complete) rule->complete(sig, subst);
    Expr inst_from = inst_expr(sig, from, subst);
    if (!eq(inst_from, piece))
      throw StepMismatch(index, "rule " + st.rule + " instance " +
                                    render(inst_from) +
                                    " does not match subterm " + render(piece));
    Expr inst_to = inst_expr(sig, to, subst);
    Bound bf = typecheck(sig, piece);
    Bound bt = typecheck(sig, inst_to);
    if (bf.src != bt.src || bf.tgt != bt.tgt)
      throw StepMismatch(index, "rule " + st.rule + " breaks boundaries");
    return replace_at(e, st.pos, inst_to);
  } catch (const TypeError& te) {
    throw StepMismatch(index, std::string("rule ") + st.rule + ": " + te.what());
  }
}

ProofScript compress_script(const Signature& sig,
                            const std::vector<Rule>& rules,
                            const ProofScript& script) {
  ProofScript out;
  out.lhs = script.lhs;
  out.rhs = script.rhs;
  std::vector<std::string> keys{render(script.lhs)};
  Expr cur = script.lhs;
  for (size_t i = 0; i < script.steps.size(); ++i) {
    cur = apply_step(sig, rules, cur, script.steps[i], static_cast<int>(i));
    std::string key = render(cur);
    auto hit = std::find(keys.begin(), keys.end(), key);
    if (hit != keys.end()) {
      size_t keep = static_cast<size_t>(hit - keys.begin());
      keys.resize(keep + 1);
      out.steps.resize(keep);
    } else {
      keys.push_back(key);
      out.steps.push_back(script.steps[i]);
    }
  }
  return out;
}

Certificate verify_script(const Signature& sig, const std::vector<Rule>& rules,
                          const ProofScript& script) {
  Bound bl = typecheck(sig, script.lhs);
  Bound br = typecheck(sig, script.rhs);
  if (bl.src != br.src || bl.tgt != br.tgt)
    throw TypeError("BoundaryMismatch", "goal sides have different boundaries");
  Expr cur = script.lhs;
  for (size_t i = 0; i < script.steps.size(); ++i)
    cur = apply_step(sig, rules, cur, script.steps[i], static_cast<int>(i));
  if (!eq(cur, script.rhs))
    throw StepMismatch(static_cast<int>(script.steps.size()),
                       "final expression " + render(cur) +
                           " does not equal the goal right-hand side");
  Certificate c;
  c.verdict = Verdict::Proved;
  c.script = script;
  return c;
}

// ---------------------------------------------------------------------------
// position enumeration

struct PosRec {
  Pos pos;
  Expr piece;
};

static void enum_tc(const TC& e, std::vector<int>& path,
                    std::vector<PosRec>& out) {
  Pos whole;
  whole.path = path;
  out.push_back({whole, ex(e)});
  if (e->k == TK::VComp || e->k == TK::HComp) {
    int n = static_cast<int>(e->kids.size());
    for (int lo = 0; lo < n; ++lo)
      for (int hi = lo; hi < n; ++hi) {
        if (lo == 0 && hi == n - 1) continue;
        if (lo == hi) continue;  // single kids are visited as child nodes
        Pos p;
        p.path = path;
        p.lo = lo;
        p.hi = hi;
        out.push_back({p, ex(wrap_tc(e->k, e->kids, lo, hi))});
      }
    for (int i = 0; i < n; ++i) {
      path.push_back(i);
      enum_tc(e->kids[i], path, out);
      path.pop_back();
    }
  }
}

static void enum_sc(const SC& e, std::vector<int>& path,
                    std::vector<PosRec>& out) {
  Pos whole;
  whole.path = path;
  out.push_back({whole, ex(e)});
  if (e->k == SK::SComp) {
    int n = static_cast<int>(e->kids.size());
    for (int lo = 0; lo < n; ++lo)
      for (int hi = lo; hi < n; ++hi) {
        if (lo == 0 && hi == n - 1) continue;
        if (lo == hi) continue;
        Pos p;
        p.path = path;
        p.lo = lo;
        p.hi = hi;
        out.push_back({p, ex(wrap_sc(e->kids, lo, hi))});
      }
    for (int i = 0; i < n; ++i) {
      path.push_back(i);
      enum_sc(e->kids[i], path, out);
      path.pop_back();
    }
  } else if (e->k == SK::Sh) {
    path.push_back(0);
    enum_tc(e->f, path, out);
    path.pop_back();
  }
}

static std::vector<PosRec> enum_positions(const Expr& e) {
  std::vector<PosRec> out;
  std::vector<int> path;
  if (e.is_shadow)
    enum_sc(e.s, path, out);
  else
    enum_tc(e.t, path, out);
  return out;
}

// ---------------------------------------------------------------------------
// normalization

static const char* kNormalizeRules[] = {
    "vunit.r", "vunit.l", "hunit.r",  "hunit.l",  "idmerge", "sh.id",
    "sh.comp", "sunit.r", "sunit.l",  "thunit.r", "thunit.l", "gunit.r",
    "gunit.l"};

static bool is_oriented(const std::string& name) {
  for (auto* n : kNormalizeRules)
    if (name == n) return true;
  return false;
}

struct NormCtx {
  const Signature& sig;
  std::vector<const Rule*> oriented;
};

static NormCtx make_norm_ctx(const Signature& sig,
                             const std::vector<Rule>& rules) {
  NormCtx ctx{sig, {}};
  for (auto* name : kNormalizeRules)
    if (const Rule* r = find_rule(rules, name)) ctx.oriented.push_back(r);
  return ctx;
}

static bool normalize_once(const NormCtx& ctx, const Expr& e, Step* step,
                           Expr* out) {
  auto positions = enum_positions(e);
  for (auto& pr : positions) {
    for (const Rule* r : ctx.oriented) {
      SubstList ms = match_expr(ctx.sig, r->lhs, pr.piece);
      for (auto& m : ms) {
        try {
          Subst s = m;
          if (r->complete) r->complete(ctx.sig, s);
          Expr inst_to = inst_expr(ctx.sig, r->rhs, s);
          Bound bf = typecheck(ctx.sig, pr.piece);
          Bound bt = typecheck(ctx.sig, inst_to);
          if (bf.src != bt.src || bf.tgt != bt.tgt) continue;
          *out = replace_at(e, pr.pos, inst_to);
          step->rule = r->name;
          step->reverse = false;
          step->pos = pr.pos;
          step->subst = s;
          return true;
        } catch (const TypeError&) {
          continue;
        }
      }
    }
  }
  return false;
}

static Expr normalize_with(const NormCtx& ctx, Expr e,
                           std::vector<Step>* trace) {
  Step st;
  Expr next;
  // bounded only by termination of the oriented rules, each of which
  // strictly reduces (shadow-of-composite count, node count)
  while (normalize_once(ctx, e, &st, &next)) {
    if (trace) trace->push_back(st);
    e = next;
  }
  return e;
}

Expr normalize(const Signature& sig, const Expr& e, std::vector<Step>* trace) {
  auto rules = builtin_rules(sig);
  return normalize_with(make_norm_ctx(sig, rules), e, trace);
}

// Fully splits multi-generator identity 2-cells into single-generator
// factors, recording the splits as reverse idmerge steps. Search applies
// rules to the refined form so interchange moves can slice between factors
// that eager merging would otherwise fuse; normalization merges them back.
static Expr refine_ids(const Signature& sig, Expr e,
                       std::vector<Step>* steps) {
  for (;;) {
    bool changed = false;
    for (auto& pr : enum_positions(e)) {
      if (pr.piece.is_shadow || pr.pos.lo >= 0) continue;
      const TC& t = pr.piece.t;
      if (t->k != TK::Id || t->cell.word.size() < 2) continue;
      const OneGen* g = sig.find1(t->cell.word[0]);
      if (!g) break;
      OneCell head{g->src, g->tgt, {t->cell.word[0]}};
      OneCell rest{g->tgt, t->cell.tgt,
                   Word(t->cell.word.begin() + 1, t->cell.word.end())};
      Step st;
      st.rule = "idmerge";
      st.reverse = true;
      st.pos = pr.pos;
      st.subst.cells["X"] = head;
      st.subst.cells["Y"] = rest;
      if (steps) steps->push_back(st);
      e = replace_at(e, pr.pos, ex(hcomp({id2(head), id2(rest)})));
      changed = true;
      break;
    }
    if (!changed) return e;
  }
}

// Quick root-kind compatibility check before running the full matcher.
static bool kind_may_match(const Expr& pat, const Expr& sub) {
  if (pat.is_shadow != sub.is_shadow) return false;
  if (pat.is_shadow)
    return pat.s->k == SK::SMVar || pat.s->k == sub.s->k;
  return pat.t->k == TK::MVar || pat.t->k == sub.t->k;
}

// ---------------------------------------------------------------------------
// bidirectional search

namespace {

struct SearchNode {
  Expr e;
  int parent = -1;
  std::vector<Step> edge;  // steps transforming parent into this node
  int depth = 0;
};

struct Side {
  std::vector<SearchNode> nodes;
  std::unordered_map<std::string, int> seen;
  // best-first by term size (FIFO within a size class); meets tend to
  // happen at small representatives, so small terms expand first
  std::priority_queue<std::tuple<int, long, int>,
                      std::vector<std::tuple<int, long, int>>,
                      std::greater<>>
      frontier;
  long seq = 0;
  std::vector<Step> root_trace;  // normalization steps from the raw endpoint

  void push(int idx, const Expr& e) {
    frontier.emplace(tree_size(e), seq++, idx);
  }
};

// Finds a step applying `fwd`'s rule in the opposite direction that turns
// `from` into exactly `to`. Recorded positions cannot simply be reused in
// reverse: replacement re-flattens composites, which shifts child indices.
bool invert_one(const Signature& sig, const std::vector<Rule>& rules,
                const Expr& from, const Expr& to, const Step& fwd, Step* out) {
  const Rule* rule = find_rule(rules, fwd.rule);
  if (!rule) return false;
  bool rev = !fwd.reverse;
  const Expr& pat = rev ? rule->rhs : rule->lhs;
  const Expr& rep = rev ? rule->lhs : rule->rhs;
  for (auto& pr : enum_positions(from)) {
    if (pat.is_shadow != pr.piece.is_shadow) continue;
    for (auto& m : match_expr(sig, pat, pr.piece)) {
      try {
        Subst s = m;
        if (rule->complete) rule->complete(sig, s);
        Expr inst_rep = inst_expr(sig, rep, s);
        Expr cand = replace_at(from, pr.pos, inst_rep);
        if (!eq(cand, to)) continue;
        out->rule = fwd.rule;
        out->reverse = rev;
        out->pos = pr.pos;
        out->subst = s;
        return true;
      } catch (const TypeError&) {
        continue;
      }
    }
  }
  return false;
}

// Inverts a replayable forward sequence start -> ... -> end into steps
// rewriting end back to start.
std::vector<Step> invert_sequence(const Signature& sig,
                                  const std::vector<Rule>& rules,
                                  const Expr& start,
                                  const std::vector<Step>& steps) {
  std::vector<Expr> exprs{start};
  for (size_t i = 0; i < steps.size(); ++i)
    exprs.push_back(
        apply_step(sig, rules, exprs.back(), steps[i], static_cast<int>(i)));
  std::vector<Step> out;
  for (size_t i = steps.size(); i-- > 0;) {
    Step inv;
    if (!invert_one(sig, rules, exprs[i + 1], exprs[i], steps[i], &inv))
      throw StepMismatch(static_cast<int>(i),
                         "could not invert step " + steps[i].rule);
    out.push_back(inv);
  }
  return out;
}

}  // namespace

std::vector<Step> invert_steps(const Signature& sig,
                               const std::vector<Rule>& rules,
                               const Expr& start,
                               const std::vector<Step>& steps) {
  return invert_sequence(sig, rules, start, steps);
}

std::vector<std::pair<Step, Expr>> applicable_steps(
    const Signature& sig, const std::vector<Rule>& rules, const Expr& e,
    bool include_derived) {
  std::vector<std::pair<Step, Expr>> out;
  for (auto& pr : enum_positions(e)) {
    for (auto& rule : rules) {
      if (rule.derived && !include_derived) continue;
      // oriented rules only fire left-to-right; everything else both ways
      int dirs = is_oriented(rule.name) ? 1 : 2;
      for (int dir = 0; dir < dirs; ++dir) {
        const Expr& from = dir ? rule.rhs : rule.lhs;
        const Expr& to = dir ? rule.lhs : rule.rhs;
        if (!kind_may_match(from, pr.piece)) continue;
        for (auto& m : match_expr(sig, from, pr.piece)) {
          try {
            Subst s = m;
            if (rule.complete) rule.complete(sig, s);
            Expr inst_to = inst_expr(sig, to, s);
            Bound bf = typecheck(sig, pr.piece);
            Bound bt = typecheck(sig, inst_to);
            if (bf.src != bt.src || bf.tgt != bt.tgt) continue;
            Step st;
            st.rule = rule.name;
            st.reverse = dir == 1;
            st.pos = pr.pos;
            st.subst = s;
            Expr cand = replace_at(e, pr.pos, inst_to);
            out.emplace_back(std::move(st), std::move(cand));
          } catch (const TypeError&) {
            continue;
          }
        }
      }
    }
  }
  return out;
}

Certificate search_equal(const Signature& sig, const std::vector<Rule>& rules,
                         const Expr& lhs, const Expr& rhs,
                         SearchBudget budget) {
  Certificate cert;
  Bound bl = typecheck(sig, lhs);
  Bound br = typecheck(sig, rhs);
  if (bl.src != br.src || bl.tgt != br.tgt) {
    cert.message = "goal sides have different boundaries";
    return cert;
  }
  NormCtx norm = make_norm_ctx(sig, rules);

  Side sides[2];
  const Expr* endpoints[2] = {&lhs, &rhs};
  for (int i = 0; i < 2; ++i) {
    Expr root = normalize_with(norm, *endpoints[i], &sides[i].root_trace);
    sides[i].nodes.push_back({root, -1, {}, 0});
    sides[i].seen.emplace(render(root), 0);
    sides[i].push(0, root);
  }

  int size_cap =
      std::max(tree_size(lhs), tree_size(rhs)) + budget.size_slack;

  auto build_script = [&](int li, int ri) {
    ProofScript script;
    script.lhs = lhs;
    script.rhs = rhs;
    auto& steps = script.steps;
    steps.insert(steps.end(), sides[0].root_trace.begin(),
                 sides[0].root_trace.end());
    std::vector<int> chain;
    for (int n = li; n != -1; n = sides[0].nodes[n].parent) chain.push_back(n);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      auto& e = sides[0].nodes[*it].edge;
      steps.insert(steps.end(), e.begin(), e.end());
    }
    // the rhs-side path raw_rhs -> ... -> meet, replayed forward then inverted
    std::vector<Step> fwd = sides[1].root_trace;
    std::vector<int> rchain;
    for (int n = ri; n != -1; n = sides[1].nodes[n].parent) rchain.push_back(n);
    for (auto it = rchain.rbegin(); it != rchain.rend(); ++it) {
      auto& e = sides[1].nodes[*it].edge;
      fwd.insert(fwd.end(), e.begin(), e.end());
    }
    auto back = invert_sequence(sig, rules, rhs, fwd);
    steps.insert(steps.end(), back.begin(), back.end());
    return script;
  };

  // trivial meet
  {
    std::string r0 = render(sides[0].nodes[0].e);
    if (sides[1].seen.count(r0)) {
      cert.verdict = Verdict::Proved;
      cert.script = build_script(0, 0);
      return cert;
    }
  }

  long nodes_made = 2;
  while (!sides[0].frontier.empty() || !sides[1].frontier.empty()) {
    int si;
    if (sides[0].frontier.empty())
      si = 1;
    else if (sides[1].frontier.empty())
      si = 0;
    else
      si = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
    Side& me = sides[si];
    Side& other = sides[1 - si];

    int cur = std::get<2>(me.frontier.top());
    me.frontier.pop();
    int depth = me.nodes[cur].depth;
    if (depth >= budget.max_depth) continue;

    // expand both the normalized node and its id-refined form: merged
    // identity factors are what rules with id[?W] patterns match, split
    // ones are what interchange partitions slice between
    std::vector<std::pair<Expr, std::vector<Step>>> variants;
    variants.emplace_back(me.nodes[cur].e, std::vector<Step>{});
    {
      std::vector<Step> ref_steps;
      Expr refined = refine_ids(sig, me.nodes[cur].e, &ref_steps);
      if (!ref_steps.empty())
        variants.emplace_back(std::move(refined), std::move(ref_steps));
    }
    for (auto& [e, ref_steps] : variants) {
    auto positions = enum_positions(e);
    for (auto& pr : positions) {
      for (auto& rule : rules) {
        // oriented rules are handled by normalization (and id refinement);
        // derived shortcuts join in only when explicitly allowed
        if (is_oriented(rule.name)) continue;
        if (rule.derived && !budget.allow_derived) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const Expr& from = dir ? rule.rhs : rule.lhs;
          const Expr& to = dir ? rule.lhs : rule.rhs;
          if (!kind_may_match(from, pr.piece)) continue;
          SubstList ms = match_expr(sig, from, pr.piece);
          for (auto& m : ms) {
            Expr candidate;
            Step st;
            std::vector<Step> tail;
            try {
              Subst s = m;
              if (rule.complete) rule.complete(sig, s);
              Expr inst_to = inst_expr(sig, to, s);
              Bound bf = typecheck(sig, pr.piece);
              Bound bt = typecheck(sig, inst_to);
              if (bf.src != bt.src || bf.tgt != bt.tgt) continue;
              st.rule = rule.name;
              st.reverse = dir == 1;
              st.pos = pr.pos;
              st.subst = s;
              candidate = replace_at(e, pr.pos, inst_to);
            } catch (const TypeError&) {
              continue;
            }
            candidate = normalize_with(norm, candidate, &tail);
            if (tree_size(candidate) > size_cap) continue;
            std::string key = render(candidate);
            if (me.seen.count(key)) continue;
            std::vector<Step> edge = ref_steps;
            edge.push_back(st);
            edge.insert(edge.end(), tail.begin(), tail.end());
            me.nodes.push_back(
                {candidate, cur, std::move(edge), depth + 1});
            int idx = static_cast<int>(me.nodes.size()) - 1;
            me.seen.emplace(key, idx);
            me.push(idx, candidate);
            ++nodes_made;
            auto hit = other.seen.find(key);
            if (hit != other.seen.end()) {
              cert.verdict = Verdict::Proved;
              cert.script = si == 0 ? build_script(idx, hit->second)
                                    : build_script(hit->second, idx);
              return cert;
            }
            if (nodes_made >= budget.max_nodes) {
              cert.message = "node budget exhausted";
              return cert;
            }
          }
        }
      }
    }
    }
  }
  cert.message = "search space exhausted without a meet (" +
                 std::to_string(nodes_made) + " nodes)";
  return cert;
}

// ---------------------------------------------------------------------------
// script text format

static std::string render_pos(const Pos& p) {
  std::string s;
  if (p.path.empty())
    s = "root";
  else
    for (size_t i = 0; i < p.path.size(); ++i)
      s += (i ? "." : "") + std::to_string(p.path[i]);
  if (p.lo >= 0) s += ":" + std::to_string(p.lo) + ".." + std::to_string(p.hi);
  return s;
}

std::string render_step(const Signature& sig, const std::vector<Rule>&,
                        const Step& st) {
  std::string s = st.rule;
  if (st.reverse) s += "~";
  s += " @ " + render_pos(st.pos);
  std::vector<std::string> binds;
  for (auto& [k, v] : st.subst.cells) binds.push_back(k + " = " + render(v));
  for (auto& [k, v] : st.subst.terms)
    binds.push_back(k + " = " + render(sig, v));
  for (auto& [k, v] : st.subst.sterms)
    binds.push_back(k + " = " + render(sig, v));
  if (!binds.empty()) {
    s += " { ";
    for (size_t i = 0; i < binds.size(); ++i)
      s += (i ? ", " : "") + binds[i];
    s += " }";
  }
  return s;
}

std::string render_script(const Signature& sig, const std::vector<Rule>& rules,
                          const ProofScript& script) {
  std::string out;
  for (auto& st : script.steps) out += render_step(sig, rules, st) + "\n";
  return out;
}

// Metavariable kinds are read off the rule patterns so substitution values
// can be parsed at the right level.
enum class VarKind { Cell, Term, Shadow };

static void var_kinds_cell(const OneCell& c,
                           std::map<std::string, VarKind>& out) {
  if (c.word.empty() && is_var(c.src)) out[c.src.substr(1)] = VarKind::Cell;
  for (auto& item : c.word)
    if (is_var(item)) out[item.substr(1)] = VarKind::Cell;
}
static void var_kinds_tc(const TC& e, std::map<std::string, VarKind>& out) {
  switch (e->k) {
    case TK::MVar: out[e->name] = VarKind::Term; break;
    case TK::Id: var_kinds_cell(e->cell, out); break;
    case TK::Gamma:
      var_kinds_cell(e->ga, out);
      var_kinds_cell(e->gb, out);
      break;
    case TK::VComp:
    case TK::HComp:
      for (auto& k : e->kids) var_kinds_tc(k, out);
      break;
    default: break;
  }
}
static void var_kinds_sc(const SC& e, std::map<std::string, VarKind>& out) {
  switch (e->k) {
    case SK::SMVar: out[e->name] = VarKind::Shadow; break;
    case SK::Sh: var_kinds_tc(e->f, out); break;
    case SK::SId: var_kinds_cell(e->cell, out); break;
    case SK::Theta:
      var_kinds_cell(e->ta, out);
      var_kinds_cell(e->tb, out);
      break;
    case SK::SComp:
      for (auto& k : e->kids) var_kinds_sc(k, out);
      break;
  }
}
static std::map<std::string, VarKind> var_kinds(const Rule& r) {
  std::map<std::string, VarKind> out;
  for (const Expr* e : {&r.lhs, &r.rhs}) {
    if (e->is_shadow)
      var_kinds_sc(e->s, out);
    else
      var_kinds_tc(e->t, out);
  }
  return out;
}

Step parse_step(const Signature& sig, const std::vector<Rule>& rules,
                const std::string& line) {
  Step st;
  size_t at = line.find('@');
  if (at == std::string::npos)
    throw ParseError(1, 1, "@", "step line needs '<rule> @ <position>'");
  std::string rulename = line.substr(0, at);
  // trim
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  rulename = trim(rulename);
  if (!rulename.empty() && rulename.back() == '~') {
    st.reverse = true;
    rulename.pop_back();
    rulename = trim(rulename);
  }
  st.rule = rulename;
  const Rule* rule = find_rule(rules, rulename);
  if (!rule) throw ParseError(1, 1, "rule name", "unknown rule " + rulename);

  size_t brace = line.find('{', at);
  std::string postext =
      trim(line.substr(at + 1, (brace == std::string::npos ? line.size()
                                                           : brace) -
                                   at - 1));
  // position: "root" or dotted path, optional ":lo..hi"
  std::string spantext;
  size_t colon = postext.find(':');
  if (colon != std::string::npos) {
    spantext = postext.substr(colon + 1);
    postext = trim(postext.substr(0, colon));
  }
  if (postext != "root" && !postext.empty()) {
    std::stringstream ss(postext);
    std::string part;
    while (std::getline(ss, part, '.')) st.pos.path.push_back(std::stoi(part));
  }
  if (!spantext.empty()) {
    size_t dots = spantext.find("..");
    if (dots == std::string::npos)
      throw ParseError(1, 1, "..", "span must be lo..hi");
    st.pos.lo = std::stoi(spantext.substr(0, dots));
    st.pos.hi = std::stoi(spantext.substr(dots + 2));
  }
  if (brace != std::string::npos) {
    size_t close = line.rfind('}');
    if (close == std::string::npos || close < brace)
      throw ParseError(1, 1, "}", "unterminated substitution block");
    std::string body = line.substr(brace + 1, close - brace - 1);
    auto kinds = var_kinds(*rule);
    // split on top-level commas (expressions contain no commas)
    std::stringstream ss(body);
    std::string bind;
    while (std::getline(ss, bind, ',')) {
      bind = trim(bind);
      if (bind.empty()) continue;
      size_t eqp = bind.find('=');
      if (eqp == std::string::npos)
        throw ParseError(1, 1, "=", "binding must be <var> = <expr>");
      std::string var = trim(bind.substr(0, eqp));
      std::string val = trim(bind.substr(eqp + 1));
      auto kit = kinds.find(var);
      if (kit == kinds.end())
        throw ParseError(1, 1, "metavariable",
                         "rule " + rulename + " has no metavariable " + var);
      switch (kit->second) {
        case VarKind::Cell: st.subst.cells[var] = parse_word(sig, val); break;
        case VarKind::Term: st.subst.terms[var] = parse_2cell(sig, val); break;
        case VarKind::Shadow:
          st.subst.sterms[var] = parse_shadow(sig, val);
          break;
      }
    }
  }
  return st;
}

}  // namespace bicat
