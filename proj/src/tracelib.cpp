#include "bicat/tracelib.hpp"

namespace bicat {

DualPairHandle declared_pair(const Signature& sig, int index) {
  if (index < 0 || index >= static_cast<int>(sig.dual_pairs.size()))
    throw TypeError("UnknownPair", "no dual pair " + std::to_string(index));
  const DualPairDecl& d = sig.dual_pairs[index];
  DualPairHandle h;
  h.X = d.X;
  h.Y = d.Y;
  h.coev = coev2(index);
  h.eval = eval2(index);
  h.provenance = PairProvenance::Declared;
  return h;
}

DualPairHandle unit_pair(const std::string& zero_cell) {
  DualPairHandle h;
  h.X = unit_cell(zero_cell);
  h.Y = unit_cell(zero_cell);
  h.coev = id2(h.X);
  h.eval = id2(h.X);
  h.provenance = PairProvenance::Declared;
  return h;
}

TraceExpr build_trace(const Signature& sig, const DualPairHandle& pair,
                      const TC& phi) {
  Bound b = typecheck_2cell(sig, phi);
  // src = P (x) X, tgt = X (x) Q with P, Q endo
  const Word& xw = pair.X.word;
  const Word& sw = b.src.word;
  const Word& tw = b.tgt.word;
  if (sw.size() < xw.size() || tw.size() < xw.size() ||
      !std::equal(xw.rbegin(), xw.rend(), sw.rbegin()) ||
      !std::equal(xw.begin(), xw.end(), tw.begin()))
    throw TypeError("BoundaryMismatch",
                    "trace argument must map P(x)X to X(x)Q, got " +
                        render(b.src) + " -> " + render(b.tgt));
  OneCell P{b.src.src, b.src.src,
            Word(sw.begin(), sw.end() - xw.size())};
  OneCell Q{pair.X.tgt, pair.X.tgt, Word(tw.begin() + xw.size(), tw.end())};
  if (P.src != pair.X.src)
    throw TypeError("BoundaryMismatch", "P does not live over src(X)");

  TraceExpr t;
  t.pair = pair;
  t.phi = phi;
  t.result = scomp({sh(hcomp({id2(P), pair.coev})),
                    sh(hcomp({phi, id2(pair.Y)})),
                    theta(concat(pair.X, Q), pair.Y),
                    sh(hcomp({pair.eval, id2(Q)}))});
  typecheck_shadow(sig, t.result);
  return t;
}

DualPairHandle compose_dual_pairs(const Signature& sig,
                                  const DualPairHandle& p1,
                                  const DualPairHandle& p2) {
  if (p1.X.tgt != p2.X.src)
    throw TypeError("BoundaryMismatch",
                    "pairs are not composable: " + render(p1.X) + " then " +
                        render(p2.X));
  DualPairHandle h;
  h.X = concat(p1.X, p2.X);
  h.Y = concat(p2.Y, p1.Y);
  h.coev = vcomp({p1.coev, hcomp({id2(p1.X), p2.coev, id2(p1.Y)})});
  h.eval = vcomp({hcomp({id2(p2.Y), p1.eval, id2(p2.X)}), p2.eval});
  h.provenance = PairProvenance::Composite;

  auto rules = builtin_rules(sig);
  auto prove = [&](Expr lhs, Expr rhs, const char* which) {
    Certificate c = search_equal(sig, rules, lhs, rhs, SearchBudget{});
    if (!c.proved())
      throw ScriptFailure(std::string("triangle identity ") + which +
                          " for composite pair not derivable: " + c.message);
    ProofScript small = compress_script(sig, rules, c.script);
    verify_script(sig, rules, small);  // throws on engine inconsistency
    return small;
  };
  Expr tri1 = ex(vcomp({hcomp({h.coev, id2(h.X)}), hcomp({id2(h.X), h.eval})}));
  Expr tri2 = ex(vcomp({hcomp({id2(h.Y), h.coev}), hcomp({h.eval, id2(h.Y)})}));
  h.certificates.push_back(prove(tri1, ex(id2(h.X)), "1"));
  h.certificates.push_back(prove(tri2, ex(id2(h.Y)), "2"));
  return h;
}

// ---------------------------------------------------------------------------
// corpus signatures

Signature theta_squared_sig() {
  Signature sig;
  sig.zero_cells = {"A", "B"};
  sig.one_gens = {{"X", "A", "B"}, {"Y", "B", "A"}};
  sig.shadow_enabled = true;
  return sig;
}

Signature transfer_sig() {
  Signature sig;
  sig.zero_cells = {"b", "e"};
  sig.one_gens = {{"Sf", "b", "e"}, {"fS", "e", "b"}, {"DSf", "e", "b"}};
  sig.dual_pairs = {
      {OneCell{"e", "b", {"fS"}}, OneCell{"b", "e", {"Sf"}}},
      {OneCell{"b", "e", {"Sf"}}, OneCell{"e", "b", {"DSf"}}},
  };
  sig.symmetric_endo_homs = {"b"};
  sig.shadow_enabled = true;
  return sig;
}

Signature functoriality_sig() {
  Signature sig;
  sig.zero_cells = {"A", "B", "C"};
  sig.one_gens = {{"X", "A", "B"}, {"Y", "B", "A"}, {"Xp", "B", "C"},
                  {"Yp", "C", "B"}};
  sig.dual_pairs = {
      {OneCell{"A", "B", {"X"}}, OneCell{"B", "A", {"Y"}}},
      {OneCell{"B", "C", {"Xp"}}, OneCell{"C", "B", {"Yp"}}},
  };
  sig.shadow_enabled = true;
  return sig;
}

// ---------------------------------------------------------------------------
// corpus

static ProofScript scripted(const Signature& sig,
                            const std::vector<Rule>& rules, Expr lhs, Expr rhs,
                            const std::vector<std::string>& lines) {
  ProofScript s;
  s.lhs = std::move(lhs);
  s.rhs = std::move(rhs);
  for (auto& line : lines) s.steps.push_back(parse_step(sig, rules, line));
  return s;
}

static ProofScript searched(const Signature& sig,
                            const std::vector<Rule>& rules, Expr lhs,
                            Expr rhs) {
  Certificate c = search_equal(sig, rules, lhs, rhs, SearchBudget{});
  if (!c.proved())
    throw ScriptFailure("corpus derivation failed: " + c.message);
  ProofScript small = compress_script(sig, rules, c.script);
  verify_script(sig, rules, small);
  return small;
}

// Builds a replayable script from hand-picked essential steps: normalize
// the left side (recording the structural steps), apply the given lines,
// normalize again, and close the gap to the right side by inverting its
// own normalization trace. Throws ScriptFailure if the chain misses.
static ProofScript derived_script(const Signature& sig,
                                  const std::vector<Rule>& rules, Expr lhs,
                                  Expr rhs,
                                  const std::vector<std::string>& lines) {
  ProofScript script;
  script.lhs = std::move(lhs);
  script.rhs = std::move(rhs);
  Expr cur = normalize(sig, script.lhs, &script.steps);
  for (auto& line : lines) {
    Step st = parse_step(sig, rules, line);
    cur = apply_step(sig, rules, cur, st,
                     static_cast<int>(script.steps.size()));
    script.steps.push_back(std::move(st));
  }
  cur = normalize(sig, cur, &script.steps);
  std::vector<Step> back;
  Expr tgt = normalize(sig, script.rhs, &back);
  if (!eq(cur, tgt))
    throw ScriptFailure("hand derivation does not reach its goal: got " +
                        render(cur) + ", want " + render(tgt));
  for (Step& st : invert_steps(sig, rules, script.rhs, back))
    script.steps.push_back(std::move(st));
  verify_script(sig, rules, script);
  return script;
}

std::vector<Theorem> shipped_theorems() {
  std::vector<Theorem> out;

  {
    // the cyclic rotation squares to the identity
    Signature sig = theta_squared_sig();
    auto rules = builtin_rules(sig);
    OneCell x = make_word(sig, {"X"});
    OneCell y = make_word(sig, {"Y"});
    Expr lhs = ex(scomp({theta(x, y), theta(y, x)}));
    Expr rhs = ex(sid(concat(x, y)));
    out.push_back({"theta_squared", sig,
                   scripted(sig, rules, lhs, rhs,
                            {"hex~ @ root { X = U_A, Y = X, Z = Y }",
                             "thunit.l @ root { A = U_A, X = X(x)Y }"})});
  }

  {
    // certificate for the derived slide rule: two disjoint 2-cells pass
    // each other via two interchange steps
    Signature sig;
    sig.zero_cells = {"A", "B", "C"};
    sig.one_gens = {{"a", "A", "B"}, {"ap", "A", "B"}, {"b", "B", "C"},
                    {"bp", "B", "C"}};
    sig.two_gens = {{"f", OneCell{"A", "B", {"a"}}, OneCell{"A", "B", {"ap"}}},
                    {"g", OneCell{"B", "C", {"b"}}, OneCell{"B", "C", {"bp"}}}};
    auto rules = builtin_rules(sig);
    OneCell a = make_word(sig, {"a"}), ap = make_word(sig, {"ap"});
    OneCell b = make_word(sig, {"b"}), bp = make_word(sig, {"bp"});
    Expr lhs = ex(vcomp({hcomp({gen2("f"), id2(b)}), hcomp({id2(ap), gen2("g")})}));
    Expr rhs = ex(vcomp({hcomp({id2(a), gen2("g")}), hcomp({gen2("f"), id2(bp)})}));
    out.push_back({"interchange_slide", sig, searched(sig, rules, lhs, rhs)});
  }

  {
    // six-stage and five-stage pretransfer composites agree
    Signature sig = transfer_sig();
    auto rules = builtin_rules(sig);
    TC sfid = id2(make_word(sig, {"Sf"}));
    TC fsid = id2(make_word(sig, {"fS"}));
    TC dsid = id2(make_word(sig, {"DSf"}));
    OneCell w1 = make_word(sig, {"Sf", "fS"});
    OneCell w2 = make_word(sig, {"Sf", "DSf"});
    TC six = vcomp({coev2(1),
                    hcomp({sfid, coev2(0), dsid}),
                    gamma2(w1, w2),
                    hcomp({sfid, dsid, sfid, coev2(0), fsid}),
                    hcomp({sfid, eval2(1), fsid, sfid, fsid}),
                    hcomp({eval2(0), sfid, fsid})});
    TC five = vcomp({coev2(1),
                     hcomp({sfid, coev2(0), dsid}),
                     gamma2(w1, w2),
                     hcomp({sfid, eval2(1), fsid})});
    // the essential content is one slide (the lower evaluation passes the
    // fresh coevaluation on disjoint strands) followed by a triangle
    // identity; the surrounding steps are structural cleanup
    out.push_back(
        {"pretransfer_duality", sig,
         derived_script(
             sig, rules, ex(six), ex(five),
             {"slide~ @ root:3..4 { f = id[Sf] * eval[Sf], "
              "g = coev[fS] * id[fS] }",
              "idmerge~ @ 5.1 { X = Sf, Y = fS }",
              "xchg @ root:4..5 { f = id[Sf] * coev[fS], g = id[fS], "
              "h = eval[fS] * id[Sf], k = id[fS] }",
              "tri2.0 @ 4.0 { }"})});
  }

  {
    // the terminal triangle: one hexagon instance
    Signature sig = transfer_sig();
    auto rules = builtin_rules(sig);
    OneCell sffs = make_word(sig, {"Sf", "fS"});
    OneCell sfdsf = make_word(sig, {"Sf", "DSf"});
    OneCell sf = make_word(sig, {"Sf"});
    OneCell dsf = make_word(sig, {"DSf"});
    Expr lhs = ex(scomp({theta(concat(sffs, sf), dsf),
                         theta(concat(dsf, sffs), sf)}));
    Expr rhs = ex(theta(sffs, sfdsf));
    out.push_back(
        {"shadow_triangle", sig,
         scripted(sig, rules, lhs, rhs,
                  {"hex~ @ root { X = Sf(x)fS, Y = Sf, Z = DSf }"})});
  }

  {
    // the trace over the unit pair is the identity shadow morphism
    Signature sig;
    sig.zero_cells = {"A"};
    sig.shadow_enabled = true;
    auto rules = builtin_rules(sig);
    TraceExpr t = build_trace(sig, unit_pair("A"), id2(unit_cell("A")));
    out.push_back({"unit_trace", sig,
                   searched(sig, rules, ex(t.result),
                            ex(sid(unit_cell("A"))))});
  }

  {
    // trace functoriality: tr(id) of a composite pair splits
    Signature sig = functoriality_sig();
    auto rules = builtin_rules(sig);
    DualPairHandle p1 = declared_pair(sig, 0);
    DualPairHandle p2 = declared_pair(sig, 1);
    DualPairHandle pc = compose_dual_pairs(sig, p1, p2);
    TraceExpr tc = build_trace(sig, pc, id2(pc.X));
    TraceExpr t1 = build_trace(sig, p1, id2(p1.X));
    TraceExpr t2 = build_trace(sig, p2, id2(p2.X));
    Expr lhs = ex(tc.result);
    Expr rhs = ex(scomp({t1.result, t2.result}));
    // split the rotation of the composite with the hexagon, carry the
    // coevaluation and evaluation through the rotations by naturality,
    // then let them pass each other under the shadow
    out.push_back(
        {"trace_functorial", sig,
         derived_script(
             sig, rules, lhs, rhs,
             {"hex @ 2 { X = X(x)Xp, Y = Yp, Z = Y }",
              "thnat.l @ root:1..2 { f = id[X] * coev[Xp], Y = Y }",
              "thnat.l~ @ root:3..4 { f = eval[X] * id[Xp], Y = Yp }",
              "sh.comp~ @ root:2..3 { f = id[Y] * id[X] * coev[Xp], "
              "g = eval[X] * id[Xp] * id[Yp] }",
              "idmerge @ 2.0.0:0..1 { X = Y, Y = X }",
              "idmerge @ 2.0.1:1..2 { X = Xp, Y = Yp }",
              "slide~ @ 2.0 { f = eval[X], g = coev[Xp] }"})});
  }

  return out;
}

}  // namespace bicat
