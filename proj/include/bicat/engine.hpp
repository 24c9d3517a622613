#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bicat/term.hpp"

// Equational reasoning over 2-cell and shadow expressions: a rule set
// instantiated from the signature, a proof-script checker, a normalizer
// for the oriented structural subset, and bounded bidirectional search.

namespace bicat {

// A 2-cell or shadow-level expression; rules and goals live at either level.
struct Expr {
  bool is_shadow = false;
  TC t;
  SC s;
};

Expr ex(TC t);
Expr ex(SC s);
bool eq(const Expr& a, const Expr& b);
std::string render(const Expr& e);
Bound typecheck(const Signature& sig, const Expr& e);
int tree_size(const Expr& e);

// Bindings for metavariables. Word and 0-cell variables bind 1-cells
// (a 0-cell variable binds the unit at that 0-cell).
struct Subst {
  std::map<std::string, OneCell> cells;
  std::map<std::string, TC> terms;
  std::map<std::string, SC> sterms;
};

// A bidirectional rewrite rule. Patterns may contain metavariables;
// `complete` derives bindings that only appear on one side (typically
// boundary words of a bound 2-cell) and throws TypeError to reject an
// inconsistent match.
struct Rule {
  std::string name;
  Expr lhs, rhs;
  bool derived = false;
  std::function<void(const Signature&, Subst&)> complete;
};

// Rules instantiated for a signature: triangle identities per dual pair,
// unit laws, the interchange family, and (when enabled) the shadow and
// symmetry axioms. The cyclic-rotation involution ships as a derived rule
// with its own certificate in the theorem corpus.
std::vector<Rule> builtin_rules(const Signature& sig);
const Rule* find_rule(const std::vector<Rule>& rules, const std::string& name);

// Position of a rewrite: path of child indices from the root (an index
// into an n-ary composite, or 0 to enter sh(...)), plus an optional
// child span [lo, hi] of the composite node reached. lo == -1 addresses
// the whole node.
struct Pos {
  std::vector<int> path;
  int lo = -1, hi = -1;
};

struct Step {
  std::string rule;
  bool reverse = false;
  Pos pos;
  Subst subst;
};

struct ProofScript {
  Expr lhs, rhs;
  std::vector<Step> steps;
};

struct StepMismatch : std::runtime_error {
  int index;
  StepMismatch(int i, const std::string& msg)
      : std::runtime_error("step " + std::to_string(i) + ": " + msg),
        index(i) {}
};

enum class Verdict { Proved, Refuted, Unknown };

struct Certificate {
  Verdict verdict = Verdict::Unknown;
  ProofScript script;
  std::string message;
  bool proved() const { return verdict == Verdict::Proved; }
};

Expr piece_at(const Expr& e, const Pos& pos);
Expr replace_at(const Expr& e, const Pos& pos, const Expr& repl);

// Applies one step, checking that the instantiated pattern matches the
// addressed piece and that boundaries are preserved. Throws StepMismatch.
Expr apply_step(const Signature& sig, const std::vector<Rule>& rules,
                const Expr& e, const Step& st, int index = 0);

// Replays a script. Throws StepMismatch on the first failing step;
// returns a Proved certificate embedding the script on success.
Certificate verify_script(const Signature& sig, const std::vector<Rule>& rules,
                          const ProofScript& script);

// Oriented structural normalization: drops identity slices and unit-word
// factors, merges adjacent identity factors, pushes the shadow functor
// through vertical composites, and erases unit-argument rotations.
// Idempotent and boundary-preserving. If `trace` is given, the applied
// steps are appended so callers can splice them into replayable scripts.
Expr normalize(const Signature& sig, const Expr& e,
               std::vector<Step>* trace = nullptr);

struct SearchBudget {
  long max_nodes = 100000;
  int max_depth = 8;
  int size_slack = 8;  // prune intermediate terms larger than the goal by more
  // derived rules (shortcuts with their own corpus certificates) are off by
  // default so searches re-prove goals from the axioms alone
  bool allow_derived = false;
};

// Every rule instance applicable anywhere in `e`, with the result of
// applying it. Oriented structural rules fire left-to-right only;
// bidirectional rules contribute both directions.
std::vector<std::pair<Step, Expr>> applicable_steps(
    const Signature& sig, const std::vector<Rule>& rules, const Expr& e,
    bool include_derived = false);

// Bidirectional breadth-first search over the rewrite graph, exploring
// normalized representatives and recording replayable step traces on
// every edge. Returns Proved with a synthesized script, or Unknown on
// budget exhaustion. Never Refuted: refutation is a model-level job.
Certificate search_equal(const Signature& sig, const std::vector<Rule>& rules,
                         const Expr& lhs, const Expr& rhs, SearchBudget budget);

// Inverts a replayable step sequence starting at `start` into steps that
// rewrite the final expression back to `start`. Recorded positions cannot
// simply be reused in reverse because replacement re-flattens composites,
// so each inverse step is re-derived.
std::vector<Step> invert_steps(const Signature& sig,
                               const std::vector<Rule>& rules,
                               const Expr& start,
                               const std::vector<Step>& steps);

// Replays a script and removes cycles: whenever an intermediate expression
// recurs, the steps in between are dropped. Output verifies iff input does.
ProofScript compress_script(const Signature& sig,
                            const std::vector<Rule>& rules,
                            const ProofScript& script);

// Line-oriented script serialization:
//   <rule>[~] @ <path or root>[:<lo>..<hi>] { <var>=<expr>, ... }
// '~' marks reverse application; variables bind words (rendered as 1-cell
// words), 2-cells, or shadow cells depending on the rule.
std::string render_step(const Signature& sig, const std::vector<Rule>& rules,
                        const Step& st);
std::string render_script(const Signature& sig, const std::vector<Rule>& rules,
                          const ProofScript& script);
Step parse_step(const Signature& sig, const std::vector<Rule>& rules,
                const std::string& line);

}  // namespace bicat
