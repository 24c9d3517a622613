#pragma once

#include <map>

#include "bicat/tracelib.hpp"

// Text documents tying the pieces together: signature declarations, named
// expressions, and proof or search goals. One statement per construct;
// '#' starts a comment. Grammar summary:
//
//   0cell A;
//   1cell X : A -> B;
//   2cell f : <word> -> <word>;
//   dualpair (<word>, <word>);
//   shadow;
//   symmetric A;
//   model bimodule M = "file.json";
//   model group G = "file.json";
//   let <name> = <expression to end of line>
//   prove <name> : <lhs> == <rhs> by {
//     <proof step per line>
//   }
//   search <name> : <lhs> == <rhs> budget <nodes>;
//
// `by` and `budget` are reserved words in goal statements. Expressions use
// the 2-cell / shadow syntax of the term layer; `(x)` is the ASCII form
// of the tensor and `sh(...)` of the shadow brackets.

namespace bicat {

struct GoalTask {
  std::string name;
  bool is_search = false;
  long budget = 100000;
  Expr lhs, rhs;
  std::vector<std::string> step_lines;
};

struct ModelRef {
  std::string kind;  // "bimodule" | "group"
  std::string name;
  std::string file;
};

struct DslDocument {
  Signature sig;
  std::vector<std::pair<std::string, Expr>> lets;
  std::vector<GoalTask> goals;
  std::vector<ModelRef> models;
};

// Recursive-descent parse with line/column diagnostics; throws ParseError.
DslDocument parse_document(const std::string& text);

// Canonical printing; parse(print(doc)) reproduces the document and
// print(parse(text)) is the identity on canonically printed text.
std::string print_document(const DslDocument& doc);

// A corpus theorem as a standalone document with one prove goal.
std::string theorem_to_dsl(const Theorem& t);

struct TaskResult {
  std::string name;
  std::string kind;  // "prove" | "search" | "typecheck"
  bool ok = false;
  std::string detail;
};

struct RunReport {
  std::vector<TaskResult> tasks;
  bool all_ok() const {
    for (auto& t : tasks)
      if (!t.ok) return false;
    return true;
  }
};

// Validates the signature, typechecks every named expression, and runs
// every goal in order.
RunReport run_document(const DslDocument& doc);

// Looks up a named expression; throws ParseError-style diagnostics via
// std::runtime_error if absent.
const Expr& find_let(const DslDocument& doc, const std::string& name);

}  // namespace bicat
