#pragma once

#include <json.hpp>

#include "bicat/groupmod.hpp"

// JSON presentations of the model-layer objects. Rationals travel as
// "p/q" strings (plain integers also accepted on input).
//
//   algebra:  {"dim": n, "basis": [...], "structure": [[[q,...],...],...],
//              "unit": [q,...]}
//   bimodule: {"left_algebra": {...}, "right_algebra": {...}, "dim": m,
//              "left": [matrix per left basis element],
//              "right": [matrix per right basis element],
//              "witness": matrix (optional, generators as columns)}
//   group:    {"order": n, "table": [[...]]} or
//             {"perm_degree": d, "generators": [[[cycle], ...], ...]};
//             optional "labels": [...], "subgroups": {"name": [indices]}
//   transfer: {"rows": [...], "cols": [...], "row_sizes": [...],
//              "col_sizes": [...], "entries": [[int, ...], ...]}

namespace bicat {

Rat rat_from_json(const nlohmann::json& j);
nlohmann::json rat_to_json(const Rat& q);

Mat mat_from_json(const nlohmann::json& j);
nlohmann::json mat_to_json(const Mat& m);

Algebra algebra_from_json(const nlohmann::json& j);
nlohmann::json algebra_to_json(const Algebra& a);

Bimodule bimodule_from_json(const nlohmann::json& j);

FiniteGroup group_from_json(const nlohmann::json& j);

// "{0,2}" / "0,2" style index lists, or the name of an entry in the
// group document's "subgroups" object.
std::vector<int> subgroup_from_spec(const nlohmann::json& group_doc,
                                    const std::string& spec);

nlohmann::json transfer_to_json(const TransferMatrix& t);

}  // namespace bicat
