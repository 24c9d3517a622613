#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bicat/dsl.hpp"
#include "bicat/modeljson.hpp"

// Python surface: string-oriented wrappers over the document DSL, the
// proof corpus, and both concrete models. Structured results come back
// as plain dicts/lists; matrices of rationals as lists of "p/q" strings.

namespace py = pybind11;
using namespace bicat;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return py::int_(j.get<long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (auto& v : j) out.append(json_to_py(v));
      return out;
    }
    default: {
      py::dict out;
      for (auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
      return out;
    }
  }
}

py::list report_to_py(const RunReport& rep) {
  py::list out;
  for (auto& t : rep.tasks)
    out.append(py::dict(py::arg("name") = t.name, py::arg("kind") = t.kind,
                        py::arg("ok") = t.ok, py::arg("detail") = t.detail));
  return out;
}

CoverSpec cover_from_json_text(const std::string& group_json,
                               const std::string& subgroup) {
  json doc = json::parse(group_json);
  FiniteGroup g = group_from_json(doc);
  return build_cover(g, subgroup_from_spec(doc, subgroup));
}

}  // namespace

PYBIND11_MODULE(bicat_py, m) {
  m.doc() =
      "traces in shadowed bicategories: proof documents, exact bimodule "
      "traces, and covering-space transfers";

  m.def(
      "check_document",
      [](const std::string& text) {
        return report_to_py(run_document(parse_document(text)));
      },
      py::arg("text"),
      "Parse a document, typecheck it, and run every goal; returns a list "
      "of task dicts.");

  m.def(
      "normalize_expression",
      [](const std::string& text, const std::string& name) {
        DslDocument doc = parse_document(text);
        return render(normalize(doc.sig, find_let(doc, name)));
      },
      py::arg("text"), py::arg("name"),
      "Normal form of a let-bound expression in a document.");

  m.def(
      "corpus",
      []() {
        py::list out;
        for (const Theorem& t : shipped_theorems()) {
          auto rules = builtin_rules(t.sig);
          bool ok = false;
          try {
            ok = verify_script(t.sig, rules, t.script).proved();
          } catch (const std::exception&) {
          }
          out.append(py::dict(
              py::arg("name") = t.name,
              py::arg("steps") = static_cast<int>(t.script.steps.size()),
              py::arg("verified") = ok));
        }
        return out;
      },
      "Replay every shipped theorem script and report verdicts.");

  m.def(
      "theorem_text",
      [](const std::string& name) {
        for (const Theorem& t : shipped_theorems())
          if (t.name == name) return theorem_to_dsl(t);
        throw std::invalid_argument("no shipped theorem named '" + name + "'");
      },
      py::arg("name"), "A shipped theorem as a standalone document.");

  m.def(
      "transfer",
      [](const std::string& group_json, const std::string& subgroup) {
        return json_to_py(
            transfer_to_json(loop_transfer(cover_from_json_text(
                group_json, subgroup))));
      },
      py::arg("group_json"), py::arg("subgroup"),
      "Free loop transfer of the cover given by a group JSON document and "
      "a subgroup spec.");

  m.def(
      "cross_model",
      [](const std::string& group_json, const std::string& subgroup) {
        CrossModelReport r =
            cross_model_check(cover_from_json_text(group_json, subgroup));
        return py::dict(py::arg("pass") = r.pass,
                        py::arg("message") = r.message);
      },
      py::arg("group_json"), py::arg("subgroup"),
      "Compare the combinatorial transfer with the bimodule-model trace.");

  m.def(
      "trace",
      [](const std::string& bimodule_json) {
        Bimodule mod = bimodule_from_json(json::parse(bimodule_json));
        Mat tr = evaluate_trace(mod);
        if (tr != hattori_stallings_oracle(mod))
          throw std::runtime_error(
              "composite trace and dual-basis oracle disagree");
        return json_to_py(mat_to_json(tr));
      },
      py::arg("bimodule_json"),
      "HH0 trace matrix of a free bimodule given as JSON; entries are "
      "\"p/q\" strings.");

  py::register_exception<ParseError>(m, "DocumentParseError");
  py::register_exception<ModelError>(m, "ModelValidationError");
}
