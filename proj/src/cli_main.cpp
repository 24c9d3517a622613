#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bicat/dsl.hpp"
#include "bicat/modeljson.hpp"

// bicat: check proof documents, normalize expressions, evaluate model
// traces, and compute covering-space transfers.
//
// Exit codes: 0 success, 1 a task failed, 2 usage or parse error.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTaskFailed = 1;
constexpr int kExitUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json slurp_json(const std::string& path) {
  return json::parse(slurp(path));
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int report_tasks(const bicat::RunReport& rep) {
  for (auto& t : rep.tasks)
    std::cout << (t.ok ? "ok   " : "FAIL ") << t.kind << " " << t.name
              << (t.detail.empty() ? "" : ": " + t.detail) << "\n";
  if (!rep.all_ok()) {
    for (auto& t : rep.tasks)
      if (!t.ok) {
        std::cout << "first failing task: " << t.name << "\n";
        break;
      }
    return kExitTaskFailed;
  }
  return kExitOk;
}

int cmd_check(const std::string& file) {
  bicat::DslDocument doc = bicat::parse_document(slurp(file));
  return report_tasks(bicat::run_document(doc));
}

int cmd_normalize(const std::string& file, const std::string& expr_name) {
  bicat::DslDocument doc = bicat::parse_document(slurp(file));
  const bicat::Expr& e = bicat::find_let(doc, expr_name);
  bicat::Expr n = bicat::normalize(doc.sig, e);
  std::cout << bicat::render(n) << "\n";
  return kExitOk;
}

// Accepts either a bimodule JSON file directly or a DSL document with a
// `model bimodule` reference (resolved relative to the document).
bicat::Bimodule load_bimodule(const std::string& file) {
  std::string text = slurp(file);
  if (!text.empty() && (text[0] == '{' || text[0] == '['))
    return bicat::bimodule_from_json(json::parse(text));
  bicat::DslDocument doc = bicat::parse_document(text);
  for (auto& m : doc.models)
    if (m.kind == "bimodule") {
      fs::path p = fs::path(file).parent_path() / m.file;
      return bicat::bimodule_from_json(slurp_json(p.string()));
    }
  throw std::runtime_error(file + " names no bimodule model");
}

int cmd_trace(const std::string& file, const std::string& format) {
  bicat::Bimodule m = load_bimodule(file);
  bicat::Mat tr = bicat::evaluate_trace(m);
  bicat::Mat oracle = bicat::hattori_stallings_oracle(m);
  if (tr != oracle) {
    std::cout << "FAIL trace: composite and dual-basis oracle disagree\n";
    return kExitTaskFailed;
  }
  if (format == "json") {
    emit(json{{"source_hh0", tr.cols},
              {"target_hh0", tr.rows},
              {"trace", bicat::mat_to_json(tr)}});
  } else {
    for (int r = 0; r < tr.rows; ++r) {
      for (int c = 0; c < tr.cols; ++c)
        std::cout << (c ? " " : "") << bicat::render_rat(tr(r, c));
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_transfer(const std::string& group_file, const std::string& subgroup,
                 bool check_bg, bool check_euler, bool cross_model,
                 const std::string& format) {
  json gdoc = slurp_json(group_file);
  bicat::FiniteGroup g = bicat::group_from_json(gdoc);
  std::vector<int> k = bicat::subgroup_from_spec(gdoc, subgroup);
  bicat::CoverSpec cover = bicat::build_cover(g, k);
  bicat::TransferMatrix t = bicat::loop_transfer(cover);

  if (format == "json") {
    json out = bicat::transfer_to_json(t);
    out["index"] = static_cast<long long>(cover.coset_reps.size());
    emit(out);
  } else {
    std::cout << bicat::render_table(t);
  }

  bool failed = false;
  long long index = static_cast<long long>(cover.coset_reps.size());
  if (check_bg) {
    long long bg = bicat::becker_gottlieb_composite(cover);
    bool ok = bg == index;
    std::cout << "check-bg: composite = " << bg << ", index = " << index
              << (ok ? " Pass" : " Fail") << "\n";
    failed |= !ok;
  }
  if (check_euler) {
    auto e = bicat::euler_composite(cover);
    bool abelian = true;
    for (int i = 0; abelian && i < g.order; ++i)
      for (int j = 0; j < g.order; ++j)
        if (g.mul(i, j) != g.mul(j, i)) {
          abelian = false;
          break;
        }
    if (!abelian) {
      std::cout << "check-euler: skipped (group is not abelian)\n";
    } else {
      bool ok = true;
      for (size_t r = 0; r < e.size(); ++r)
        for (size_t c = 0; c < e[r].size(); ++c)
          if (e[r][c] != (r == c ? index : 0)) ok = false;
      std::cout << "check-euler: " << (ok ? "Pass" : "Fail")
                << " (expected " << index << " x identity)\n";
      failed |= !ok;
    }
  }
  if (cross_model) {
    bicat::CrossModelReport r = bicat::cross_model_check(cover);
    std::cout << "cross-model: " << (r.pass ? "Pass" : "Fail");
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    std::cout << "\n";
    failed |= !r.pass;
  }
  return failed ? kExitTaskFailed : kExitOk;
}

int cmd_corpus(const std::string& dir) {
  bool failed = false;
  std::string first_fail;
  for (const bicat::Theorem& t : bicat::shipped_theorems()) {
    auto rules = bicat::builtin_rules(t.sig);
    std::string verdict;
    try {
      bicat::Certificate c = bicat::verify_script(t.sig, rules, t.script);
      verdict = c.proved() ? "Proved" : "Unknown";
    } catch (const std::exception& e) {
      verdict = std::string("Fail (") + e.what() + ")";
    }
    bool ok = verdict == "Proved";
    // the shipped file must parse back to the same document and verify
    if (ok && !dir.empty()) {
      fs::path p = fs::path(dir) / (t.name + ".st");
      try {
        bicat::DslDocument doc = bicat::parse_document(slurp(p.string()));
        if (!bicat::run_document(doc).all_ok()) {
          ok = false;
          verdict = "Fail (corpus file does not verify)";
        } else if (bicat::print_document(doc) != bicat::theorem_to_dsl(t)) {
          ok = false;
          verdict = "Fail (corpus file drifted from the built-in script)";
        }
      } catch (const std::exception& e) {
        ok = false;
        verdict = std::string("Fail (") + e.what() + ")";
      }
    }
    std::cout << (ok ? "ok   " : "FAIL ") << t.name << " "
              << t.script.steps.size() << " steps: " << verdict << "\n";
    if (!ok && first_fail.empty()) first_fail = t.name;
    failed |= !ok;
  }
  if (failed) {
    std::cout << "first failing task: " << first_fail << "\n";
    return kExitTaskFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "symbolic traces in shadowed bicategories: proof checking, exact "
      "bimodule traces, and covering-space transfers"};
  app.require_subcommand(1);

  std::string file, expr_name, group_file, subgroup, dir;
  std::string format = "table";
  bool check_bg = false, check_euler = false, cross_model = false;

  CLI::App* check = app.add_subcommand("check",
                                       "typecheck a document and run its goals");
  check->add_option("file", file, "document to check")->required();

  CLI::App* normalize =
      app.add_subcommand("normalize", "print the normal form of an expression");
  normalize->add_option("file", file, "document holding the expression")
      ->required();
  normalize->add_option("--expr", expr_name, "name bound by a let")->required();

  CLI::App* trace =
      app.add_subcommand("trace", "trace of a free bimodule at HH0");
  std::string model_kind = "bimod";
  trace->add_option("--model", model_kind, "model kind (bimod)")
      ->check(CLI::IsMember({"bimod"}));
  trace->add_option("file", file, "bimodule JSON or document referencing one")
      ->required();
  trace->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "table"}));

  CLI::App* transfer =
      app.add_subcommand("transfer", "free loop transfer of a finite cover");
  transfer->add_option("--group", group_file, "group JSON file")->required();
  transfer
      ->add_option("--subgroup", subgroup,
                   "element indices like \"{0,2}\" or a name from the "
                   "document's \"subgroups\"")
      ->required();
  transfer->add_flag("--check-bg", check_bg,
                     "verify the round-trip composite equals the index");
  transfer->add_flag("--check-euler", check_euler,
                     "verify transfer o inclusion = index x identity "
                     "(abelian groups)");
  transfer->add_flag("--cross-model", cross_model,
                     "compare against the bimodule-model trace");
  transfer->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "table"}));

  CLI::App* corpus =
      app.add_subcommand("corpus", "verify the shipped theorem scripts");
  corpus->add_option("--dir", dir,
                     "also cross-check the corpus files in this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(file);
    if (*normalize) return cmd_normalize(file, expr_name);
    if (*trace) return cmd_trace(file, format);
    if (*transfer)
      return cmd_transfer(group_file, subgroup, check_bg, check_euler,
                          cross_model, format);
    if (*corpus) {
      if (dir.empty() && fs::exists("theorems")) dir = "theorems";
      return cmd_corpus(dir);
    }
  } catch (const bicat::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTaskFailed;
  }
  return kExitUsage;
}
