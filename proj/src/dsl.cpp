#include "bicat/dsl.hpp"

#include <sstream>

namespace bicat {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Cursor {
  const std::string& s;
  size_t i = 0;

  explicit Cursor(const std::string& text) : s(text) {}

  std::pair<int, int> pos_at(size_t off) const {
    int line = 1, col = 1;
    for (size_t j = 0; j < off && j < s.size(); ++j) {
      if (s[j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(size_t off, const std::string& expected) const {
    auto [line, col] = pos_at(off);
    throw ParseError(line, col, expected,
                     "line " + std::to_string(line) + ", col " +
                         std::to_string(col) + ": expected " + expected);
  }

  void skip_ws() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (s[i] == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return i >= s.size();
  }

  std::string word() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    if (i == start) fail(start, "an identifier");
    return s.substr(start, i - start);
  }

  void expect(char c) {
    skip_ws();
    if (i >= s.size() || s[i] != c) fail(i, std::string("'") + c + "'");
    ++i;
  }

  bool accept(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  // raw text until the delimiter string; the delimiter is consumed.
  // When word_delim is set the match must not touch identifier characters.
  std::string until(const std::string& delim, bool word_delim) {
    skip_ws();
    size_t start = i;
    for (size_t j = i; j + delim.size() <= s.size(); ++j) {
      if (s.compare(j, delim.size(), delim) != 0) continue;
      if (word_delim) {
        bool left_ok = j == 0 || !ident_char(s[j - 1]);
        size_t after = j + delim.size();
        bool right_ok = after >= s.size() || !ident_char(s[after]);
        if (!left_ok || !right_ok) continue;
      }
      i = j + delim.size();
      return s.substr(start, j - start);
    }
    fail(start, "'" + delim + "'");
  }

  std::string rest_of_line() {
    size_t start = i;
    while (i < s.size() && s[i] != '\n') ++i;
    std::string out = s.substr(start, i - start);
    auto hash = out.find('#');
    if (hash != std::string::npos) out = out.substr(0, hash);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back())))
      out.pop_back();
    return out;
  }

  std::string quoted() {
    skip_ws();
    if (i >= s.size() || s[i] != '"') fail(i, "a quoted file name");
    size_t start = ++i;
    while (i < s.size() && s[i] != '"') ++i;
    if (i >= s.size()) fail(start, "a closing quote");
    return s.substr(start, i++ - start);
  }

  long integer() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail(start, "a number");
    return std::stol(s.substr(start, i - start));
  }
};

Expr parse_expr(const Signature& sig, const std::string& text, Cursor& cur,
                size_t at) {
  try {
    if (text.find("sh(") != std::string::npos ||
        text.find("sh[") != std::string::npos ||
        text.find("th[") != std::string::npos ||
        text.find("sid[") != std::string::npos)
      return ex(parse_shadow(sig, text));
    return ex(parse_2cell(sig, text));
  } catch (const ParseError& e) {
    auto [line, col] = cur.pos_at(at);
    throw ParseError(line, col, e.expected,
                     "line " + std::to_string(line) + ": in '" + text +
                         "': " + e.what());
  } catch (const std::exception& e) {
    auto [line, col] = cur.pos_at(at);
    throw ParseError(line, col, "a resolvable expression",
                     "line " + std::to_string(line) + ": in '" + text +
                         "': " + e.what());
  }
}

}  // namespace

DslDocument parse_document(const std::string& text) {
  DslDocument doc;
  Cursor cur(text);
  while (!cur.eof()) {
    size_t at = cur.i;
    std::string kw = cur.word();
    if (kw == "0cell") {
      doc.sig.zero_cells.push_back(cur.word());
      cur.expect(';');
    } else if (kw == "1cell") {
      std::string name = cur.word();
      cur.expect(':');
      std::string src = cur.word();
      cur.until("->", false);
      std::string tgt = cur.word();
      cur.expect(';');
      doc.sig.one_gens.push_back({name, src, tgt});
    } else if (kw == "2cell") {
      std::string name = cur.word();
      cur.expect(':');
      size_t sat = cur.i;
      std::string src = cur.until("->", false);
      size_t tat = cur.i;
      std::string tgt = cur.until(";", false);
      TwoGen gen{name, {}, {}};
      try {
        gen.src = parse_word(doc.sig, src);
      } catch (const std::exception& e) {
        cur.fail(sat, "a 1-cell word (" + std::string(e.what()) + ")");
      }
      try {
        gen.tgt = parse_word(doc.sig, tgt);
      } catch (const std::exception& e) {
        cur.fail(tat, "a 1-cell word (" + std::string(e.what()) + ")");
      }
      doc.sig.two_gens.push_back(std::move(gen));
    } else if (kw == "dualpair") {
      cur.expect('(');
      size_t xat = cur.i;
      std::string x = cur.until(",", false);
      std::string y = cur.until(")", false);
      cur.expect(';');
      try {
        doc.sig.dual_pairs.push_back(
            {parse_word(doc.sig, x), parse_word(doc.sig, y)});
      } catch (const std::exception& e) {
        cur.fail(xat, "declared 1-cells (" + std::string(e.what()) + ")");
      }
    } else if (kw == "shadow") {
      cur.expect(';');
      doc.sig.shadow_enabled = true;
    } else if (kw == "symmetric") {
      doc.sig.symmetric_endo_homs.insert(cur.word());
      cur.expect(';');
    } else if (kw == "model") {
      ModelRef m;
      m.kind = cur.word();
      if (m.kind != "bimodule" && m.kind != "group")
        cur.fail(at, "'bimodule' or 'group'");
      m.name = cur.word();
      cur.expect('=');
      m.file = cur.quoted();
      cur.expect(';');
      doc.models.push_back(std::move(m));
    } else if (kw == "let") {
      std::string name = cur.word();
      cur.expect('=');
      cur.skip_ws();
      size_t eat = cur.i;
      std::string body = cur.rest_of_line();
      if (!body.empty() && body.back() == ';') body.pop_back();
      doc.lets.emplace_back(name, parse_expr(doc.sig, body, cur, eat));
    } else if (kw == "prove" || kw == "search") {
      GoalTask g;
      g.is_search = (kw == "search");
      g.name = cur.word();
      cur.expect(':');
      cur.skip_ws();
      size_t lat = cur.i;
      std::string lhs = cur.until("==", false);
      cur.skip_ws();
      size_t rat = cur.i;
      std::string rhs =
          g.is_search ? cur.until("budget", true) : cur.until("by", true);
      g.lhs = parse_expr(doc.sig, lhs, cur, lat);
      g.rhs = parse_expr(doc.sig, rhs, cur, rat);
      if (g.is_search) {
        g.budget = cur.integer();
        cur.accept(';');
      } else {
        cur.expect('{');
        for (;;) {
          cur.skip_ws();
          if (cur.accept('}')) break;
          size_t sat = cur.i;
          std::string line = cur.rest_of_line();
          if (line.empty()) cur.fail(sat, "a proof step or '}'");
          g.step_lines.push_back(line);
        }
      }
      doc.goals.push_back(std::move(g));
    } else {
      cur.fail(at, "a statement keyword");
    }
  }
  return doc;
}

namespace {

std::string render_expr(const Signature& sig, const Expr& e) {
  return e.is_shadow ? render(sig, e.s) : render(sig, e.t);
}

}  // namespace

std::string print_document(const DslDocument& doc) {
  std::ostringstream os;
  for (auto& a : doc.sig.zero_cells) os << "0cell " << a << ";\n";
  for (auto& g : doc.sig.one_gens)
    os << "1cell " << g.name << " : " << g.src << " -> " << g.tgt << ";\n";
  for (auto& g : doc.sig.two_gens)
    os << "2cell " << g.name << " : " << render(g.src) << " -> "
       << render(g.tgt) << ";\n";
  for (auto& p : doc.sig.dual_pairs)
    os << "dualpair (" << render(p.X) << ", " << render(p.Y) << ");\n";
  if (doc.sig.shadow_enabled) os << "shadow;\n";
  for (auto& a : doc.sig.symmetric_endo_homs) os << "symmetric " << a << ";\n";
  for (auto& m : doc.models)
    os << "model " << m.kind << " " << m.name << " = \"" << m.file << "\";\n";
  for (auto& [name, e] : doc.lets)
    os << "let " << name << " = " << render_expr(doc.sig, e) << "\n";
  for (auto& g : doc.goals) {
    os << "\n" << (g.is_search ? "search " : "prove ") << g.name << " : "
       << render_expr(doc.sig, g.lhs) << " == " << render_expr(doc.sig, g.rhs);
    if (g.is_search) {
      os << " budget " << g.budget << ";\n";
    } else {
      os << " by {\n";
      for (auto& line : g.step_lines) os << "  " << line << "\n";
      os << "}\n";
    }
  }
  return os.str();
}

std::string theorem_to_dsl(const Theorem& t) {
  auto rules = builtin_rules(t.sig);
  DslDocument doc;
  doc.sig = t.sig;
  GoalTask g;
  g.name = t.name;
  g.lhs = t.script.lhs;
  g.rhs = t.script.rhs;
  for (auto& st : t.script.steps)
    g.step_lines.push_back(render_step(t.sig, rules, st));
  doc.goals.push_back(std::move(g));
  return print_document(doc);
}

RunReport run_document(const DslDocument& doc) {
  RunReport rep;
  {
    TaskResult t{"signature", "typecheck", true, ""};
    for (auto& d : validate_signature(doc.sig)) {
      t.ok = false;
      if (!t.detail.empty()) t.detail += "; ";
      t.detail += d.code + " at " + d.location;
    }
    rep.tasks.push_back(std::move(t));
    if (!rep.tasks.back().ok) return rep;
  }
  for (auto& [name, e] : doc.lets) {
    TaskResult t{name, "typecheck", true, ""};
    try {
      Bound b = typecheck(doc.sig, e);
      t.detail = render(b.src) + " -> " + render(b.tgt);
    } catch (const TypeError& err) {
      t.ok = false;
      t.detail = err.what();
    }
    rep.tasks.push_back(std::move(t));
  }
  auto rules = builtin_rules(doc.sig);
  for (auto& g : doc.goals) {
    TaskResult t{g.name, g.is_search ? "search" : "prove", false, ""};
    try {
      if (g.is_search) {
        SearchBudget budget;
        budget.max_nodes = g.budget;
        Certificate c = search_equal(doc.sig, rules, g.lhs, g.rhs, budget);
        t.ok = c.proved();
        t.detail = c.proved()
                       ? "proved in " + std::to_string(c.script.steps.size()) +
                             " steps"
                       : c.message;
      } else {
        ProofScript script;
        script.lhs = g.lhs;
        script.rhs = g.rhs;
        for (auto& line : g.step_lines)
          script.steps.push_back(parse_step(doc.sig, rules, line));
        verify_script(doc.sig, rules, script);
        t.ok = true;
        t.detail = "verified " + std::to_string(script.steps.size()) + " steps";
      }
    } catch (const std::exception& err) {
      t.ok = false;
      t.detail = err.what();
    }
    rep.tasks.push_back(std::move(t));
  }
  return rep;
}

const Expr& find_let(const DslDocument& doc, const std::string& name) {
  for (auto& [n, e] : doc.lets)
    if (n == name) return e;
  throw std::runtime_error("no expression named '" + name + "' in document");
}

}  // namespace bicat
