#include "bicat/modeljson.hpp"

#include <sstream>

namespace bicat {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw ModelError("InvalidJson", what);
}

std::vector<Rat> rat_row(const json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  std::vector<Rat> out;
  out.reserve(j.size());
  for (auto& v : j) out.push_back(rat_from_json(v));
  return out;
}

}  // namespace

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) return parse_rat(j.get<std::string>());
  bad("a rational must be an integer or a \"p/q\" string");
}

json rat_to_json(const Rat& q) { return render_rat(q); }

Mat mat_from_json(const json& j) {
  if (!j.is_array()) bad("expected a matrix as an array of rows");
  size_t rows = j.size();
  size_t cols = rows ? j[0].size() : 0;
  Mat m(static_cast<int>(rows), static_cast<int>(cols));
  for (size_t r = 0; r < rows; ++r) {
    auto row = rat_row(j[r]);
    if (row.size() != cols) bad("ragged matrix rows");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<int>(r), static_cast<int>(c)) = row[c];
  }
  return m;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(rat_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Algebra algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("structure"))
    bad("an algebra needs \"dim\" and \"structure\"");
  Algebra a;
  a.dim = j.at("dim").get<int>();
  if (a.dim < 0) bad("negative algebra dimension");
  if (j.contains("basis"))
    a.basis = j.at("basis").get<std::vector<std::string>>();
  if (a.basis.empty())
    for (int i = 0; i < a.dim; ++i) a.basis.push_back("e" + std::to_string(i));
  if (static_cast<int>(a.basis.size()) != a.dim)
    bad("basis label count differs from \"dim\"");

  const json& st = j.at("structure");
  if (!st.is_array() || static_cast<int>(st.size()) != a.dim)
    bad("\"structure\" must hold one block per basis element");
  a.c.resize(a.dim);
  for (int i = 0; i < a.dim; ++i) {
    if (!st[i].is_array() || static_cast<int>(st[i].size()) != a.dim)
      bad("structure block " + std::to_string(i) + " has wrong shape");
    a.c[i].resize(a.dim);
    for (int k = 0; k < a.dim; ++k) {
      a.c[i][k] = rat_row(st[i][k]);
      if (static_cast<int>(a.c[i][k].size()) != a.dim)
        bad("structure row " + std::to_string(i) + "," + std::to_string(k) +
            " has wrong length");
    }
  }

  a.unit = Mat(a.dim, 1);
  if (j.contains("unit")) {
    auto u = rat_row(j.at("unit"));
    if (static_cast<int>(u.size()) != a.dim) bad("\"unit\" has wrong length");
    for (int i = 0; i < a.dim; ++i) a.unit(i, 0) = u[i];
  } else if (a.dim > 0) {
    a.unit(0, 0) = 1;
  }
  validate_algebra(a);
  return a;
}

json algebra_to_json(const Algebra& a) {
  json st = json::array();
  for (int i = 0; i < a.dim; ++i) {
    json block = json::array();
    for (int k = 0; k < a.dim; ++k) {
      json row = json::array();
      for (int l = 0; l < a.dim; ++l) row.push_back(rat_to_json(a.c[i][k][l]));
      block.push_back(std::move(row));
    }
    st.push_back(std::move(block));
  }
  json unit = json::array();
  for (int i = 0; i < a.dim; ++i) unit.push_back(rat_to_json(a.unit(i, 0)));
  return json{{"dim", a.dim},
              {"basis", a.basis},
              {"structure", std::move(st)},
              {"unit", std::move(unit)}};
}

Bimodule bimodule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("left_algebra") ||
      !j.contains("right_algebra") || !j.contains("dim"))
    bad("a bimodule needs \"left_algebra\", \"right_algebra\", and \"dim\"");
  Bimodule m;
  m.A = algebra_from_json(j.at("left_algebra"));
  m.R = algebra_from_json(j.at("right_algebra"));
  m.dim = j.at("dim").get<int>();
  if (m.dim < 0) bad("negative bimodule dimension");

  auto actions = [&](const char* key, int count) {
    std::vector<Mat> out;
    if (!j.contains(key))
      bad(std::string("a bimodule needs \"") + key + "\" action matrices");
    const json& arr = j.at(key);
    if (!arr.is_array() || static_cast<int>(arr.size()) != count)
      bad(std::string("\"") + key + "\" must hold one matrix per basis " +
          "element of the acting algebra");
    for (auto& mat : arr) {
      out.push_back(mat_from_json(mat));
      if (out.back().rows != m.dim || out.back().cols != m.dim)
        bad(std::string("\"") + key + "\" matrices must be dim x dim");
    }
    return out;
  };
  m.left = actions("left", m.A.dim);
  m.right = actions("right", m.R.dim);
  if (j.contains("witness")) {
    Mat w = mat_from_json(j.at("witness"));
    if (w.rows != m.dim) bad("\"witness\" rows must equal \"dim\"");
    m.witness = std::move(w);
  }
  validate_bimodule(m);
  return m;
}

FiniteGroup group_from_json(const json& j) {
  if (!j.is_object()) bad("a group document must be an object");
  FiniteGroup g;
  if (j.contains("table")) {
    auto table = j.at("table").get<std::vector<std::vector<int>>>();
    if (j.contains("order") &&
        j.at("order").get<size_t>() != table.size())
      bad("\"order\" disagrees with the table size");
    g = group_from_table(std::move(table));
  } else if (j.contains("perm_degree")) {
    g = group_from_permutations(
        j.at("perm_degree").get<int>(),
        j.at("generators")
            .get<std::vector<std::vector<std::vector<int>>>>());
  } else {
    bad("a group needs either \"table\" or \"perm_degree\"/\"generators\"");
  }
  if (j.contains("labels")) {
    auto labels = j.at("labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != g.order)
      bad("\"labels\" length differs from the group order");
    g.labels = std::move(labels);
  }
  return g;
}

std::vector<int> subgroup_from_spec(const json& group_doc,
                                    const std::string& spec) {
  std::string s = spec;
  if (!s.empty() && s.front() == '{' && s.back() == '}')
    s = s.substr(1, s.size() - 2);
  bool numeric = !s.empty();
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != ',' &&
        !std::isspace(static_cast<unsigned char>(c)))
      numeric = false;
  if (numeric) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
    return out;
  }
  if (group_doc.contains("subgroups") &&
      group_doc.at("subgroups").contains(spec))
    return group_doc.at("subgroups").at(spec).get<std::vector<int>>();
  bad("subgroup spec '" + spec +
      "' is neither an index list nor a named subgroup of the document");
}

json transfer_to_json(const TransferMatrix& t) {
  return json{{"rows", t.row_labels},
              {"cols", t.col_labels},
              {"row_sizes", t.row_sizes},
              {"col_sizes", t.col_sizes},
              {"entries", t.entries}};
}

}  // namespace bicat
