#include "bicat/groupmod.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bicat {

int FiniteGroup::inv(int i) const {
  for (int j = 0; j < order; ++j)
    if (table[i][j] == identity) return j;
  throw ModelError("InvalidGroup", "element without inverse");
}

FiniteGroup group_from_table(std::vector<std::vector<int>> table,
                             int assoc_bound) {
  int n = static_cast<int>(table.size());
  if (n == 0) throw ModelError("InvalidGroup", "empty table");
  for (auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw ModelError("InvalidGroup", "table is not square");
    for (int v : row)
      if (v < 0 || v >= n)
        throw ModelError("InvalidGroup", "table entry out of range");
  }
  int e = -1;
  for (int i = 0; i < n && e < 0; ++i) {
    bool ok = true;
    for (int j = 0; j < n; ++j)
      if (table[i][j] != j || table[j][i] != j) {
        ok = false;
        break;
      }
    if (ok) e = i;
  }
  if (e < 0) throw ModelError("InvalidGroup", "no identity element");
  // rows and columns must be permutations (cancellation)
  for (int i = 0; i < n; ++i) {
    std::vector<bool> seen_r(n, false), seen_c(n, false);
    for (int j = 0; j < n; ++j) {
      if (seen_r[table[i][j]] || seen_c[table[j][i]])
        throw ModelError("InvalidGroup", "cancellation fails");
      seen_r[table[i][j]] = seen_c[table[j][i]] = true;
    }
  }
  if (n <= assoc_bound) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (table[table[i][j]][k] != table[i][table[j][k]])
            throw ModelError("InvalidGroup",
                             "associativity fails at (" + std::to_string(i) +
                                 ", " + std::to_string(j) + ", " +
                                 std::to_string(k) + ")");
  }
  FiniteGroup g;
  g.order = n;
  g.identity = e;
  g.table = std::move(table);
  bool has_inverses = true;
  for (int i = 0; i < n && has_inverses; ++i) {
    has_inverses = false;
    for (int j = 0; j < n; ++j)
      if (g.table[i][j] == e) {
        has_inverses = true;
        break;
      }
  }
  if (!has_inverses) throw ModelError("InvalidGroup", "missing inverse");
  for (int i = 0; i < n; ++i) g.labels.push_back(std::to_string(i));
  return g;
}

namespace {

std::vector<int> perm_from_cycles(int degree,
                                  const std::vector<std::vector<int>>& cycles) {
  std::vector<int> p(degree);
  for (int i = 0; i < degree; ++i) p[i] = i;
  for (auto& cyc : cycles) {
    for (size_t i = 0; i < cyc.size(); ++i) {
      int from = cyc[i], to = cyc[(i + 1) % cyc.size()];
      if (from < 0 || from >= degree || to < 0 || to >= degree)
        throw ModelError("InvalidGroup", "cycle point out of range");
      p[from] = to;
    }
  }
  return p;
}

std::string perm_label(const std::vector<int>& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == static_cast<int>(i)) continue;
    out += "(";
    size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += " ";
      out += std::to_string(j);
      first = false;
      j = static_cast<size_t>(p[j]);
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

}  // namespace

FiniteGroup group_from_permutations(
    int degree, const std::vector<std::vector<std::vector<int>>>& generators,
    int order_bound) {
  std::vector<std::vector<int>> gens;
  for (auto& g : generators) gens.push_back(perm_from_cycles(degree, g));
  std::vector<int> id(degree);
  for (int i = 0; i < degree; ++i) id[i] = i;

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> elems{id};
  index[id] = 0;
  for (size_t head = 0; head < elems.size(); ++head) {
    for (auto& gen : gens) {
      std::vector<int> prod(degree);
      for (int i = 0; i < degree; ++i) prod[i] = gen[elems[head][i]];
      if (index.emplace(prod, static_cast<int>(elems.size())).second) {
        elems.push_back(prod);
        if (static_cast<int>(elems.size()) > order_bound)
          throw ModelError("InvalidGroup", "order bound exceeded");
      }
    }
  }
  int n = static_cast<int>(elems.size());
  FiniteGroup g;
  g.order = n;
  g.identity = 0;
  g.table.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> prod(degree);
      for (int x = 0; x < degree; ++x) prod[x] = elems[i][elems[j][x]];
      g.table[i][j] = index.at(prod);
    }
  for (auto& p : elems) g.labels.push_back(perm_label(p));
  return g;
}

FiniteGroup cyclic_group(int n) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  return group_from_table(std::move(table));
}

FiniteGroup symmetric_group(int n) {
  if (n <= 1) return cyclic_group(1);
  std::vector<std::vector<std::vector<int>>> gens;
  gens.push_back({{0, 1}});
  std::vector<int> full;
  for (int i = 0; i < n; ++i) full.push_back(i);
  gens.push_back({full});
  return group_from_permutations(n, gens);
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  int n = a.order * b.order;
  FiniteGroup g;
  g.order = n;
  g.identity = a.identity * b.order + b.identity;
  g.table.assign(n, std::vector<int>(n));
  for (int i1 = 0; i1 < a.order; ++i1)
    for (int j1 = 0; j1 < b.order; ++j1)
      for (int i2 = 0; i2 < a.order; ++i2)
        for (int j2 = 0; j2 < b.order; ++j2)
          g.table[i1 * b.order + j1][i2 * b.order + j2] =
              a.table[i1][i2] * b.order + b.table[j1][j2];
  for (int i = 0; i < a.order; ++i)
    for (int j = 0; j < b.order; ++j)
      g.labels.push_back("(" + a.labels[i] + "," + b.labels[j] + ")");
  return g;
}

std::vector<ConjClass> conjugacy_classes(const FiniteGroup& g) {
  std::vector<bool> seen(g.order, false);
  std::vector<ConjClass> out;
  for (int x = 0; x < g.order; ++x) {
    if (seen[x]) continue;
    ConjClass c;
    c.rep = x;
    for (int h = 0; h < g.order; ++h) {
      int y = g.mul(g.mul(g.inv(h), x), h);
      if (!seen[y]) {
        seen[y] = true;
        c.elements.push_back(y);
      }
    }
    std::sort(c.elements.begin(), c.elements.end());
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// conjugacy classes of the subgroup K inside its own group structure,
// with elements recorded as G-indices
std::vector<ConjClass> subgroup_classes(const FiniteGroup& g,
                                        const std::vector<int>& k) {
  std::vector<bool> seen(g.order, false);
  std::vector<ConjClass> out;
  for (int x : k) {
    if (seen[x]) continue;
    ConjClass c;
    c.rep = x;
    for (int h : k) {
      int y = g.mul(g.mul(g.inv(h), x), h);
      if (!seen[y]) {
        seen[y] = true;
        c.elements.push_back(y);
      }
    }
    std::sort(c.elements.begin(), c.elements.end());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<int> generated_subgroup(const FiniteGroup& g,
                                    const std::vector<int>& gens) {
  std::vector<bool> in(g.order, false);
  std::vector<int> queue{g.identity};
  in[g.identity] = true;
  for (int x : gens)
    if (!in[x]) {
      in[x] = true;
      queue.push_back(x);
    }
  for (size_t i = 0; i < queue.size(); ++i)
    for (size_t j = 0; j < queue.size(); ++j) {
      int p = g.mul(queue[i], queue[j]);
      if (!in[p]) {
        in[p] = true;
        queue.push_back(p);
      }
    }
  std::sort(queue.begin(), queue.end());
  return queue;
}

FiniteGroup subgroup_as_group(const FiniteGroup& g, std::vector<int> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::vector<int> pos(g.order, -1);
  for (size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<int>(i);
  int n = static_cast<int>(elems.size());
  FiniteGroup h;
  h.order = n;
  h.table.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int p = g.mul(elems[i], elems[j]);
      if (pos[p] < 0)
        throw ModelError("NotASubgroup",
                         "not closed: " + std::to_string(elems[i]) + " * " +
                             std::to_string(elems[j]));
      h.table[i][j] = pos[p];
    }
  if (pos[g.identity] < 0)
    throw ModelError("NotASubgroup", "missing the identity");
  h.identity = pos[g.identity];
  for (int x : elems)
    h.labels.push_back(x < static_cast<int>(g.labels.size())
                           ? g.labels[x]
                           : std::to_string(x));
  return h;
}

CoverSpec build_cover(const FiniteGroup& g, std::vector<int> subgroup) {
  std::sort(subgroup.begin(), subgroup.end());
  subgroup.erase(std::unique(subgroup.begin(), subgroup.end()),
                 subgroup.end());
  if (subgroup.empty())
    throw ModelError("NotASubgroup", "empty subgroup");
  std::vector<bool> in_k(g.order, false);
  for (int x : subgroup) {
    if (x < 0 || x >= g.order)
      throw ModelError("NotASubgroup",
                       "element " + std::to_string(x) + " out of range");
    in_k[x] = true;
  }
  if (!in_k[g.identity])
    throw ModelError("NotASubgroup", "missing the identity");
  for (int x : subgroup) {
    if (!in_k[g.inv(x)])
      throw ModelError("NotASubgroup",
                       "element " + std::to_string(x) + " has no inverse in K");
    for (int y : subgroup)
      if (!in_k[g.mul(x, y)])
        throw ModelError("NotASubgroup",
                         "not closed: " + std::to_string(x) + " * " +
                             std::to_string(y));
  }

  CoverSpec c;
  c.G = g;
  c.K = std::move(subgroup);
  std::vector<bool> covered(g.order, false);
  for (int x = 0; x < g.order; ++x) {
    if (covered[x]) continue;
    c.coset_reps.push_back(x);
    for (int k : c.K) covered[g.mul(x, k)] = true;
  }
  c.gclasses = conjugacy_classes(g);
  c.kclasses = subgroup_classes(g, c.K);
  return c;
}

TransferMatrix loop_transfer(const CoverSpec& cover) {
  const FiniteGroup& g = cover.G;
  std::vector<int> kclass_of(g.order, -1);
  for (size_t c = 0; c < cover.kclasses.size(); ++c)
    for (int x : cover.kclasses[c].elements)
      kclass_of[x] = static_cast<int>(c);

  TransferMatrix t;
  for (auto& c : cover.kclasses) {
    t.row_labels.push_back(g.labels[c.rep]);
    t.row_sizes.push_back(static_cast<int>(c.elements.size()));
  }
  for (auto& c : cover.gclasses) {
    t.col_labels.push_back(g.labels[c.rep]);
    t.col_sizes.push_back(static_cast<int>(c.elements.size()));
  }
  t.entries.assign(cover.kclasses.size(),
                   std::vector<long long>(cover.gclasses.size(), 0));
  for (size_t w = 0; w < cover.gclasses.size(); ++w) {
    int rep = cover.gclasses[w].rep;
    for (int x : cover.coset_reps) {
      int conj = g.mul(g.mul(g.inv(x), rep), x);
      if (kclass_of[conj] >= 0) ++t.entries[kclass_of[conj]][w];
    }
  }
  return t;
}

long long becker_gottlieb_composite(const CoverSpec& cover) {
  TransferMatrix t = loop_transfer(cover);
  for (size_t w = 0; w < cover.gclasses.size(); ++w) {
    if (cover.gclasses[w].rep != cover.G.identity) continue;
    long long sum = 0;
    for (auto& row : t.entries) sum += row[w];
    return sum;
  }
  throw ModelError("InvalidGroup", "identity class missing");
}

std::vector<std::vector<long long>> euler_composite(const CoverSpec& cover) {
  TransferMatrix t = loop_transfer(cover);
  std::vector<int> gclass_of(cover.G.order, -1);
  for (size_t c = 0; c < cover.gclasses.size(); ++c)
    for (int x : cover.gclasses[c].elements)
      gclass_of[x] = static_cast<int>(c);
  size_t nk = cover.kclasses.size();
  std::vector<std::vector<long long>> out(nk, std::vector<long long>(nk, 0));
  for (size_t c = 0; c < nk; ++c) {
    int gcol = gclass_of[cover.kclasses[c].rep];
    for (size_t r = 0; r < nk; ++r) out[r][c] = t.entries[r][gcol];
  }
  return out;
}

Algebra group_algebra(const FiniteGroup& g) {
  Algebra a;
  a.dim = g.order;
  a.basis = g.labels;
  a.c.assign(g.order,
             std::vector<std::vector<Rat>>(
                 g.order, std::vector<Rat>(g.order, Rat(0))));
  for (int i = 0; i < g.order; ++i)
    for (int j = 0; j < g.order; ++j) a.c[i][j][g.table[i][j]] = 1;
  a.unit = Mat(g.order, 1);
  a.unit(g.identity, 0) = 1;
  return a;
}

Algebra subgroup_algebra(const FiniteGroup& g, const std::vector<int>& k) {
  int nk = static_cast<int>(k.size());
  std::vector<int> pos_in_k(g.order, -1);
  for (int i = 0; i < nk; ++i) pos_in_k[k[i]] = i;
  Algebra qk;
  qk.dim = nk;
  qk.c.assign(nk, std::vector<std::vector<Rat>>(
                      nk, std::vector<Rat>(nk, Rat(0))));
  for (int i = 0; i < nk; ++i) {
    qk.basis.push_back(g.labels[k[i]]);
    for (int j = 0; j < nk; ++j) {
      int p = pos_in_k[g.mul(k[i], k[j])];
      if (p < 0) throw ModelError("NotASubgroup", "subgroup not closed");
      qk.c[i][j][p] = 1;
    }
  }
  qk.unit = Mat(nk, 1);
  qk.unit(pos_in_k[g.identity], 0) = 1;
  return qk;
}

Bimodule cover_bimodule(const CoverSpec& cover) {
  const FiniteGroup& g = cover.G;
  Algebra qg = group_algebra(g);
  Bimodule m;
  m.A = qg;
  m.R = subgroup_algebra(g, cover.K);
  m.dim = g.order;
  for (int i = 0; i < g.order; ++i) m.left.push_back(qg.lmul(i));
  for (int j = 0; j < static_cast<int>(cover.K.size()); ++j)
    m.right.push_back(qg.rmul(cover.K[j]));
  Mat w(g.order, static_cast<int>(cover.coset_reps.size()));
  for (size_t t = 0; t < cover.coset_reps.size(); ++t)
    w(cover.coset_reps[t], static_cast<int>(t)) = 1;
  m.witness = w;
  return m;
}

CrossModelReport cross_model_check(const CoverSpec& cover) {
  CrossModelReport rep;
  rep.transfer = loop_transfer(cover);
  const FiniteGroup& g = cover.G;

  Bimodule m = cover_bimodule(cover);
  const Algebra& qg = m.A;
  const Algebra& qk = m.R;
  Mat tr = evaluate_trace(m);

  // identify HH0 quotient axes with conjugacy classes
  HH0Space hA = shadow_hh0(regular_bimodule(qg));
  HH0Space hR = shadow_hh0(regular_bimodule(qk));
  std::vector<int> gclass_of(g.order, -1), kclass_of(g.order, -1);
  for (size_t c = 0; c < cover.gclasses.size(); ++c)
    for (int x : cover.gclasses[c].elements)
      gclass_of[x] = static_cast<int>(c);
  for (size_t c = 0; c < cover.kclasses.size(); ++c)
    for (int x : cover.kclasses[c].elements)
      kclass_of[x] = static_cast<int>(c);
  if (hA.dim() != static_cast<int>(cover.gclasses.size()) ||
      hR.dim() != static_cast<int>(cover.kclasses.size())) {
    rep.message = "HH0 dimension does not match the class count";
    return rep;
  }
  std::vector<int> col_of(cover.gclasses.size(), -1);
  for (int i = 0; i < hA.dim(); ++i) col_of[gclass_of[hA.q.basis[i]]] = i;
  std::vector<int> row_of(cover.kclasses.size(), -1);
  for (int i = 0; i < hR.dim(); ++i)
    row_of[kclass_of[cover.K[hR.q.basis[i]]]] = i;

  rep.bimod_trace = Mat(hR.dim(), hA.dim());
  bool ok = true;
  for (size_t r = 0; r < cover.kclasses.size(); ++r)
    for (size_t c = 0; c < cover.gclasses.size(); ++c) {
      // the trace is computed on the HH0 representative of the class; the
      // representative axis may differ from the canonical class rep, but
      // both lie in one class so the column agrees
      Rat v = tr(row_of[r], col_of[c]);
      rep.bimod_trace(static_cast<int>(r), static_cast<int>(c)) = v;
      if (v != Rat(rep.transfer.entries[r][c])) ok = false;
    }
  rep.pass = ok;
  rep.message = ok ? "trace and loop transfer agree"
                   : "trace and loop transfer disagree";
  return rep;
}

std::string render_table(const TransferMatrix& t) {
  size_t wlabel = 0;
  for (auto& s : t.row_labels) wlabel = std::max(wlabel, s.size());
  std::vector<size_t> wcol(t.col_labels.size());
  for (size_t c = 0; c < t.col_labels.size(); ++c) {
    wcol[c] = t.col_labels[c].size();
    for (auto& row : t.entries)
      wcol[c] = std::max(wcol[c], std::to_string(row[c]).size());
  }
  std::ostringstream os;
  os << std::string(wlabel, ' ');
  for (size_t c = 0; c < t.col_labels.size(); ++c) {
    os << "  ";
    os << std::string(wcol[c] - t.col_labels[c].size(), ' ') << t.col_labels[c];
  }
  os << "\n";
  for (size_t r = 0; r < t.row_labels.size(); ++r) {
    os << t.row_labels[r]
       << std::string(wlabel - t.row_labels[r].size(), ' ');
    for (size_t c = 0; c < t.col_labels.size(); ++c) {
      std::string v = std::to_string(t.entries[r][c]);
      os << "  " << std::string(wcol[c] - v.size(), ' ') << v;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace bicat
