#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "bicat/dsl.hpp"
#include "bicat/modeljson.hpp"

// Acceptance harness: seven self-contained checks combining exact golden
// values with randomized property suites. Prints exactly one PASS/FAIL
// line per criterion, each with a pinned wall-clock budget; exits 0 iff
// every criterion passes within budget.

namespace fs = std::filesystem;
using namespace bicat;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_root = ".";
std::mt19937 g_rng(20260823);

int rnd(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g_rng);
}

template <typename T>
const T& pick(const std::vector<T>& v) {
  return v[rnd(0, static_cast<int>(v.size()) - 1)];
}

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

bool criterion(int id, const std::string& name, double budget_s,
               const std::function<std::string()>& body) {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > budget_s) {
    ok = false;
    detail += " [over budget]";
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << "criterion " << id << " (" << name << "): "
       << (ok ? "PASS" : "FAIL") << " " << detail << " (" << secs << "s <= "
       << budget_s << "s)";
  std::cout << line.str() << std::endl;
  return ok;
}

// ---------------------------------------------------------------------------
// group helpers

std::vector<int> cyclic_subgroup_of(const FiniteGroup& g) {
  std::vector<int> gens;
  int count = rnd(0, 2);
  for (int i = 0; i < count; ++i) gens.push_back(rnd(0, g.order - 1));
  return generated_subgroup(g, gens);
}

FiniteGroup dihedral_group(int n) {
  std::vector<int> rot, refl_a, refl_b;
  for (int i = 0; i < n; ++i) rot.push_back(i);
  // reflection: i -> n - i mod n, written as 2-cycles
  std::vector<std::vector<int>> gens_rot{rot}, gens_refl;
  for (int i = 1; 2 * i < n; ++i) gens_refl.push_back({i, n - i});
  return group_from_permutations(n, {gens_rot, gens_refl});
}

FiniteGroup random_abelian(int max_order, int min_factors) {
  std::vector<int> primes{2, 3, 4, 5, 7, 8, 9};
  for (;;) {
    FiniteGroup g = cyclic_group(pick(primes));
    int factors = 1;
    while (rnd(0, 1) || factors < min_factors) {
      int f = pick(primes);
      if (g.order * f > max_order) break;
      g = direct_product(g, cyclic_group(f));
      ++factors;
    }
    if (factors >= min_factors && g.order <= max_order) return g;
  }
}

long long column_sum(const TransferMatrix& t, size_t col) {
  long long s = 0;
  for (auto& row : t.entries) s += row[col];
  return s;
}

void check_abelian_cover(const FiniteGroup& g, const std::vector<int>& k) {
  CoverSpec c = build_cover(g, k);
  long long index = static_cast<long long>(c.coset_reps.size());
  auto e = euler_composite(c);
  require(e.size() == c.kclasses.size(), "euler composite has wrong shape");
  for (size_t r = 0; r < e.size(); ++r)
    for (size_t cc = 0; cc < e[r].size(); ++cc)
      require(e[r][cc] == (r == cc ? index : 0),
              "euler composite is not index * identity");
  TransferMatrix t = loop_transfer(c);
  std::vector<bool> in_k(g.order, false);
  for (int x : c.K) in_k[x] = true;
  for (size_t w = 0; w < c.gclasses.size(); ++w) {
    bool meets = false;
    for (int x : c.gclasses[w].elements) meets |= in_k[x];
    require(column_sum(t, w) == (meets ? index : 0),
            "column degree violates the index law");
  }
}

// ---------------------------------------------------------------------------
// bimodule helpers

Algebra poly_mod_square(Rat x_squared) {
  Algebra a;
  a.dim = 2;
  a.basis = {"1", "x"};
  a.c.assign(2, std::vector<std::vector<Rat>>(2, std::vector<Rat>(2, Rat(0))));
  a.c[0][0][0] = 1;
  a.c[0][1][1] = 1;
  a.c[1][0][1] = 1;
  a.c[1][1][0] = x_squared;
  a.unit = Mat(2, 1);
  a.unit(0, 0) = 1;
  return a;
}

std::vector<Algebra> algebra_pool() {
  return {rational_algebra(),
          poly_mod_square(Rat(0)),   // dual numbers
          poly_mod_square(Rat(1)),   // Q x Q in disguise
          group_algebra(cyclic_group(2)),
          group_algebra(cyclic_group(3)),
          group_algebra(cyclic_group(4)),
          group_algebra(direct_product(cyclic_group(2), cyclic_group(2)))};
}

Mat random_unimodular(int n) {
  Mat p = Mat::identity(n);
  for (int ops = 0; ops < 2 * n; ++ops) {
    int i = rnd(0, n - 1), j = rnd(0, n - 1);
    if (i == j) continue;
    Rat r(rnd(-2, 2));
    for (int c = 0; c < n; ++c) p(i, c) = p(i, c) + r * p(j, c);
  }
  return p;
}

// Change of basis: an isomorphic copy of the same bimodule.
Bimodule conjugate(const Bimodule& m) {
  Mat p = random_unimodular(m.dim);
  Mat pinv = *inverse(p);
  Bimodule out = m;
  for (auto& a : out.left) a = pinv * a * p;
  for (auto& a : out.right) a = pinv * a * p;
  if (out.witness) out.witness = pinv * *out.witness;
  return out;
}

std::vector<Bimodule> bimodule_pool() {
  std::vector<Bimodule> out;
  for (const Algebra& a : algebra_pool())
    if (a.dim <= 4) out.push_back(regular_bimodule(a));
  for (int n : {1, 2, 3}) out.push_back(free_rational_module(n));
  out.push_back(cover_bimodule(build_cover(cyclic_group(4), {0, 2})));
  out.push_back(cover_bimodule(
      build_cover(direct_product(cyclic_group(2), cyclic_group(2)), {0, 1})));
  return out;
}

// ---------------------------------------------------------------------------
// criteria

std::string c1_covering_degrees(std::vector<std::pair<FiniteGroup,
                                                      std::vector<int>>>*
                                    small_covers) {
  int covers = 0;
  // exhaustive over cyclic groups: subgroups of Z/n are <d> for d | n
  for (int n = 1; n <= 64; ++n) {
    FiniteGroup g = cyclic_group(n);
    for (int d = 1; d <= n; ++d) {
      if (n % d) continue;
      std::vector<int> k = generated_subgroup(g, {d % n});
      check_abelian_cover(g, k);
      if (n <= 24) small_covers->emplace_back(g, k);
      ++covers;
    }
  }
  // randomized products of cyclic groups
  for (int trial = 0; trial < 50; ++trial) {
    FiniteGroup g = random_abelian(64, 2);
    std::vector<int> k = cyclic_subgroup_of(g);
    check_abelian_cover(g, k);
    if (g.order <= 24) small_covers->emplace_back(g, k);
    ++covers;
  }
  return std::to_string(covers) + " abelian covers";
}

std::string c2_golden_table() {
  json gdoc = json::parse([&] {
    std::ifstream in(g_root + "/models/s3.json");
    require(static_cast<bool>(in), "missing models/s3.json");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }());
  FiniteGroup s3 = group_from_json(gdoc);
  CoverSpec c = build_cover(s3, subgroup_from_spec(gdoc, "a3"));
  TransferMatrix t = loop_transfer(c);

  // the three mapping facts, stated directly
  require(t.entries.size() == 3 && t.entries[0].size() == 3,
          "S3/A3 transfer has wrong shape");
  for (size_t r = 0; r < 3; ++r) {
    // identity column: 2 on the identity row
    require(t.entries[r][0] == (t.row_labels[r] == "e" ? 2 : 0),
            "identity class column is wrong");
  }
  for (size_t w = 0; w < 3; ++w) {
    bool transp = c.gclasses[w].elements.size() == 3;
    bool threecyc = c.gclasses[w].elements.size() == 2;
    for (size_t r = 0; r < 3; ++r) {
      if (transp)
        require(t.entries[r][w] == 0, "transposition column must vanish");
      else if (threecyc)
        require(t.entries[r][w] == (t.row_labels[r] == "e" ? 0 : 1),
                "3-cycle class must split with coefficient 1");
    }
  }

  // byte-identical against the shipped golden JSON
  json out = transfer_to_json(t);
  out["index"] = static_cast<long long>(c.coset_reps.size());
  std::ifstream in(g_root + "/models/golden_s3_a3_transfer.json");
  require(static_cast<bool>(in), "missing golden transfer file");
  std::ostringstream os;
  os << in.rdbuf();
  require(out.dump(2) + "\n" == os.str(),
          "JSON output drifted from the golden file");
  return "byte-identical golden match";
}

std::string c3_becker_gottlieb() {
  std::vector<FiniteGroup> pool;
  for (int n : {6, 20, 48, 97, 200}) pool.push_back(cyclic_group(n));
  pool.push_back(symmetric_group(3));
  pool.push_back(symmetric_group(4));
  pool.push_back(dihedral_group(8));
  pool.push_back(dihedral_group(15));
  pool.push_back(direct_product(symmetric_group(3), cyclic_group(4)));
  pool.push_back(direct_product(symmetric_group(3), symmetric_group(3)));
  int nonabelian = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteGroup& g = pool[trial % pool.size()];
    require(g.order <= 200, "pool group too large");
    std::vector<int> gens;
    for (int i = rnd(1, 2); i > 0; --i) gens.push_back(rnd(0, g.order - 1));
    std::vector<int> k = generated_subgroup(g, gens);
    CoverSpec c = build_cover(g, k);
    bool ab = true;
    for (int i = 0; ab && i < g.order; ++i)
      for (int j = i + 1; j < g.order; ++j)
        if (g.mul(i, j) != g.mul(j, i)) {
          ab = false;
          break;
        }
    nonabelian += !ab;
    require(becker_gottlieb_composite(c) ==
                static_cast<long long>(c.coset_reps.size()),
            "round-trip composite is not the sheet count");
  }
  require(nonabelian >= 20, "too few nonabelian instances");
  return "100 covers (" + std::to_string(nonabelian) + " nonabelian)";
}

std::string c4_trace_oracle(
    const std::vector<std::pair<FiniteGroup, std::vector<int>>>& small_covers) {
  std::vector<Bimodule> pool = bimodule_pool();
  int modules = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Bimodule m = pick(pool);
    if (m.dim * 2 <= 8 && rnd(0, 1)) m = direct_sum(m, m);
    require(m.A.dim <= 4 && m.R.dim <= 4 && m.dim <= 8, "pool out of range");
    m = conjugate(m);
    validate_bimodule(m);
    require(evaluate_trace(m) == hattori_stallings_oracle(m),
            "composite trace disagrees with the dual-basis oracle");
    ++modules;
  }
  int crosses = 0;
  for (auto& [g, k] : small_covers) {
    CrossModelReport r = cross_model_check(build_cover(g, k));
    require(r.pass, "cross-model disagreement: " + r.message);
    ++crosses;
  }
  require(crosses > 0, "no small covers collected");
  return std::to_string(modules) + " random bimodules, " +
         std::to_string(crosses) + " cross-model covers";
}

std::string c5_additivity_functoriality() {
  std::vector<Bimodule> pool = bimodule_pool();
  for (int trial = 0; trial < 100; ++trial) {
    const Bimodule& a = pick(pool);
    // a partner over the same pair of algebras
    std::vector<const Bimodule*> mates;
    for (const Bimodule& b : pool)
      if (b.A == a.A && b.R == a.R) mates.push_back(&b);
    Bimodule m = conjugate(a);
    Bimodule n = conjugate(*mates[rnd(0, static_cast<int>(mates.size()) - 1)]);
    require(evaluate_trace(direct_sum(m, n)) ==
                evaluate_trace(m) + evaluate_trace(n),
            "trace is not additive");
  }
  std::vector<FiniteGroup> gpool{cyclic_group(24), cyclic_group(36),
                                 symmetric_group(4),
                                 dihedral_group(12),
                                 direct_product(symmetric_group(3),
                                                cyclic_group(4))};
  for (int trial = 0; trial < 50; ++trial) {
    const FiniteGroup& g = gpool[trial % gpool.size()];
    std::vector<int> h = cyclic_subgroup_of(g);
    FiniteGroup hg = subgroup_as_group(g, h);
    std::vector<int> k_in_h = cyclic_subgroup_of(hg);
    std::vector<int> k;
    for (int i : k_in_h) k.push_back(h[i]);
    TransferMatrix gk = loop_transfer(build_cover(g, k));
    TransferMatrix gh = loop_transfer(build_cover(g, h));
    TransferMatrix hk = loop_transfer(build_cover(hg, k_in_h));
    require(gk.entries.size() == hk.entries.size() &&
                gh.entries.size() == hk.entries[0].size(),
            "chain shapes do not compose");
    for (size_t r = 0; r < gk.entries.size(); ++r)
      for (size_t c = 0; c < gk.entries[r].size(); ++c) {
        long long sum = 0;
        for (size_t m2 = 0; m2 < gh.entries.size(); ++m2)
          sum += hk.entries[r][m2] * gh.entries[m2][c];
        require(gk.entries[r][c] == sum,
                "transfer does not compose along the chain");
      }
  }
  return "100 direct sums, 50 subgroup chains";
}

std::string c6_symbolic_corpus() {
  auto thms = shipped_theorems();
  for (const Theorem& t : thms) {
    auto rules = builtin_rules(t.sig);
    require(verify_script(t.sig, rules, t.script).proved(),
            "shipped script failed: " + t.name);
    fs::path p = fs::path(g_root) / "theorems" / (t.name + ".st");
    std::ifstream in(p);
    require(static_cast<bool>(in), "missing corpus file " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    DslDocument doc = parse_document(os.str());
    require(run_document(doc).all_ok(),
            "corpus file does not verify: " + t.name);
    require(print_document(doc) == theorem_to_dsl(t),
            "corpus file drifted: " + t.name);
  }

  // re-prove theta^2 = id from the axioms by bounded search
  const Theorem* theta = nullptr;
  for (const Theorem& t : thms)
    if (t.name == "theta_squared") theta = &t;
  require(theta != nullptr, "theta_squared missing from the corpus");
  SearchBudget budget;  // depth 8, 1e5 nodes, axioms only
  Certificate c = search_equal(theta->sig, builtin_rules(theta->sig),
                               theta->script.lhs, theta->script.rhs, budget);
  require(c.proved(), "search could not re-prove theta^2 = id");

  // both triangle identities of a composite dual pair, proved by search
  Signature fsig = functoriality_sig();
  DualPairHandle composite = compose_dual_pairs(
      fsig, declared_pair(fsig, 0), declared_pair(fsig, 1));
  require(composite.certificates.size() == 2,
          "composite pair lacks triangle certificates");
  auto frules = builtin_rules(fsig);
  for (auto& script : composite.certificates)
    require(verify_script(fsig, frules, script).proved(),
            "composite triangle certificate does not replay");
  return std::to_string(thms.size()) + " scripts, search re-proofs ok";
}

std::string c7_engine_soundness() {
  // corpus of well-typed expressions, grown by applying random rule steps
  std::vector<std::pair<Signature, Expr>> exprs;
  for (const Theorem& t : shipped_theorems()) {
    exprs.emplace_back(t.sig, t.script.lhs);
    exprs.emplace_back(t.sig, t.script.rhs);
  }
  int applications = 0, idempotence = 0;
  std::map<std::string, std::vector<Rule>> rule_cache;
  while (applications < 10000) {
    // copy: the burst below may grow `exprs` and invalidate references
    auto [sig, e] = exprs[rnd(0, static_cast<int>(exprs.size()) - 1)];
    std::string sig_key = std::to_string(sig.one_gens.size()) + ":" +
                          std::to_string(sig.dual_pairs.size()) + ":" +
                          (sig.two_gens.empty() ? "" : sig.two_gens[0].name);
    auto it = rule_cache.find(sig_key);
    if (it == rule_cache.end())
      it = rule_cache.emplace(sig_key, builtin_rules(sig)).first;
    const auto& rules = it->second;

    auto steps = applicable_steps(sig, rules, e, true);
    if (steps.empty()) continue;  // fully reduced atom: resample
    for (int burst = 0; burst < 25 && applications < 10000; ++burst) {
      auto& [st, result] = steps[rnd(0, static_cast<int>(steps.size()) - 1)];
      // replay through the checker and compare boundaries
      Expr replayed = apply_step(sig, rules, e, st);
      require(eq(replayed, result), "checker replay diverged");
      Bound before = typecheck(sig, e);
      Bound after = typecheck(sig, replayed);
      require(before.src == after.src && before.tgt == after.tgt,
              "rule application changed the boundary");
      ++applications;
      if (burst == 0) {
        Expr n1 = normalize(sig, replayed);
        require(eq(normalize(sig, n1), n1), "normalize is not idempotent");
        ++idempotence;
        if (tree_size(replayed) < 60 && exprs.size() < 600)
          exprs.emplace_back(sig, replayed);
      }
    }
  }

  // representative independence of the transfer
  FiniteGroup s3 = symmetric_group(3);
  std::vector<int> a3;
  for (auto& cl : conjugacy_classes(s3))
    if (cl.elements.size() != 3)
      for (int x : cl.elements) a3.push_back(x);
  std::vector<CoverSpec> covers{
      build_cover(cyclic_group(4), {0, 2}), build_cover(s3, a3),
      build_cover(s3, {s3.identity}),
      build_cover(direct_product(cyclic_group(2), cyclic_group(2)), {0, 3})};
  for (CoverSpec& base : covers) {
    TransferMatrix expected = loop_transfer(base);
    for (int trial = 0; trial < 100; ++trial) {
      CoverSpec mod = base;
      for (int& x : mod.coset_reps)
        x = mod.G.mul(x, pick(mod.K));
      for (auto& cl : mod.gclasses) cl.rep = pick(cl.elements);
      require(loop_transfer(mod).entries == expected.entries,
              "transfer depends on representative choices");
    }
  }
  return std::to_string(applications) + " rule applications, " +
         std::to_string(idempotence) + " idempotence checks, 400 re-choices";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_root = argv[1];
  std::vector<std::pair<FiniteGroup, std::vector<int>>> small_covers;
  bool ok = true;
  ok &= criterion(1, "covering-space degrees", 10.0,
                  [&] { return c1_covering_degrees(&small_covers); });
  ok &= criterion(2, "S3/A3 golden table", 10.0, c2_golden_table);
  ok &= criterion(3, "Becker-Gottlieb compatibility", 30.0,
                  c3_becker_gottlieb);
  ok &= criterion(4, "trace vs dual-basis oracle", 60.0,
                  [&] { return c4_trace_oracle(small_covers); });
  ok &= criterion(5, "additivity and functoriality", 30.0,
                  c5_additivity_functoriality);
  ok &= criterion(6, "symbolic corpus", 20.0, c6_symbolic_corpus);
  ok &= criterion(7, "engine soundness", 60.0, c7_engine_soundness);
  return ok ? 0 : 1;
}
