#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/groupmod.hpp"

using namespace bicat;

namespace {

// Q[x]/(x^2): basis {1, x}
Algebra dual_numbers() {
  Algebra a;
  a.dim = 2;
  a.basis = {"1", "x"};
  a.c.assign(2, std::vector<std::vector<Rat>>(2, std::vector<Rat>(2, Rat(0))));
  a.c[0][0][0] = 1;
  a.c[0][1][1] = 1;
  a.c[1][0][1] = 1;
  a.unit = Mat(2, 1);
  a.unit(0, 0) = 1;
  return a;
}

}  // namespace

TEST_CASE("algebra validation") {
  CHECK_NOTHROW(validate_algebra(rational_algebra()));
  CHECK_NOTHROW(validate_algebra(dual_numbers()));
  CHECK_NOTHROW(validate_algebra(group_algebra(symmetric_group(3))));

  Algebra bad = dual_numbers();
  bad.c[1][1][0] = 1;  // x^2 = 1: this is Q[x]/(x^2-1), still fine
  CHECK_NOTHROW(validate_algebra(bad));
  bad.c[1][0][1] = 0;
  bad.c[1][0][0] = 1;  // x*1 = 1 breaks associativity of (x,x,x)
  CHECK_THROWS_AS(validate_algebra(bad), ModelError);

  Algebra nounit = dual_numbers();
  nounit.unit(0, 0) = 2;
  CHECK_THROWS_AS(validate_algebra(nounit), ModelError);
}

TEST_CASE("bimodule validation and freeness") {
  CHECK_NOTHROW(validate_bimodule(free_rational_module(3)));
  CHECK_NOTHROW(validate_bimodule(regular_bimodule(dual_numbers())));
  CHECK_NOTHROW(validate_bimodule(regular_bimodule(group_algebra(
      cyclic_group(4)))));

  Bimodule bad = free_rational_module(2);
  bad.witness = Mat(2, 1);  // wrong rank
  CHECK_THROWS_WITH_AS(validate_bimodule(bad),
                       doctest::Contains("witness"), ModelError);

  Bimodule dep = free_rational_module(2);
  Mat w(2, 2);
  w(0, 0) = 1;
  w(0, 1) = 1;  // two parallel generators are not a basis
  dep.witness = w;
  CHECK_THROWS_AS(validate_bimodule(dep), ModelError);
}

TEST_CASE("tensor product dimensions") {
  // M (x)_R R is M again
  Algebra d = dual_numbers();
  Bimodule reg = regular_bimodule(d);
  TensorResult t = tensor_over(reg, reg);
  CHECK(t.prod.dim == 2);
  CHECK_NOTHROW(validate_bimodule(t.prod));

  // Q^2 (x)_Q Q^3 has dimension 6
  TensorResult t2 = tensor_over(free_rational_module(2),
                                free_rational_module(3));
  CHECK(t2.prod.dim == 6);

  // QG (x)_QK QK for G = Z/4, K = {0,2} has dimension 4
  FiniteGroup z4 = cyclic_group(4);
  CoverSpec cover = build_cover(z4, {0, 2});
  Bimodule m = cover_bimodule(cover);
  TensorResult t3 = tensor_over(m, regular_bimodule(m.R));
  CHECK(t3.prod.dim == 4);
}

TEST_CASE("shadow as HH0") {
  CHECK(shadow_hh0(regular_bimodule(rational_algebra())).dim() == 1);
  // commutative algebras have vanishing commutators
  CHECK(shadow_hh0(regular_bimodule(dual_numbers())).dim() == 2);
  // QS3: one dimension per conjugacy class
  CHECK(shadow_hh0(regular_bimodule(group_algebra(symmetric_group(3))))
            .dim() == 3);
}

TEST_CASE("dualization") {
  // R over (R, R): DM has the same dimension, triangles verified inside
  Algebra d = dual_numbers();
  DualData dd = dualize(regular_bimodule(d));
  CHECK(dd.DM.dim == 2);
  CHECK_NOTHROW(validate_bimodule(dd.DM));

  DualData dq = dualize(free_rational_module(3));
  CHECK(dq.DM.dim == 3);

  // QG over (QG, QK) for G = S3, K = A3
  FiniteGroup s3 = symmetric_group(3);
  std::vector<int> a3;
  for (auto& c : conjugacy_classes(s3))
    for (int x : c.elements)
      if (c.elements.size() != 3) a3.push_back(x);  // exclude transpositions
  CoverSpec cover = build_cover(s3, a3);
  CHECK_NOTHROW(dualize(cover_bimodule(cover)));

  Bimodule nowit = regular_bimodule(d);
  nowit.witness.reset();
  CHECK_THROWS_WITH_AS(dualize(nowit), doctest::Contains("witness"),
                       ModelError);
}

TEST_CASE("trace of free rational modules") {
  for (int n : {0, 1, 4}) {
    Mat tr = evaluate_trace(free_rational_module(n));
    REQUIRE(tr.rows == 1);
    REQUIRE(tr.cols == 1);
    CHECK(tr(0, 0) == n);
    CHECK(hattori_stallings_oracle(free_rational_module(n)) == tr);
  }
}

TEST_CASE("trace of the unit bimodule is the identity on HH0") {
  for (const Algebra& a :
       {dual_numbers(), group_algebra(symmetric_group(3)),
        group_algebra(cyclic_group(5))}) {
    Bimodule reg = regular_bimodule(a);
    int h = shadow_hh0(reg).dim();
    CHECK(evaluate_trace(reg) == Mat::identity(h));
    CHECK(hattori_stallings_oracle(reg) == Mat::identity(h));
  }
}

TEST_CASE("oracle equivalence on structured examples") {
  FiniteGroup z4 = cyclic_group(4);
  CoverSpec cover = build_cover(z4, {0, 2});
  Bimodule m = cover_bimodule(cover);
  CHECK(evaluate_trace(m) == hattori_stallings_oracle(m));

  FiniteGroup s3 = symmetric_group(3);
  CoverSpec trivial = build_cover(s3, {s3.identity});
  CHECK(evaluate_trace(cover_bimodule(trivial)) ==
        hattori_stallings_oracle(cover_bimodule(trivial)));
}

TEST_CASE("additivity of the trace") {
  FiniteGroup z4 = cyclic_group(4);
  Bimodule m = cover_bimodule(build_cover(z4, {0, 2}));
  Bimodule s = direct_sum(m, m);
  CHECK_NOTHROW(validate_bimodule(s));
  CHECK(evaluate_trace(s) == evaluate_trace(m) + evaluate_trace(m));

  Bimodule mixed = direct_sum(free_rational_module(2),
                              free_rational_module(3));
  CHECK(evaluate_trace(mixed)(0, 0) == 5);
}

TEST_CASE("functoriality of the trace over tensor composition") {
  // M = QG over (QG, QK), N = QK over (QK, Q); the composite trace factors
  FiniteGroup z4 = cyclic_group(4);
  CoverSpec cover = build_cover(z4, {0, 2});
  Bimodule m = cover_bimodule(cover);
  // QK as a (QK, Q)-module: free with the subgroup elements as generators
  Bimodule n;
  n.A = m.R;
  n.R = rational_algebra();
  n.dim = m.R.dim;
  for (int i = 0; i < n.A.dim; ++i) n.left.push_back(n.A.lmul(i));
  n.right = {Mat::identity(n.dim)};
  n.witness = Mat::identity(n.dim);
  validate_bimodule(n);

  TensorResult mn = tensor_over(m, n);
  REQUIRE(mn.prod.witness);
  Mat composite = evaluate_trace(mn.prod);
  Mat factored = evaluate_trace(n) * evaluate_trace(m);
  CHECK(composite == factored);
}

TEST_CASE("descended factor swap is an involution on HH0") {
  for (const Bimodule& m :
       {regular_bimodule(dual_numbers()),
        cover_bimodule(build_cover(cyclic_group(4), {0, 2}))}) {
    DualData d = dualize(m);
    HH0Space h1 = shadow_hh0(d.MDM.prod);
    HH0Space h2 = shadow_hh0(d.DMM.prod);
    int md = m.dim, dd = d.DM.dim;
    Mat fwd(dd * md, md * dd), bwd(md * dd, dd * md);
    for (int i = 0; i < md; ++i)
      for (int x = 0; x < dd; ++x) {
        fwd(x * md + i, i * dd + x) = 1;
        bwd(i * dd + x, x * md + i) = 1;
      }
    Mat theta =
        h2.q.proj * d.DMM.q.proj * fwd * d.MDM.q.section * h1.q.section;
    Mat theta_back =
        h1.q.proj * d.MDM.q.proj * bwd * d.DMM.q.section * h2.q.section;
    CHECK(theta_back * theta == Mat::identity(h1.dim()));
    CHECK(theta * theta_back == Mat::identity(h2.dim()));
  }
}
