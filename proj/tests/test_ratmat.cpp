#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/ratmat.hpp"

using namespace bicat;

TEST_CASE("rational parsing and rendering") {
  CHECK(render_rat(parse_rat("3/6")) == "1/2");
  CHECK(render_rat(parse_rat("-4/2")) == "-2");
  CHECK(render_rat(parse_rat("7")) == "7");
  CHECK(render_rat(Rat(0)) == "0");
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
}

TEST_CASE("matrix arithmetic") {
  Mat a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 4;
  Mat i = Mat::identity(2);
  CHECK(a * i == a);
  CHECK(a - a == Mat::zero(2, 2));
  CHECK((a + a) == Rat(2) * a);
  Mat b = a * a;
  CHECK(b(0, 0) == 7);
  CHECK(b(1, 1) == 22);
}

TEST_CASE("rref, rank, solve, inverse") {
  Mat a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 4;
  a(1, 1) = 3;
  CHECK(rank(a) == 2);
  auto ai = inverse(a);
  REQUIRE(ai);
  CHECK(*ai * a == Mat::identity(2));

  Mat sing(2, 2);
  sing(0, 0) = 1;
  sing(0, 1) = 2;
  sing(1, 0) = 2;
  sing(1, 1) = 4;
  CHECK(rank(sing) == 1);
  CHECK(!inverse(sing));

  Mat b(2, 1);
  b(0, 0) = 1;
  b(1, 0) = 1;
  auto x = solve(a, b);
  REQUIRE(x);
  CHECK(a * *x == b);

  Mat bad(2, 1);
  bad(0, 0) = 1;
  bad(1, 0) = 3;
  CHECK(!solve(sing, bad));
}

TEST_CASE("quotient spaces") {
  // Q^3 / span{ e0 - e1 }
  Mat rel(3, 1);
  rel(0, 0) = 1;
  rel(1, 0) = -1;
  Quotient q = quotient_by(3, rel);
  CHECK(q.dim() == 2);
  CHECK((q.proj * rel).is_zero());
  CHECK(q.proj * q.section == Mat::identity(2));
  // e0 and e1 land on the same class
  Mat e0(3, 1), e1(3, 1);
  e0(0, 0) = 1;
  e1(1, 0) = 1;
  CHECK(q.proj * e0 == q.proj * e1);

  Quotient trivial = quotient_by(3, Mat(3, 0));
  CHECK(trivial.dim() == 3);
  CHECK(trivial.proj == Mat::identity(3));

  Quotient everything = quotient_by(2, Mat::identity(2));
  CHECK(everything.dim() == 0);
}
