#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "bicat/groupmod.hpp"

using namespace bicat;

namespace {

std::vector<int> a3_elements(const FiniteGroup& s3) {
  std::vector<int> out;
  for (auto& c : conjugacy_classes(s3))
    if (c.elements.size() != 3)
      for (int x : c.elements) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

int class_index_of(const std::vector<ConjClass>& classes, int elem) {
  for (size_t i = 0; i < classes.size(); ++i)
    if (std::count(classes[i].elements.begin(), classes[i].elements.end(),
                   elem))
      return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_CASE("group construction and validation") {
  FiniteGroup z4 = cyclic_group(4);
  CHECK(z4.order == 4);
  CHECK(z4.identity == 0);
  CHECK(z4.inv(1) == 3);

  FiniteGroup s3 = symmetric_group(3);
  CHECK(s3.order == 6);
  CHECK(conjugacy_classes(s3).size() == 3);

  FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
  CHECK(v4.order == 4);
  CHECK(conjugacy_classes(v4).size() == 4);

  std::vector<std::vector<int>> not_assoc = {{0, 1, 2}, {1, 2, 0}, {2, 1, 0}};
  CHECK_THROWS_AS(group_from_table(not_assoc), ModelError);
  std::vector<std::vector<int>> no_id = {{1, 1}, {1, 1}};
  CHECK_THROWS_WITH_AS(group_from_table(no_id),
                       doctest::Contains("identity"), ModelError);
}

TEST_CASE("cover construction") {
  FiniteGroup z4 = cyclic_group(4);
  CoverSpec c = build_cover(z4, {0, 2});
  CHECK(c.coset_reps.size() == 2);
  CHECK(c.gclasses.size() == 4);
  CHECK(c.kclasses.size() == 2);

  CHECK_THROWS_WITH_AS(build_cover(z4, {0, 1}),
                       doctest::Contains("NotASubgroup"), ModelError);
  CHECK_THROWS_WITH_AS(build_cover(z4, {0, 1, 3}),
                       doctest::Contains("not closed"), ModelError);

  FiniteGroup s3 = symmetric_group(3);
  CoverSpec cs = build_cover(s3, a3_elements(s3));
  CHECK(cs.coset_reps.size() == 2);
  CHECK(cs.gclasses.size() == 3);
  CHECK(cs.kclasses.size() == 3);
}

TEST_CASE("loop transfer for Z/4 over Z/2") {
  FiniteGroup z4 = cyclic_group(4);
  CoverSpec c = build_cover(z4, {0, 2});
  TransferMatrix t = loop_transfer(c);
  // columns [0], [2] map to twice their own class; [1], [3] die
  REQUIRE(t.entries.size() == 2);
  REQUIRE(t.entries[0].size() == 4);
  // row order: [0], [2]; column order: [0], [1], [2], [3]
  CHECK(t.entries[0] == std::vector<long long>{2, 0, 0, 0});
  CHECK(t.entries[1] == std::vector<long long>{0, 0, 2, 0});
}

TEST_CASE("loop transfer for the trivial cover is the identity") {
  FiniteGroup s3 = symmetric_group(3);
  std::vector<int> all;
  for (int i = 0; i < s3.order; ++i) all.push_back(i);
  TransferMatrix t = loop_transfer(build_cover(s3, all));
  for (size_t r = 0; r < t.entries.size(); ++r)
    for (size_t c = 0; c < t.entries[r].size(); ++c)
      CHECK(t.entries[r][c] == (r == c ? 1 : 0));
}

TEST_CASE("loop transfer for S3 over A3") {
  FiniteGroup s3 = symmetric_group(3);
  CoverSpec c = build_cover(s3, a3_elements(s3));
  TransferMatrix t = loop_transfer(c);
  // [e] -> 2[e]; the 3-cycle class of G splits into both 3-cycle classes
  // of K with coefficient 1; transpositions -> 0
  int ge = class_index_of(c.gclasses, s3.identity);
  int ke = class_index_of(c.kclasses, s3.identity);
  REQUIRE(c.kclasses.size() == 3);
  REQUIRE(c.gclasses.size() == 3);
  for (size_t r = 0; r < 3; ++r)
    CHECK(t.entries[r][ge] == (static_cast<int>(r) == ke ? 2 : 0));
  int g3 = -1, gt = -1;
  for (size_t i = 0; i < 3; ++i) {
    if (static_cast<int>(i) == ge) continue;
    (c.gclasses[i].elements.size() == 2 ? g3 : gt) = static_cast<int>(i);
  }
  REQUIRE(g3 >= 0);
  REQUIRE(gt >= 0);
  for (size_t r = 0; r < 3; ++r) {
    CHECK(t.entries[r][g3] == (static_cast<int>(r) == ke ? 0 : 1));
    CHECK(t.entries[r][gt] == 0);
  }
}

TEST_CASE("Becker-Gottlieb composite equals the sheet count") {
  FiniteGroup z4 = cyclic_group(4);
  CHECK(becker_gottlieb_composite(build_cover(z4, {0, 2})) == 2);
  CHECK(becker_gottlieb_composite(build_cover(z4, {0, 1, 2, 3})) == 1);
  FiniteGroup s3 = symmetric_group(3);
  CHECK(becker_gottlieb_composite(build_cover(s3, {s3.identity})) == 6);
}

TEST_CASE("Euler composite in the abelian regime") {
  FiniteGroup z4 = cyclic_group(4);
  auto e = euler_composite(build_cover(z4, {0, 2}));
  REQUIRE(e.size() == 2);
  CHECK(e[0] == std::vector<long long>{2, 0});
  CHECK(e[1] == std::vector<long long>{0, 2});

  auto id = euler_composite(build_cover(z4, {0, 1, 2, 3}));
  for (size_t r = 0; r < id.size(); ++r)
    for (size_t c = 0; c < id.size(); ++c)
      CHECK(id[r][c] == (r == c ? 1 : 0));

  FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
  // diagonal Z/2 = {(0,0), (1,1)} = indices {0, 3}
  auto d = euler_composite(build_cover(v4, {0, 3}));
  REQUIRE(d.size() == 2);
  CHECK(d[0] == std::vector<long long>{2, 0});
  CHECK(d[1] == std::vector<long long>{0, 2});
}

TEST_CASE("transfer is independent of representative choices") {
  FiniteGroup s3 = symmetric_group(3);
  CoverSpec c = build_cover(s3, a3_elements(s3));
  TransferMatrix base = loop_transfer(c);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CoverSpec mod = c;
    // replace each coset representative x_i by x_i k
    for (int& x : mod.coset_reps) {
      int k = mod.K[rng() % mod.K.size()];
      x = s3.mul(x, k);
    }
    // replace each class representative by a random conjugate
    for (auto& cl : mod.gclasses)
      cl.rep = cl.elements[rng() % cl.elements.size()];
    TransferMatrix t = loop_transfer(mod);
    CHECK(t.entries == base.entries);
  }
}

TEST_CASE("transfer functoriality down a subgroup chain") {
  // Z/2 = {0,4} inside Z/4 = {0,2,4,6} inside Z/8
  FiniteGroup z8 = cyclic_group(8);
  TransferMatrix gk = loop_transfer(build_cover(z8, {0, 4}));
  TransferMatrix gh = loop_transfer(build_cover(z8, {0, 2, 4, 6}));
  // the middle cover Z/4 over Z/2 with the subgroup as its own group;
  // element i of Z/4 corresponds to 2i in Z/8
  FiniteGroup z4 = cyclic_group(4);
  TransferMatrix hk = loop_transfer(build_cover(z4, {0, 2}));
  // column/row orders line up: class j of the middle group is element 2j
  for (size_t r = 0; r < gk.entries.size(); ++r)
    for (size_t c = 0; c < gk.entries[r].size(); ++c) {
      long long sum = 0;
      for (size_t m = 0; m < gh.entries.size(); ++m)
        sum += hk.entries[r][m] * gh.entries[m][c];
      CHECK(gk.entries[r][c] == sum);
    }
}

TEST_CASE("column sums are bounded by the index") {
  FiniteGroup s3 = symmetric_group(3);
  for (auto& k : {a3_elements(s3), std::vector<int>{s3.identity}}) {
    CoverSpec c = build_cover(s3, k);
    TransferMatrix t = loop_transfer(c);
    long long index = static_cast<long long>(c.coset_reps.size());
    for (size_t w = 0; w < c.gclasses.size(); ++w) {
      long long sum = 0;
      for (auto& row : t.entries) sum += row[w];
      CHECK(sum <= index);
      if (c.gclasses[w].rep == s3.identity) CHECK(sum == index);
    }
  }
}

TEST_CASE("cross-model agreement") {
  FiniteGroup z4 = cyclic_group(4);
  CHECK(cross_model_check(build_cover(z4, {0, 2})).pass);

  FiniteGroup s3 = symmetric_group(3);
  CHECK(cross_model_check(build_cover(s3, a3_elements(s3))).pass);

  FiniteGroup z3 = cyclic_group(3);
  CrossModelReport r = cross_model_check(build_cover(z3, {0, 1, 2}));
  CHECK(r.pass);
  CHECK(r.bimod_trace == Mat::identity(3));
}

TEST_CASE("table rendering is aligned") {
  FiniteGroup z4 = cyclic_group(4);
  TransferMatrix t = loop_transfer(build_cover(z4, {0, 2}));
  std::string s = render_table(t);
  CHECK(s.find("2") != std::string::npos);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);  // header + two rows
}
