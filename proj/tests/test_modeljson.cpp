#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bicat/modeljson.hpp"

using namespace bicat;
using nlohmann::json;

TEST_CASE("rationals and matrices") {
  CHECK(rat_from_json(json(3)) == Rat(3));
  CHECK(rat_from_json(json("-5/7")) == Rat(-5, 7));
  CHECK(rat_to_json(Rat(1, 2)) == json("1/2"));
  CHECK_THROWS_AS(rat_from_json(json(1.5)), ModelError);

  Mat m(2, 2);
  m(0, 1) = Rat(3, 4);
  m(1, 0) = -2;
  CHECK(mat_from_json(mat_to_json(m)) == m);
  CHECK_THROWS_AS(mat_from_json(json::parse("[[1, 2], [3]]")), ModelError);
}

TEST_CASE("algebra serialization round trip") {
  for (const Algebra& a :
       {rational_algebra(), group_algebra(cyclic_group(4)),
        group_algebra(symmetric_group(3))}) {
    Algebra back = algebra_from_json(algebra_to_json(a));
    CHECK(back == a);
    CHECK(back.basis == a.basis);
  }
  // implied defaults: unit e0, generated basis labels
  Algebra q = algebra_from_json(
      json::parse(R"({"dim": 1, "structure": [[[1]]]})"));
  CHECK(q == rational_algebra());
  CHECK(q.basis == std::vector<std::string>{"e0"});
  // invalid structure constants are rejected on load
  CHECK_THROWS_AS(algebra_from_json(
                      json::parse(R"({"dim": 1, "structure": [[[2]]]})")),
                  ModelError);
}

TEST_CASE("bimodule from JSON") {
  json qj = algebra_to_json(rational_algebra());
  json doc = {{"left_algebra", qj},
              {"right_algebra", qj},
              {"dim", 2},
              {"left", json::array({mat_to_json(Mat::identity(2))})},
              {"right", json::array({mat_to_json(Mat::identity(2))})},
              {"witness", mat_to_json(Mat::identity(2))}};
  Bimodule m = bimodule_from_json(doc);
  CHECK(m.dim == 2);
  CHECK(evaluate_trace(m)(0, 0) == 2);

  doc["witness"] = mat_to_json(Mat(2, 1));
  CHECK_THROWS_AS(bimodule_from_json(doc), ModelError);
  doc.erase("witness");
  CHECK_NOTHROW(bimodule_from_json(doc));
  doc.erase("left");
  CHECK_THROWS_AS(bimodule_from_json(doc), ModelError);
}

TEST_CASE("group from JSON in both presentations") {
  json table = {{"order", 4},
                {"table", json::parse("[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]")}};
  FiniteGroup z4 = group_from_json(table);
  CHECK(z4.order == 4);
  CHECK(z4.mul(1, 3) == 0);

  json perm = {{"perm_degree", 3},
               {"generators", json::parse("[[[0,1]], [[0,1,2]]]")}};
  FiniteGroup s3 = group_from_json(perm);
  CHECK(s3.order == 6);
  CHECK(conjugacy_classes(s3).size() == 3);

  table["order"] = 5;
  CHECK_THROWS_AS(group_from_json(table), ModelError);
  json labeled = {{"table", json::parse("[[0,1],[1,0]]")},
                  {"labels", json::array({"e", "s"})}};
  CHECK(group_from_json(labeled).labels[1] == "s");
  labeled["labels"] = json::array({"e"});
  CHECK_THROWS_AS(group_from_json(labeled), ModelError);
}

TEST_CASE("subgroup specs") {
  json doc = {{"subgroups", {{"even", json::array({0, 2})}}}};
  CHECK(subgroup_from_spec(doc, "{0,2}") == std::vector<int>{0, 2});
  CHECK(subgroup_from_spec(doc, "0, 2") == std::vector<int>{0, 2});
  CHECK(subgroup_from_spec(doc, "even") == std::vector<int>{0, 2});
  CHECK_THROWS_AS(subgroup_from_spec(doc, "odd"), ModelError);
}

TEST_CASE("transfer matrices serialize with labels and sizes") {
  FiniteGroup z4 = cyclic_group(4);
  TransferMatrix t = loop_transfer(build_cover(z4, {0, 2}));
  json j = transfer_to_json(t);
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("cols").size() == 4);
  CHECK(j.at("entries")[0] == json::array({2, 0, 0, 0}));
  CHECK(j.at("row_sizes").size() == 2);
}
