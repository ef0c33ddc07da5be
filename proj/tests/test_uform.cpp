#include "sdep/uform.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "gen.hpp"

using namespace sdep::core;
using namespace sdep::uform;

namespace {

const char* kLikeU =
    "(like (1 john) (-1 not) (2 (woman (det every) (-2 (hate (1 peter))))))";
const char* kHateU =
    "(hate (1 peter) (2 (woman (det every) (-2 (like (1 john) (-1 not))))))";

// Stored-order paths into kLikeU.
const NodePath kJohn = {0};
const NodePath kNot = {1};
const NodePath kWoman = {2};
const NodePath kHate = {2, 1};
const NodePath kPeter = {2, 1, 0};

}  // namespace

TEST_CASE("node_at and path_to_string") {
  UForm u = parse_uform(kLikeU);
  CHECK(node_at(u, {}).pred == "like");
  CHECK(node_at(u, kHate).pred == "hate");
  CHECK(node_at(u, kPeter).pred == "peter");
  CHECK_THROWS_AS(node_at(u, {5}), std::out_of_range);
  CHECK(path_to_string({}) == "/");
  CHECK(path_to_string({2, 1}) == "/2/1");
}

TEST_CASE("predication_edges around hate, john and not") {
  UForm u = parse_uform(kLikeU);

  auto hate_edges = predication_edges(u, kHate);
  std::set<PredicationEdge> hs(hate_edges.begin(), hate_edges.end());
  CHECK(hs == std::set<PredicationEdge>{
                  {kHate, ULabel::arg(1), kPeter},     // (hate,1,peter)
                  {kWoman, ULabel::inv_arg(2), kHate}  // (hate,2,woman)
              });

  CHECK(predication_edges(u, kJohn).empty());

  auto not_edges = predication_edges(u, kNot);
  REQUIRE(not_edges.size() == 1);
  CHECK(not_edges[0] == PredicationEdge{{}, ULabel::inv_arg(1), kNot});
}

TEST_CASE("predication_tree assigns slots") {
  UForm u = parse_uform(kLikeU);

  PredicationTree th = predication_tree(u, kHate);
  CHECK(th.head == kHate);
  CHECK(th.args == std::map<int, NodePath>{{1, kPeter}, {2, kWoman}});

  PredicationTree tl = predication_tree(u, {});
  CHECK(tl.args == std::map<int, NodePath>{{1, kJohn}, {2, kWoman}});

  PredicationTree tn = predication_tree(u, kNot);
  CHECK(tn.args == std::map<int, NodePath>{{1, NodePath{}}});

  CHECK(predication_tree(u, kJohn).args.empty());
}

TEST_CASE("validate_uform on clean and broken trees") {
  CHECK(validate_uform(parse_uform(kLikeU)).empty());
  CHECK(validate_uform(parse_uform(kHateU)).empty());

  auto holes = validate_uform(parse_uform("(like (2 woman))"));
  REQUIRE(holes.size() == 1);
  CHECK(holes[0].kind == Violation::Kind::NoHoles);
  CHECK(holes[0].node == NodePath{});
  CHECK(holes[0].index == 1);

  auto reps = validate_uform(parse_uform("(like (1 john) (1 mary))"));
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].kind == Violation::Kind::Repetition);
  CHECK(reps[0].index == 1);
  CHECK(!violation_to_string(reps[0]).empty());
}

TEST_CASE("extract_predarg reproduces the relation lists") {
  auto r1 = extract_predarg(parse_uform(kLikeU));
  REQUIRE(r1.size() == 3);
  CHECK(r1[0].to_string() == "like(john,woman)");
  CHECK(r1[1].to_string() == "not(like)");
  CHECK(r1[2].to_string() == "hate(peter,woman)");

  auto r3 = extract_predarg(parse_uform(kHateU));
  REQUIRE(r3.size() == 3);
  CHECK(r3[0].to_string() == "hate(peter,woman)");
  CHECK(r3[1].to_string() == "like(john,woman)");
  CHECK(r3[2].to_string() == "not(like)");

  // Same relations as sets, distinct U-forms.
  std::set<PredArgRelation> s1(r1.begin(), r1.end()), s3(r3.begin(), r3.end());
  CHECK(s1 == s3);
  CHECK(print_uform(parse_uform(kLikeU)) != print_uform(parse_uform(kHateU)));
}

TEST_CASE("extract_predarg rejects invalid U-forms") {
  CHECK_THROWS_AS(extract_predarg(parse_uform("(like (2 woman))")),
                  InvalidUFormError);
  try {
    extract_predarg(parse_uform("(like (1 john) (1 mary))"));
    FAIL("expected InvalidUFormError");
  } catch (const InvalidUFormError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0].kind == Violation::Kind::Repetition);
  }
}

TEST_CASE("property: random valid U-forms validate clean") {
  std::mt19937 rng(20240820);
  for (int i = 0; i < 200; ++i) {
    UForm u = sdep::testgen::random_valid_uform(rng, 10);
    CHECK(validate_uform(u).empty());
  }
}

TEST_CASE("property: relation set invariant under child permutation") {
  std::mt19937 rng(20240821);
  for (int i = 0; i < 200; ++i) {
    UForm u = sdep::testgen::random_valid_uform(rng, 10);
    UForm shuffled = sdep::testgen::shuffle_children(u, rng);
    auto a = extract_predarg(u);
    auto b = extract_predarg(shuffled);
    CHECK(std::set<PredArgRelation>(a.begin(), a.end()) ==
          std::set<PredArgRelation>(b.begin(), b.end()));
  }
}

TEST_CASE("property: breaking a slot is detected") {
  std::mt19937 rng(20240822);
  int mutated = 0;
  for (int i = 0; i < 300 && mutated < 100; ++i) {
    UForm u = sdep::testgen::random_valid_uform(rng, 10);
    if (u.children.empty()) continue;
    // Bump one argument label out of its contiguous range: creates a hole
    // (and possibly a repetition), never leaves the tree valid.
    for (auto& [label, child] : u.children) {
      if (label.kind == ULabel::Kind::Arg) {
        label = ULabel::arg(label.index + 7);
        ++mutated;
        CHECK(!validate_uform(u).empty());
        break;
      }
    }
  }
  CHECK(mutated >= 50);
}
