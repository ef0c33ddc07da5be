#include "sdep/bform.hpp"

#include <random>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "sdep/scoping.hpp"

using namespace sdep::core;
using namespace sdep::bform;

namespace {

const char* kLikeS =
    "(like(l1,l2) (+l1 john) (-n1 not(n1)) "
    "(+l2 (woman (det every) (-h2 (hate(h1,h2) (+h1 peter))))))";

// kLikeS encoded: the rightmost dependent of each node attaches lowest on
// its head-line, so +l2 is innermost under like and -h2 innermost under
// woman.
const char* kLikeB =
    "((john +l1) ((not(n1) -n1) ((((every det) ((((peter +h1) hate(h1,h2)) -h2)"
    " woman)) +l2) like(l1,l2))))";

// Random IBFs, valid or not: random leaves joined by random labels.
IbfPtr random_ibf(std::mt19937& rng, int depth) {
  static const std::vector<std::string> vars = {"x1", "x2", "x3", "y1", "y2"};
  if (depth == 0 || rng() % 3 == 0) {
    std::vector<VarName> argvars;
    size_t n = rng() % 3;
    std::set<size_t> picked;
    while (argvars.size() < n) {
      size_t i = rng() % vars.size();
      if (picked.insert(i).second) argvars.push_back(vars[i]);
    }
    return make_leaf(sdep::testgen::pred_pool()[rng() % 6], argvars);
  }
  IbfPtr dep = random_ibf(rng, depth - 1);
  IbfPtr head = random_ibf(rng, depth - 1);
  SLabel label;
  switch (rng() % 3) {
    case 0: label = SLabel::det(); break;
    case 1: label = SLabel::plus(vars[rng() % vars.size()]); break;
    case 2: label = SLabel::minus(vars[rng() % vars.size()]); break;
  }
  return make_branch(dep, label, head);
}

}  // namespace

TEST_CASE("leaves and their variables") {
  IbfPtr hate = make_leaf("hate", {"h1", "h2"});
  CHECK(hate->is_leaf());
  CHECK(free_vars(hate) == std::set<VarName>{"h1", "h2"});
  CHECK_THROWS(make_leaf("hate", {"h1", "h1"}));
}

TEST_CASE("free variables along the example B-form spine") {
  BForm b = encode(parse_sform(kLikeS));
  CHECK(free_vars(b.root).empty());

  // ((peter,+h1),hate(h1,h2)) consumes h1 and leaves h2 free.
  IbfPtr inner = make_branch(make_leaf("peter", {}), SLabel::plus("h1"),
                             make_leaf("hate", {"h1", "h2"}));
  CHECK(free_vars(inner) == std::set<VarName>{"h2"});
  CHECK(inner->fv == std::set<VarName>{"h2"});
}

TEST_CASE("check_ibf reports clause violations") {
  BForm b = encode(parse_sform(kLikeS));
  CHECK(check_ibf(b.root).empty());

  // +z needs z free in the head
  IbfPtr bad = make_branch(make_leaf("john", {}), SLabel::plus("z"),
                           make_leaf("woman", {}));
  auto vs = check_ibf(bad);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].path.empty());
  CHECK_THROWS_AS(free_vars(bad), EncodeError);

  // shared variable breaks disjointness
  IbfPtr clash = make_branch(make_leaf("like", {"x1"}), SLabel::det(),
                             make_leaf("hate", {"x1"}));
  CHECK(!check_ibf(clash).empty());
}

TEST_CASE("encode reproduces the expected B-form text") {
  BForm b = encode(parse_sform(kLikeS));
  CHECK(print_bform(b) == kLikeB);
}

TEST_CASE("encode rejects non-closed S-forms") {
  CHECK_THROWS_AS(encode(parse_sform("(like(l1,l2) (+l1 john))")), EncodeError);
}

TEST_CASE("decode inverts encode on the example S-form") {
  SForm s = parse_sform(kLikeS);
  CHECK(decode(encode(s)) == s);
}

TEST_CASE("validate_sform") {
  CHECK(validate_sform(parse_sform(kLikeS)).empty());
  auto vs = validate_sform(parse_sform("(like(l1,l2) (+l1 john))"));
  CHECK(!vs.empty());
  auto vs2 = validate_sform(parse_sform("(like(l1,l2) (+zz john) (+l1 mary) "
                                        "(+l2 sue))"));
  CHECK(!vs2.empty());
}

TEST_CASE("B-form text roundtrip") {
  BForm b = parse_bform(kLikeB);
  CHECK(print_bform(b) == kLikeB);
  CHECK(ibf_equal(b.root, encode(parse_sform(kLikeS)).root));
  CHECK(decode(b) == parse_sform(kLikeS));

  CHECK_THROWS(parse_bform("((john +zz) woman)"));       // broken binder
  CHECK_THROWS(parse_bform("((john +l1) like(l1,l2))")); // not closed
  CHECK_THROWS(parse_bform("((john +l1"));               // unbalanced
}

TEST_CASE("property: encode/decode bijection on random S-forms") {
  std::mt19937 rng(20240825);
  for (int i = 0; i < 1000; ++i) {
    SForm s = sdep::testgen::random_valid_sform(rng, 10);
    CHECK(validate_sform(s).empty());
    BForm b = encode(s);
    CHECK(free_vars(b.root).empty());
    CHECK(decode(b) == s);
    BForm back = parse_bform(print_bform(b));
    CHECK(ibf_equal(back.root, b.root));
  }
}

TEST_CASE("property: clause checking agrees with the recursive oracle") {
  std::mt19937 rng(20240826);
  int valid_seen = 0, invalid_seen = 0;
  for (int i = 0; i < 2000; ++i) {
    IbfPtr t = random_ibf(rng, 4);
    auto oracle = sdep::testgen::fv_oracle(t);
    bool impl_ok = check_ibf(t).empty();
    CHECK(impl_ok == oracle.has_value());
    if (oracle) {
      ++valid_seen;
      CHECK(free_vars(t) == *oracle);
      CHECK(t->fv == *oracle);
    } else {
      ++invalid_seen;
    }
  }
  // the generator must exercise both sides
  CHECK(valid_seen > 100);
  CHECK(invalid_seen > 100);
}
