#include "sdep/lambda.hpp"

#include <random>

#include "doctest.h"
#include "gen.hpp"

using namespace sdep::lambda;

namespace {

const SemType E = SemType::e();
const SemType T = SemType::t();
const SemType ET = SemType::arrow(E, T);
const SemType GQ = SemType::arrow(ET, SemType::arrow(ET, T));

TermPtr hate_h1_h2() {
  return mk_app(mk_app(mk_const("hate", SemType::arrow(E, ET)), mk_var("h1", E)),
                mk_var("h2", E));
}

}  // namespace

TEST_CASE("types print and parse") {
  CHECK(E.to_string() == "e");
  CHECK(T.to_string() == "t");
  CHECK(SemType::arrow(E, SemType::arrow(E, T)).to_string() == "e->e->t");
  CHECK(GQ.to_string() == "(e->t)->(e->t)->t");
  CHECK(parse_type("(e->t)->(e->t)->t") == GQ);
  CHECK(parse_type("e->e->t") == SemType::arrow(E, SemType::arrow(E, T)));
  CHECK(parse_type("e -> t") == ET);
  CHECK(parse_type("((e->t))") == ET);
  CHECK_THROWS_AS(parse_type("e->"), std::invalid_argument);
  CHECK_THROWS_AS(parse_type("q"), std::invalid_argument);
  CHECK(GQ.from() == ET);
  CHECK(GQ.to() == SemType::arrow(ET, T));
  CHECK_THROWS(E.from());
}

TEST_CASE("type_of") {
  CHECK(type_of(hate_h1_h2()) == T);
  CHECK(type_of(mk_abs("h1", E, hate_h1_h2())) == ET);
  CHECK(type_of(mk_and(mk_var("p", T), mk_var("q", T))) == T);

  // argument type mismatch, reported with a path
  TermPtr bad = mk_app(mk_const("woman", ET), mk_var("p", T));
  CHECK_THROWS_AS(type_of(bad), TypeError);
  // non-boolean conjunct
  CHECK_THROWS_AS(type_of(mk_and(mk_var("x", E), mk_var("q", T))), TypeError);
  // a bound name used at another type
  CHECK_THROWS_AS(
      type_of(mk_abs("x", E, mk_and(mk_app(mk_const("woman", ET), mk_var("x", E)),
                                    mk_var("x", T)))),
      TypeError);
}

TEST_CASE("free_term_vars") {
  auto fv = free_term_vars(mk_abs("h1", E, hate_h1_h2()));
  REQUIRE(fv.size() == 1);
  CHECK(fv.at("h2") == E);
  CHECK(free_term_vars(mk_const("john", E)).empty());
}

TEST_CASE("substitution") {
  TermPtr r = substitute(hate_h1_h2(), "h1", mk_const("peter", E));
  CHECK(alpha_eq(r, mk_app(mk_app(mk_const("hate", SemType::arrow(E, ET)),
                                  mk_const("peter", E)),
                           mk_var("h2", E))));

  // capture avoidance: [x := y](\y.x) keeps the free y free
  TermPtr t = mk_abs("y", E, mk_var("x", E));
  TermPtr s = substitute(t, "x", mk_var("y", E));
  CHECK(type_of(s) == SemType::arrow(E, E));
  CHECK(free_term_vars(s).count("y") == 1);
  CHECK(!alpha_eq(s, mk_abs("y", E, mk_var("y", E))));

  // substituting at the wrong type is an error
  CHECK_THROWS_AS(substitute(hate_h1_h2(), "h1", mk_var("p", T)), TypeError);
}

TEST_CASE("beta normalization") {
  TermPtr redex = mk_app(mk_abs("h1", E, hate_h1_h2()), mk_const("peter", E));
  TermPtr norm = beta_normalize(redex);
  CHECK(alpha_eq(norm, substitute(hate_h1_h2(), "h1", mk_const("peter", E))));
  CHECK(alpha_eq(beta_normalize(norm), norm));

  // nested redexes reduce to a closed normal form
  TermPtr id = mk_abs("f", ET, mk_var("f", ET));
  TermPtr woman = mk_const("woman", ET);
  TermPtr nested = mk_app(mk_app(id, mk_app(id, woman)), mk_const("john", E));
  CHECK(alpha_eq(beta_normalize(nested), mk_app(woman, mk_const("john", E))));

  // the budget is a hard stop
  CHECK_THROWS_AS(beta_normalize(redex, 0), NormalizationBudgetExceeded);
}

TEST_CASE("alpha equivalence") {
  TermPtr a = mk_abs("x", E, mk_app(mk_const("woman", ET), mk_var("x", E)));
  TermPtr b = mk_abs("z", E, mk_app(mk_const("woman", ET), mk_var("z", E)));
  CHECK(alpha_eq(a, b));
  CHECK(!alpha_eq(a, mk_abs("x", E, mk_app(mk_const("man", ET), mk_var("x", E)))));
  CHECK(!alpha_eq(a, mk_const("woman", ET)));
  // binder types count
  CHECK(!alpha_eq(mk_abs("x", E, mk_const("john", E)),
                  mk_abs("x", T, mk_const("john", E))));
}

TEST_CASE("pretty printing") {
  TermPtr every = mk_const("every", GQ);
  TermPtr restriction = mk_const("woman", ET);
  TermPtr scope = mk_abs("l2", E, mk_app(mk_const("run", ET), mk_var("l2", E)));

  CHECK(pretty(mk_app(mk_app(every, restriction), scope)) ==
        "every(woman,\\l2.run(l2))");
  // partially applied generalized quantifier shows eta-expanded
  CHECK(pretty(mk_app(every, restriction)) == "\\P.every(woman,P)");
  CHECK(pretty(mk_app(every, restriction), {.unicode = true}) ==
        "λP.every(woman,P)");

  TermPtr conj = mk_and(mk_app(restriction, mk_var("x", E)),
                        mk_app(mk_const("run", ET), mk_var("x", E)));
  CHECK(pretty(conj) == "woman(x) & run(x)");
  CHECK(pretty(conj, {.unicode = true}) == "woman(x)∧run(x)");
  CHECK(pretty(mk_abs("x", E, conj)) == "\\x.woman(x) & run(x)");
  CHECK(pretty(hate_h1_h2()) == "hate(h1,h2)");
}

TEST_CASE("property: subject reduction and termination") {
  std::mt19937 rng(20240827);
  for (int i = 0; i < 400; ++i) {
    TermPtr t = sdep::testgen::random_term(rng, 6);
    SemType before = type_of(t);
    TermPtr norm = beta_normalize(t);  // must terminate within the budget
    CHECK(type_of(norm) == before);
    CHECK(alpha_eq(beta_normalize(norm), norm));
  }
}

TEST_CASE("property: substitution matches the de Bruijn oracle") {
  std::mt19937 rng(20240828);
  for (int i = 0; i < 400; ++i) {
    SemType xty = sdep::testgen::random_small_type(rng);
    std::vector<std::pair<std::string, SemType>> env = {{"u0", xty}};
    TermPtr t = sdep::testgen::random_term(rng, sdep::testgen::random_small_type(rng),
                                           env, 5);
    std::vector<std::pair<std::string, SemType>> senv;
    TermPtr s = sdep::testgen::random_term(rng, xty, senv, 4);
    CHECK(sdep::testgen::substitution_matches_oracle(t, "u0", s));
  }
}
