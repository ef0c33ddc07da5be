// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// if any fails. Uses the bundled lexicon (path in SDEP_LEXICON, default
// data/lexicon.sdep relative to the working directory).

#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gen.hpp"
#include "sdep/bform.hpp"
#include "sdep/core.hpp"
#include "sdep/interp.hpp"
#include "sdep/lambda.hpp"
#include "sdep/scoping.hpp"
#include "sdep/uform.hpp"

using namespace sdep;
using namespace sdep::core;
using namespace sdep::lambda;

namespace {

const char* kLikeU =
    "(like (1 john) (-1 not) (2 (woman (det every) (-2 (hate (1 peter))))))";
const char* kHateU =
    "(hate (1 peter) (2 (woman (det every) (-2 (like (1 john) (-1 not))))))";
const char* kLikeS =
    "(like(l1,l2) (+l1 john) (-n1 not(n1)) "
    "(+l2 (woman (det every) (-h2 (hate(h1,h2) (+h1 peter))))))";

const SemType E = SemType::e();
const SemType T = SemType::t();
const SemType ET = SemType::arrow(E, T);
const SemType EET = SemType::arrow(E, ET);
const SemType GQ = SemType::arrow(ET, SemType::arrow(ET, T));

TermPtr app2(TermPtr f, TermPtr a, TermPtr b) {
  return mk_app(mk_app(std::move(f), std::move(a)), std::move(b));
}
TermPtr c_john() { return mk_const("john", E); }
TermPtr c_peter() { return mk_const("peter", E); }
TermPtr c_woman() { return mk_const("woman", ET); }
TermPtr c_every() { return mk_const("every", GQ); }
TermPtr c_not() { return mk_const("not", SemType::arrow(T, T)); }
TermPtr c_like() { return mk_const("like", EET); }
TermPtr c_hate() { return mk_const("hate", EET); }

// \w.woman(w) & hate(peter,w)
TermPtr restriction() {
  return mk_abs("w", E,
                mk_and(mk_app(c_woman(), mk_var("w", E)),
                       app2(c_hate(), c_peter(), mk_var("w", E))));
}
// not(every(restriction, \z.like(john,z)))
TermPtr reading_negation_wide() {
  return mk_app(c_not(),
                app2(c_every(), restriction(),
                     mk_abs("z", E, app2(c_like(), c_john(), mk_var("z", E)))));
}
// every(restriction, \z.not(like(john,z)))
TermPtr reading_every_wide() {
  return app2(c_every(), restriction(),
              mk_abs("z", E,
                     mk_app(c_not(), app2(c_like(), c_john(), mk_var("z", E)))));
}

interp::Lexicon load_lexicon() {
  const char* env = std::getenv("SDEP_LEXICON");
  return interp::load_lexicon_file(env ? env : "data/lexicon.sdep");
}

struct Check {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

// ---------------------------------------------------------------------------

// Golden derivation: final term and each intermediate node value.
void criterion1(Check& c) {
  auto out = interp::interpret(bform::encode(parse_sform(kLikeS)), load_lexicon());
  c.require(out.type == T, "final type is not t");
  c.require(alpha_eq(out.term, reading_negation_wide()), "final term mismatch");
  c.require(out.trace.size() == 6, "trace length");
  if (!c.ok) return;
  c.require(alpha_eq(out.trace[0].result, app2(c_hate(), c_peter(), mk_var("h2", E))) &&
                out.trace[0].result_type == T,
            "node hate(peter,h2)");
  c.require(alpha_eq(out.trace[1].result, restriction()) &&
                out.trace[1].result_type == ET,
            "node \\h2.woman(h2)&hate(peter,h2)");
  c.require(alpha_eq(out.trace[2].result, mk_app(c_every(), restriction())) &&
                out.trace[2].result_type == SemType::arrow(ET, T),
            "node every(restriction)");
  std::string shown = pretty(out.trace[2].result);
  c.require(shown.rfind("\\P.every(", 0) == 0 && shown.back() == ')' &&
                shown.find(",P)") != std::string::npos,
            "partially applied quantifier display");
  c.require(alpha_eq(out.trace[3].result,
                     app2(c_every(), restriction(),
                          mk_abs("z", E, app2(c_like(), mk_var("l1", E),
                                              mk_var("z", E))))) &&
                out.trace[3].result_type == T,
            "node every(...,\\l2.like(l1,l2))");
  c.require(alpha_eq(out.trace[4].result,
                     mk_app(c_not(), app2(c_every(), restriction(),
                                          mk_abs("z", E,
                                                 app2(c_like(), mk_var("l1", E),
                                                      mk_var("z", E)))))),
            "node not(every(...))");
  c.require(alpha_eq(out.trace[5].result, reading_negation_wide()),
            "root node value");
}

// Rule-trace fidelity: exactly C2,C5,C3 then C1,C4,C2, strict mode clean.
void criterion2(Check& c) {
  auto out = interp::interpret(bform::encode(parse_sform(kLikeS)), load_lexicon());
  std::vector<std::string> seq;
  for (const auto& s : out.trace) seq.push_back(s.rule_id);
  c.require(seq == std::vector<std::string>{"C2", "C5", "C3", "C1", "C4", "C2"},
            "rule sequence mismatch");
}

// Predicate-argument extraction.
void criterion3(Check& c) {
  auto r1 = uform::extract_predarg(parse_uform(kLikeU));
  auto r3 = uform::extract_predarg(parse_uform(kHateU));
  std::set<std::string> s1, s3;
  for (const auto& r : r1) s1.insert(r.to_string());
  for (const auto& r : r3) s3.insert(r.to_string());
  c.require(s1 == std::set<std::string>{"like(john,woman)", "not(like)",
                                        "hate(peter,woman)"},
            "relation set mismatch");
  c.require(s1 == s3, "the two trees disagree on relations");
  c.require(print_uform(parse_uform(kLikeU)) != print_uform(parse_uform(kHateU)),
            "canonical prints coincide");
}

// Well-formedness: clean trees clean, each mutant exactly one violation.
void criterion4(Check& c) {
  c.require(uform::validate_uform(parse_uform(kLikeU)).empty(), "running example");
  c.require(uform::validate_uform(parse_uform(kHateU)).empty(), "reshaped example");
  auto holes = uform::validate_uform(parse_uform("(like (2 woman))"));
  c.require(holes.size() == 1 &&
                holes[0].kind == uform::Violation::Kind::NoHoles,
            "hole mutant");
  auto reps = uform::validate_uform(parse_uform("(like (1 john) (1 mary))"));
  c.require(reps.size() == 1 &&
                reps[0].kind == uform::Violation::Kind::Repetition,
            "repetition mutant");
}

// Scope enumeration and collapse: 6 scopings, 2 alpha-distinct readings.
void criterion5(Check& c) {
  auto scopings = scoping::enumerate_scopings(parse_uform(kLikeU));
  c.require(scopings.size() == 6, "expected 6 scopings");
  auto out = interp::interpret_uform(parse_uform(kLikeU), load_lexicon());
  c.require(out.scopings_tried == 6, "scopings tried");
  c.require(out.readings.size() == 2, "expected 2 readings");
  bool a = false, b = false;
  for (const auto& r : out.readings) {
    a = a || alpha_eq(r.term, reading_negation_wide());
    b = b || alpha_eq(r.term, reading_every_wide());
  }
  c.require(a, "missing negation-wide reading");
  c.require(b, "missing quantifier-wide reading");
}

// Encoding bijection on the named pair and on random S-forms.
void criterion6(Check& c) {
  SForm s = parse_sform(kLikeS);
  c.require(bform::decode(bform::encode(s)) == s, "named pair roundtrip");
  std::mt19937 rng(424242);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    SForm r = testgen::random_valid_sform(rng, 10);
    c.require(bform::decode(bform::encode(r)) == r,
              "random roundtrip failed at iteration " + std::to_string(i));
  }
}

// Free-variable bookkeeping against the recursive clause oracle.
void criterion7(Check& c) {
  auto b = bform::encode(parse_sform(kLikeS));
  c.require(bform::free_vars(b.root).empty(), "root not closed");
  auto inner = bform::make_branch(bform::make_leaf("peter", {}),
                                  SLabel::plus("h1"),
                                  bform::make_leaf("hate", {"h1", "h2"}));
  c.require(bform::free_vars(inner) == std::set<VarName>{"h2"},
            "fv of ((peter,+h1),hate(h1,h2))");
  c.require(bform::check_ibf(b.root).empty(), "clause side-conditions");

  std::mt19937 rng(434343);
  std::function<bform::IbfPtr(int)> gen = [&](int depth) -> bform::IbfPtr {
    static const std::vector<std::string> vars = {"x1", "x2", "y1", "y2"};
    if (depth == 0 || rng() % 3 == 0) {
      std::vector<VarName> argvars;
      for (size_t i = 0; i < vars.size(); ++i)
        if (rng() % 3 == 0) argvars.push_back(vars[i]);
      return bform::make_leaf("p" + std::to_string(rng() % 4), argvars);
    }
    SLabel label = SLabel::det();
    if (rng() % 3 == 1) label = SLabel::plus(vars[rng() % vars.size()]);
    if (rng() % 3 == 2) label = SLabel::minus(vars[rng() % vars.size()]);
    return bform::make_branch(gen(depth - 1), label, gen(depth - 1));
  };
  for (int i = 0; i < 1500 && c.ok; ++i) {
    bform::IbfPtr t = gen(4);
    auto oracle = testgen::fv_oracle(t);
    bool impl_ok = bform::check_ibf(t).empty();
    c.require(impl_ok == oracle.has_value(),
              "validity disagreement at iteration " + std::to_string(i));
    if (oracle)
      c.require(bform::free_vars(t) == *oracle,
                "fv disagreement at iteration " + std::to_string(i));
  }
}

// Enrichment validity on random U-forms.
void criterion8(Check& c) {
  std::mt19937 rng(454545);
  for (int i = 0; i < 200 && c.ok; ++i) {
    UForm u = testgen::random_valid_uform(rng, 8);
    auto scopings = scoping::enumerate_scopings(u, 5000, /*truncate=*/true);
    for (const auto& s : scopings) {
      c.require(bform::validate_sform(s).empty(),
                "scoping is not a valid S-form at iteration " + std::to_string(i));
      c.require(uform_equal(scoping::forget_scope(s), u),
                "forget_scope changed the U-form at iteration " + std::to_string(i));
      if (!c.ok) return;
    }
  }
}

// Head-line type invariance in the golden trace.
void criterion9(Check& c) {
  auto out = interp::interpret(bform::encode(parse_sform(kLikeS)), load_lexicon());
  c.require(out.trace.size() == 6, "trace length");
  if (!c.ok) return;
  // like head-line: steps at indices 3,4,5; hate head-line: step 0.
  for (size_t i : {size_t(0), size_t(3), size_t(4), size_t(5)})
    c.require(out.trace[i].result_type == T,
              "head-line step " + std::to_string(i) + " left type t");
}

// Lambda engine property suite.
void criterion10(Check& c) {
  std::mt19937 rng(464646);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    TermPtr t = testgen::random_term(rng, 6);
    SemType before = type_of(t);
    TermPtr norm;
    try {
      norm = beta_normalize(t);
    } catch (const NormalizationBudgetExceeded&) {
      c.require(false, "normalization did not terminate at iteration " +
                           std::to_string(i));
      return;
    }
    c.require(type_of(norm) == before,
              "subject reduction failed at iteration " + std::to_string(i));

    SemType xty = testgen::random_small_type(rng);
    std::vector<std::pair<std::string, SemType>> env = {{"u0", xty}};
    TermPtr body = testgen::random_term(rng, testgen::random_small_type(rng), env, 4);
    std::vector<std::pair<std::string, SemType>> senv;
    TermPtr repl = testgen::random_term(rng, xty, senv, 3);
    c.require(testgen::substitution_matches_oracle(body, "u0", repl),
              "substitution oracle disagreement at iteration " + std::to_string(i));
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Check&);
  };
  const std::vector<Criterion> criteria = {
      {"1 golden derivation", criterion1},
      {"2 rule-trace fidelity", criterion2},
      {"3 predicate-argument extraction", criterion3},
      {"4 well-formedness checking", criterion4},
      {"5 scope enumeration and collapse", criterion5},
      {"6 encoding bijection", criterion6},
      {"7 free-variable bookkeeping", criterion7},
      {"8 enrichment validity", criterion8},
      {"9 head-line type invariance", criterion9},
      {"10 lambda engine properties", criterion10},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    Check c;
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.why = std::string("exception: ") + e.what();
    }
    if (c.ok) {
      std::cout << "PASS  criterion " << cr.name << "\n";
    } else {
      std::cout << "FAIL  criterion " << cr.name << " (" << c.why << ")\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
