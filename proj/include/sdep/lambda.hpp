#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

// Simply-typed lambda terms over base types e and t, with a primitive
// binary conjunction former. No eta reduction anywhere; the printer alone
// eta-expands partially applied generalized quantifiers.

namespace sdep::lambda {

class SemType {
 public:
  static SemType e();
  static SemType t();
  static SemType arrow(SemType from, SemType to);

  bool is_e() const;
  bool is_t() const;
  bool is_arrow() const;
  SemType from() const;  // throws unless arrow
  SemType to() const;

  bool operator==(const SemType& other) const;
  bool operator!=(const SemType& other) const { return !(*this == other); }

  // e, t, A->B with right associativity; left operand of -> parenthesized
  // when itself an arrow: (e->t)->(e->t)->t.
  std::string to_string() const;

 private:
  struct Node;
  std::shared_ptr<const Node> n_;
};

// `e`, `t`, `A->B`, parentheses. Throws std::invalid_argument on bad input.
SemType parse_type(const std::string& text);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Const, Var, App, Abs, And };
  Kind kind;
  std::string name;            // Const/Var/Abs binder
  std::optional<SemType> ty;   // Const/Var type, Abs binder type
  TermPtr a, b;                // App: fun/arg; Abs: body in a; And: left/right
};

TermPtr mk_const(std::string name, SemType ty);
TermPtr mk_var(std::string name, SemType ty);
TermPtr mk_app(TermPtr fun, TermPtr arg);
TermPtr mk_abs(std::string var, SemType var_ty, TermPtr body);
TermPtr mk_and(TermPtr left, TermPtr right);

struct TypeError : std::runtime_error {
  std::string path;  // a=fun/left/body, b=arg/right, as 'a'/'b' steps from root
  TypeError(std::string path, const std::string& msg);
};

SemType type_of(const TermPtr& t);

// Free variables with their types; inconsistent use of one name throws
// TypeError.
std::map<std::string, SemType> free_term_vars(const TermPtr& t);

// Capture-avoiding; bound variables renamed with fresh numeric suffixes as
// needed. Throws TypeError when s's type differs from x's type in t.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

struct NormalizationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Leftmost-outermost reduction to beta-normal form. The step budget is a
// hard stop for diagnostics only; well-typed terms terminate long before.
TermPtr beta_normalize(const TermPtr& t, std::size_t max_steps = 1'000'000);

bool alpha_eq(const TermPtr& a, const TermPtr& b);

struct PrintOptions {
  bool unicode = false;  // λ and ∧ instead of \ and &
};

// f(a1,...,an) application flattening; a constant of type
// (e->t)->(e->t)->t applied to exactly one argument displays eta-expanded
// as \P.quant(restriction,P).
std::string pretty(const TermPtr& t, const PrintOptions& opts = {});

}  // namespace sdep::lambda
