#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdep/bform.hpp"
#include "sdep/core.hpp"
#include "sdep/lambda.hpp"
#include "sdep/scoping.hpp"

// Bottom-up interpretation of B-forms: leaves are typed from a lexicon, at
// every branch the bound variable is abstracted on the side declaring it
// and the two translations are combined through a type-sensitive
// composition rule table (C1-C5 built in, extensible from rule files).

namespace sdep::interp {

using core::PredName;
using core::SForm;
using core::SLabel;
using core::UForm;
using core::VarName;
using lambda::SemType;
using lambda::TermPtr;

struct LexEntry {
  std::vector<SemType> arg_types;  // one per argument variable
  SemType result_type;
};

struct Lexicon {
  // keyed by (pred, arity)
  std::map<std::pair<PredName, int>, LexEntry> entries;

  const LexEntry* find(const PredName& pred, int arity) const;
  void add(PredName pred, LexEntry entry);
};

// One line per entry: `pred/arity : argty1,...,argtyn => resultty`, or just
// `pred : type` for arity 0. '#' starts a comment.
Lexicon parse_lexicon(const std::string& text);
Lexicon load_lexicon_file(const std::string& path);

// Type pattern with unifiable metavariables (uppercase words).
class TypePattern {
 public:
  static TypePattern base(SemType t);
  static TypePattern metavar(std::string name);
  static TypePattern arrow(TypePattern from, TypePattern to);

  // One-sided matching: binds metavariables to concrete types, consistently
  // across one rule's left and right patterns.
  bool match(const SemType& ty, std::map<std::string, SemType>& bindings) const;

  std::string to_string() const;

  struct Node;  // implementation detail, defined in interp.cpp

 private:
  std::shared_ptr<const Node> n_;
};

// `T->S`, `e`, `(e->t)->T`, uppercase words as metavariables.
TypePattern parse_type_pattern(const std::string& text);

enum class Mode { Plus, Minus, Det };
std::string mode_to_string(Mode m);

enum class RuleAction { ApplyLeftToRight, ApplyRightToLeft, Intersect };

struct CompRule {
  std::string id;
  Mode mode;
  TypePattern left;
  TypePattern right;
  RuleAction action;
};

// C1 (+, T->S, T, LR), C2 (+, e, e->t, RL), C3 (det, T->S, T, LR),
// C4 (-, T->S, T, LR), C5 (-, e->t, e->t, INTERSECT), in this order.
const std::vector<CompRule>& builtin_rules();

// One rule per line: `id mode Lpattern Rpattern action`, mode in {+,-,det},
// action in {LR,RL,INTERSECT}. INTERSECT demands both patterns be exactly
// e->t. '#' starts a comment.
std::vector<CompRule> parse_rules(const std::string& text);
std::vector<CompRule> load_rules_file(const std::string& path);

struct InterpretError : std::runtime_error {
  std::string path;  // B-form path, 'd'/'h' steps
  InterpretError(std::string path, const std::string& msg);
};

// Leaf translation: the lexical constant applied to its argument variables.
// Type of the result is the entry's result type; the free variables are
// exactly the argvars at their declared types.
TermPtr type_leaf(const PredName& pred, const std::vector<VarName>& argvars,
                  const Lexicon& lex);

// Rules whose mode matches and whose patterns unify with both types, in
// table order.
std::vector<const CompRule*> match_rules(Mode mode, const SemType& left,
                                         const SemType& right,
                                         const std::vector<CompRule>& rules);

struct CompositionResult {
  TermPtr term;  // beta-normal
  std::string rule_id;
  // What actually entered the composition, after variable binding.
  TermPtr left_term;
  SemType left_type;
  TermPtr right_term;
  SemType right_type;
};

// Variable binding plus composition for one branch: +x abstracts x over the
// head, -x abstracts x over the dependent, det binds nothing. Strict mode
// errors when no rule or more than one rule applies.
CompositionResult bind_and_compose(const SLabel& label, const TermPtr& dep_term,
                                   const TermPtr& head_term,
                                   const std::vector<CompRule>& rules,
                                   bool strict = true);

struct TraceStep {
  std::string path;  // branch position in the B-form
  std::string rule_id;
  SLabel label;
  TermPtr left_term;
  SemType left_type;
  TermPtr right_term;
  SemType right_type;
  TermPtr result;
  SemType result_type;
};

using DerivationTrace = std::vector<TraceStep>;

struct Interpretation {
  TermPtr term;
  SemType type;
  DerivationTrace trace;
};

// Strict bottom-up interpretation; the final term is beta-normal and
// closed. Trace steps appear in evaluation (post-)order.
Interpretation interpret(const bform::BForm& b, const Lexicon& lex,
                         const std::vector<CompRule>& rules = builtin_rules());

// Forks on every matching rule; results in derivation order, each closed.
std::vector<Interpretation> interpret_all(const bform::BForm& b, const Lexicon& lex,
                                          const std::vector<CompRule>& rules = builtin_rules());

struct Reading {
  SForm sform;  // one witnessing scoping
  TermPtr term;
  SemType type;
};

struct ScopingFailure {
  SForm sform;
  std::string message;
};

struct UFormInterpretation {
  std::vector<Reading> readings;  // deduplicated up to alpha equivalence
  std::vector<ScopingFailure> failures;
  std::size_t scopings_tried = 0;
  bool truncated = false;  // scoping cap hit
};

UFormInterpretation interpret_uform(const UForm& u, const Lexicon& lex,
                                    const std::vector<CompRule>& rules = builtin_rules(),
                                    std::size_t max_scopings = 1000);

}  // namespace sdep::interp
