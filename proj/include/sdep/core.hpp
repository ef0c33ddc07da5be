#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Shared tree representations for scoped dependency forms.
//
// Two tree flavours share one textual syntax:
//   U-form:  (like (1 john) (-1 not) (2 (woman (det every) (-2 (hate (1 peter))))))
//   S-form:  (like(l1,l2) (+l1 john) (-n1 not(n1)) (+l2 ...))
// Numeric labels mark a U-form, named labels an S-form; mixing both is a
// parse error. Leaf subtrees may be written bare inside a child: (1 john).

namespace sdep::core {

using PredName = std::string;  // non-empty, [a-z0-9_]+
using VarName = std::string;   // non-empty, [a-z][a-z0-9]*

bool is_valid_pred_name(const std::string& s);
bool is_valid_var_name(const std::string& s);

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int line, int column, const std::string& msg);
};

// Edge label of a U-form: det, +i (argument slot) or -i (inverted slot).
struct ULabel {
  enum class Kind { Det, Arg, InvArg };
  Kind kind = Kind::Det;
  int index = 0;  // >= 1 for Arg/InvArg

  static ULabel det() { return {Kind::Det, 0}; }
  static ULabel arg(int i);
  static ULabel inv_arg(int i);

  bool operator==(const ULabel&) const = default;
  auto operator<=>(const ULabel&) const = default;
  std::string to_string() const;  // "det", "1", "-1"
};

// Edge label of an S-form: det, +x or -x with a named argument variable.
struct SLabel {
  enum class Kind { Det, Plus, Minus };
  Kind kind = Kind::Det;
  VarName var;

  static SLabel det() { return {Kind::Det, {}}; }
  static SLabel plus(VarName v) { return {Kind::Plus, std::move(v)}; }
  static SLabel minus(VarName v) { return {Kind::Minus, std::move(v)}; }

  bool operator==(const SLabel&) const = default;
  std::string to_string() const;  // "det", "+l1", "-n1"
};

// Unordered labelled n-ary tree. Children are stored in the order they were
// built or parsed, but that order carries no meaning: equality and printing
// go through the canonical ordering (det < positive ascending < negative
// ascending, recursive print as tiebreak).
struct UForm {
  PredName pred;
  std::vector<std::pair<ULabel, UForm>> children;
};

// Ordered tree with named argument variables; sibling order is scope order,
// rightmost sibling has narrowest scope.
struct SForm {
  PredName pred;
  std::vector<VarName> argvars;
  std::vector<std::pair<SLabel, SForm>> children;

  bool operator==(const SForm&) const = default;
};

UForm parse_uform(const std::string& text);
SForm parse_sform(const std::string& text);

// Canonical print: children sorted by label rank then recursive print, so
// two UForms equal as multiset-trees print identically.
std::string print_uform(const UForm& u);
// Prints children exactly in stored (scope) order.
std::string print_sform(const SForm& s);

// Canonicalized copy (children recursively sorted).
UForm canonical(const UForm& u);

// Multiset-tree equality.
bool uform_equal(const UForm& a, const UForm& b);

// Ordering key used for canonicalization; exposed for the other modules
// that need a deterministic child order (scoping, uform traversal).
std::strong_ordering compare_canonical(const std::pair<ULabel, UForm>& a,
                                       const std::pair<ULabel, UForm>& b);

enum class TreeKind { UForm, SForm };

// Classifies a serialized tree by label lexical class without fully
// converting it. A tree with no labelled children (single leaf) counts as a
// U-form. Mixing numeric and named labels throws ParseError.
TreeKind detect_tree_kind(const std::string& text);

}  // namespace sdep::core
