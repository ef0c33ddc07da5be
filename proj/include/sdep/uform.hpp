#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdep/core.hpp"

// Predication structure of U-forms: for a node A, the predication edges are
// the edges (A,+i,X) below A and (X,-i,A) above A; normalizing them gives
// A's predication tree, a map from argument slot i to the node filling it.

namespace sdep::uform {

using core::UForm;
using core::ULabel;
using core::PredName;

// Path from the root: child indices into the stored children vectors.
using NodePath = std::vector<int>;

std::string path_to_string(const NodePath& p);

// Node lookup; throws std::out_of_range on an invalid path.
const UForm& node_at(const UForm& u, const NodePath& path);

// One predication edge of some node: `upper` is the tree-parent side of the
// edge, `lower` the child. For (A,+i,X) the predicate is upper; for
// (X,-i,A) the predicate is the lower node.
struct PredicationEdge {
  NodePath upper;
  ULabel label;  // Arg(i) or InvArg(i), never det
  NodePath lower;

  bool operator==(const PredicationEdge&) const = default;
  auto operator<=>(const PredicationEdge&) const = default;
};

struct PredicationTree {
  NodePath head;
  std::map<int, NodePath> args;  // slot index -> filling node
};

struct Violation {
  enum class Kind { NoHoles, Repetition };
  Kind kind;
  NodePath node;   // the predicate node whose predication tree is broken
  int index;       // missing slot (NoHoles) or duplicated slot (Repetition)
  std::string detail;
};

struct PredArgRelation {
  PredName pred;
  std::vector<PredName> args;

  bool operator==(const PredArgRelation&) const = default;
  auto operator<=>(const PredArgRelation&) const = default;
  std::string to_string() const;  // pred(arg1,...,argn)
};

struct InvalidUFormError : std::runtime_error {
  std::vector<Violation> violations;
  explicit InvalidUFormError(std::vector<Violation> vs);
};

std::vector<PredicationEdge> predication_edges(const UForm& u, const NodePath& a);

// Normalizes the predication edges of `a` into slot assignments. Does not
// check well-formedness: a repeated slot keeps the first assignment found
// (Arg children in stored order, then the inverted edge from the parent).
PredicationTree predication_tree(const UForm& u, const NodePath& a);

// All violations of the no-holes / no-repetition conditions, across every
// node, in pre-order.
std::vector<Violation> validate_uform(const UForm& u);

// One relation per node with a non-empty predication tree, in pre-order over
// the stored child order. Throws InvalidUFormError on an invalid U-form.
std::vector<PredArgRelation> extract_predarg(const UForm& u);

std::string violation_to_string(const Violation& v);

}  // namespace sdep::uform
