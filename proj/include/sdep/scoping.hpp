#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sdep/core.hpp"
#include "sdep/uform.hpp"

// U-form -> S-form enrichment: impose an order on dependents (scope),
// replace argument numbers by fresh argument names, and the inverse
// scope-forgetting mapping back to U-forms.

namespace sdep::scoping {

using core::SForm;
using core::UForm;
using core::VarName;

// Same shape as UForm, sibling order now meaningful (leftmost = widest
// scope). Determiner children are pinned leftmost at each node and do not
// take part in reordering; only +i/-i dependents permute.
struct OrderedUForm {
  core::PredName pred;
  std::vector<std::pair<core::ULabel, OrderedUForm>> children;
};

// Chooses, for a node at `path` with n movable (non-det) children, a
// permutation of {0..n-1} applied to their canonical order.
using PermutationSelector =
    std::function<std::vector<size_t>(const uform::NodePath& path, size_t n)>;

// Identity on the canonical child order.
PermutationSelector canonical_selector();

// Arranges children per the selector; det children stay leftmost in
// canonical order. Throws std::invalid_argument when the selector returns a
// vector that is not a permutation of the right size.
OrderedUForm order_uform(const UForm& u, const PermutationSelector& choice);
OrderedUForm order_uform(const UForm& u);  // canonical order

// Names every argument slot with a fresh variable (first letter of the
// predicate + slot index, numeric suffix continues on collision) and turns
// +i/-i labels into +x/-x. Throws uform::InvalidUFormError on an invalid
// underlying U-form.
SForm name_arguments(const OrderedUForm& o);

// Erases order and argument names: +x/-x become +i/-i where i is the
// position of x in the declaring node's argvar list. Throws
// std::invalid_argument when a label variable is declared by no node.
UForm forget_scope(const SForm& s);

// Lazy enumeration of all scopings of a valid U-form: every combination of
// per-node permutations of movable children, lexicographic over permutation
// indices, starting from the all-canonical ordering.
class ScopingEnumerator {
 public:
  explicit ScopingEnumerator(const UForm& u);

  std::optional<SForm> next();

  // Product over nodes of (movable children)!, saturating at uint64 max.
  std::uint64_t total_count() const { return total_; }

 private:
  struct Site {
    uform::NodePath path;
    std::vector<size_t> perm;  // current permutation of movable children
  };

  bool advance();

  UForm base_;  // canonicalized
  std::vector<Site> sites_;
  std::uint64_t total_ = 1;
  bool done_ = false;
  bool first_ = true;
};

// Convenience: up to `max_scopings` scopings (throws std::length_error when
// the cap is exceeded and `truncate` is false).
std::vector<SForm> enumerate_scopings(const UForm& u, size_t max_scopings = 1000,
                                      bool truncate = false);

}  // namespace sdep::scoping
