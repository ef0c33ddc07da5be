#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdep/core.hpp"

// The reversible S-form/B-form encoding. A B-form is a binary
// "incorporation tree": each branch ((D,label),H) attaches one dependent
// line D to the head line H, the innermost branch holding the
// narrowest-scope dependent. Free-variable sets follow the four clauses of
// the incomplete-B-form (IBF) definition:
//   1. leaf pred(x1..xn): fv = {x1..xn}
//   2. ((D,+x),H): fv(D) and fv(H) disjoint, x in fv(H); fv = fv(D)+fv(H)-{x}
//   3. ((D,-x),H): fv(D) and fv(H) disjoint, x in fv(D); fv = fv(D)+fv(H)-{x}
//   4. ((D,det),H): fv(D) and fv(H) disjoint; fv = fv(D)+fv(H)
// A B-form is an IBF with fv = {}.

namespace sdep::bform {

using core::PredName;
using core::SForm;
using core::SLabel;
using core::VarName;

struct Ibf;
using IbfPtr = std::shared_ptr<const Ibf>;

struct Ibf {
  // Leaf when head == nullptr.
  PredName pred;                  // leaf
  std::vector<VarName> argvars;   // leaf
  IbfPtr dep, head;               // branch
  SLabel label;                   // branch
  std::set<VarName> fv;           // cached at construction

  bool is_leaf() const { return head == nullptr; }
};

IbfPtr make_leaf(PredName pred, std::vector<VarName> argvars);
// Caches fv per the clauses; does not enforce the side-conditions (use
// check_ibf), so structurally broken trees can still be represented and
// diagnosed.
IbfPtr make_branch(IbfPtr dep, SLabel label, IbfPtr head);

struct BForm {
  IbfPtr root;
};

// Path into an IBF: 'd' descends into the dependent, 'h' into the head;
// empty string is the root.
struct IbfViolation {
  std::string path;
  std::string detail;
};

struct EncodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Recomputes fv bottom-up per the four clauses; throws EncodeError with a
// path on the first side-condition violation.
std::set<VarName> free_vars(const IbfPtr& t);

// All clause side-condition violations, in bottom-up order.
std::vector<IbfViolation> check_ibf(const IbfPtr& t);

// S-form -> B-form: the rightmost dependent of each node attaches lowest on
// its head-line. Throws EncodeError when the result breaks an IBF clause or
// is not closed (the input is then not a valid S-form).
BForm encode(const SForm& s);

// Exact inverse of encode.
SForm decode(const BForm& b);

// Violations of the S-form definition (IBF clauses plus closedness),
// reported with S-form child paths where possible. Empty result = valid.
std::vector<IbfViolation> validate_sform(const SForm& s);

// Textual form: leaves as pred(v1,..), branches as ((dep LABEL) head),
// e.g. ((peter +h1) hate(h1,h2)).
std::string print_bform(const BForm& b);
BForm parse_bform(const std::string& text);

bool ibf_equal(const IbfPtr& a, const IbfPtr& b);

}  // namespace sdep::bform
