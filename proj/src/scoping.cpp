#include "sdep/scoping.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace sdep::scoping {

using core::PredName;
using core::SLabel;
using core::ULabel;
using uform::NodePath;

PermutationSelector canonical_selector() {
  return [](const NodePath&, size_t n) {
    std::vector<size_t> id(n);
    for (size_t i = 0; i < n; ++i) id[i] = i;
    return id;
  };
}

namespace {

bool is_movable(const ULabel& l) { return l.kind != ULabel::Kind::Det; }

OrderedUForm order_node(const UForm& node, const NodePath& path,
                        const PermutationSelector& choice) {
  OrderedUForm out;
  out.pred = node.pred;

  std::vector<size_t> det_idx, movable_idx;
  for (size_t i = 0; i < node.children.size(); ++i)
    (is_movable(node.children[i].first) ? movable_idx : det_idx).push_back(i);

  std::vector<size_t> perm = choice(path, movable_idx.size());
  if (perm.size() != movable_idx.size())
    throw std::invalid_argument("permutation selector returned " +
                                std::to_string(perm.size()) + " indices for " +
                                std::to_string(movable_idx.size()) + " children at " +
                                uform::path_to_string(path));
  std::vector<bool> hit(perm.size(), false);
  for (size_t p : perm) {
    if (p >= perm.size() || hit[p])
      throw std::invalid_argument("selector result is not a permutation at " +
                                  uform::path_to_string(path));
    hit[p] = true;
  }

  std::vector<size_t> order = det_idx;  // det children stay leftmost
  for (size_t p : perm) order.push_back(movable_idx[p]);

  for (size_t i : order) {
    NodePath cp = path;
    cp.push_back(static_cast<int>(i));
    out.children.emplace_back(node.children[i].first,
                              order_node(node.children[i].second, cp, choice));
  }
  return out;
}

UForm to_uform(const OrderedUForm& o) {
  UForm u;
  u.pred = o.pred;
  for (const auto& [label, child] : o.children) u.children.emplace_back(label, to_uform(child));
  return u;
}

// Fresh argument names, assigned in pre-order: first letter of the
// predicate plus a per-letter counter, skipping anything that collides with
// a predicate name in the tree or an already assigned variable.
class NameSupply {
 public:
  explicit NameSupply(const UForm& u) { collect_preds(u); }

  VarName fresh(const PredName& pred) {
    char letter = (!pred.empty() && pred[0] >= 'a' && pred[0] <= 'z') ? pred[0] : 'x';
    int& counter = counters_[letter];
    for (;;) {
      VarName candidate = std::string(1, letter) + std::to_string(++counter);
      if (used_.insert(candidate).second) return candidate;
    }
  }

 private:
  void collect_preds(const UForm& u) {
    used_.insert(u.pred);
    for (const auto& [label, child] : u.children) collect_preds(child);
  }

  std::set<std::string> used_;
  std::map<char, int> counters_;
};

void assign_names(const UForm& u, const OrderedUForm& node, const NodePath& path,
                  NameSupply& supply, std::map<NodePath, std::vector<VarName>>& names) {
  auto ptree = uform::predication_tree(u, path);
  if (!ptree.args.empty()) {
    int arity = ptree.args.rbegin()->first;
    std::vector<VarName> vars;
    vars.reserve(arity);
    for (int i = 0; i < arity; ++i) vars.push_back(supply.fresh(node.pred));
    names.emplace(path, std::move(vars));
  }
  for (size_t i = 0; i < node.children.size(); ++i) {
    NodePath cp = path;
    cp.push_back(static_cast<int>(i));
    assign_names(u, node.children[i].second, cp, supply, names);
  }
}

SForm build_sform(const OrderedUForm& node, const NodePath& path,
                  const std::map<NodePath, std::vector<VarName>>& names) {
  SForm s;
  s.pred = node.pred;
  if (auto it = names.find(path); it != names.end()) s.argvars = it->second;
  for (size_t i = 0; i < node.children.size(); ++i) {
    const auto& [label, child] = node.children[i];
    NodePath cp = path;
    cp.push_back(static_cast<int>(i));
    SForm sc = build_sform(child, cp, names);
    SLabel sl;
    switch (label.kind) {
      case ULabel::Kind::Det:
        sl = SLabel::det();
        break;
      case ULabel::Kind::Arg:
        // +i declared on this node (the head).
        sl = SLabel::plus(s.argvars.at(label.index - 1));
        break;
      case ULabel::Kind::InvArg:
        // -i declared on the dependent, which is the predicate.
        sl = SLabel::minus(sc.argvars.at(label.index - 1));
        break;
    }
    s.children.emplace_back(std::move(sl), std::move(sc));
  }
  return s;
}

}  // namespace

OrderedUForm order_uform(const UForm& u, const PermutationSelector& choice) {
  return order_node(core::canonical(u), {}, choice);
}

OrderedUForm order_uform(const UForm& u) { return order_uform(u, canonical_selector()); }

SForm name_arguments(const OrderedUForm& o) {
  UForm u = to_uform(o);
  auto violations = uform::validate_uform(u);
  if (!violations.empty()) throw uform::InvalidUFormError(std::move(violations));

  NameSupply supply(u);
  std::map<NodePath, std::vector<VarName>> names;
  assign_names(u, o, {}, supply, names);
  return build_sform(o, {}, names);
}

namespace {

// var -> 1-based position in its declaring node's argvar list
void collect_declarations(const SForm& s, std::map<VarName, int>& decl) {
  for (size_t i = 0; i < s.argvars.size(); ++i) {
    if (!decl.emplace(s.argvars[i], static_cast<int>(i) + 1).second)
      throw std::invalid_argument("argument variable '" + s.argvars[i] +
                                  "' is declared more than once");
  }
  for (const auto& [label, child] : s.children) collect_declarations(child, decl);
}

UForm forget_node(const SForm& s, const std::map<VarName, int>& decl) {
  UForm u;
  u.pred = s.pred;
  for (const auto& [label, child] : s.children) {
    ULabel ul;
    switch (label.kind) {
      case SLabel::Kind::Det:
        ul = ULabel::det();
        break;
      case SLabel::Kind::Plus:
      case SLabel::Kind::Minus: {
        auto it = decl.find(label.var);
        if (it == decl.end())
          throw std::invalid_argument("label variable '" + label.var +
                                      "' is declared by no node");
        ul = (label.kind == SLabel::Kind::Plus) ? ULabel::arg(it->second)
                                                : ULabel::inv_arg(it->second);
        break;
      }
    }
    u.children.emplace_back(ul, forget_node(child, decl));
  }
  return u;
}

}  // namespace

UForm forget_scope(const SForm& s) {
  std::map<VarName, int> decl;
  collect_declarations(s, decl);
  return forget_node(s, decl);
}

ScopingEnumerator::ScopingEnumerator(const UForm& u) : base_(core::canonical(u)) {
  auto violations = uform::validate_uform(base_);
  if (!violations.empty()) throw uform::InvalidUFormError(std::move(violations));

  // Pre-order walk collecting every node with at least two movable children.
  struct Walker {
    std::vector<Site>& sites;
    std::uint64_t& total;
    void walk(const UForm& node, NodePath path) {
      size_t movable = 0;
      for (const auto& [label, child] : node.children)
        if (is_movable(label)) ++movable;
      if (movable >= 2) {
        std::vector<size_t> id(movable);
        for (size_t i = 0; i < movable; ++i) id[i] = i;
        sites.push_back({path, std::move(id)});
        for (size_t k = 2; k <= movable; ++k) {
          if (total > UINT64_MAX / k) {
            total = UINT64_MAX;
            break;
          }
          total *= k;
        }
      }
      for (size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        walk(node.children[i].second, path);
        path.pop_back();
      }
    }
  };
  Walker{sites_, total_}.walk(base_, {});
}

bool ScopingEnumerator::advance() {
  for (auto it = sites_.rbegin(); it != sites_.rend(); ++it) {
    if (std::next_permutation(it->perm.begin(), it->perm.end())) return true;
    // wrapped back to identity; carry into the previous site
  }
  return false;
}

std::optional<SForm> ScopingEnumerator::next() {
  if (done_) return std::nullopt;
  if (first_) {
    first_ = false;
  } else if (!advance()) {
    done_ = true;
    return std::nullopt;
  }
  auto selector = [this](const NodePath& path, size_t n) {
    for (const auto& site : sites_)
      if (site.path == path) return site.perm;
    std::vector<size_t> id(n);
    for (size_t i = 0; i < n; ++i) id[i] = i;
    return id;
  };
  return name_arguments(order_uform(base_, selector));
}

std::vector<SForm> enumerate_scopings(const UForm& u, size_t max_scopings, bool truncate) {
  ScopingEnumerator en(u);
  std::vector<SForm> out;
  while (auto s = en.next()) {
    if (out.size() >= max_scopings) {
      if (truncate) return out;
      throw std::length_error("scoping count exceeds cap of " +
                              std::to_string(max_scopings) + " (total " +
                              std::to_string(en.total_count()) + ")");
    }
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace sdep::scoping
