#include "sdep/uform.hpp"

#include <algorithm>
#include <set>

namespace sdep::uform {

std::string path_to_string(const NodePath& p) {
  std::string out = "/";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(p[i]);
  }
  return out;
}

const UForm& node_at(const UForm& u, const NodePath& path) {
  const UForm* cur = &u;
  for (int idx : path) {
    if (idx < 0 || static_cast<size_t>(idx) >= cur->children.size())
      throw std::out_of_range("invalid node path " + path_to_string(path));
    cur = &cur->children[idx].second;
  }
  return *cur;
}

InvalidUFormError::InvalidUFormError(std::vector<Violation> vs)
    : std::runtime_error(vs.empty() ? "invalid U-form"
                                    : "invalid U-form: " + violation_to_string(vs.front())),
      violations(std::move(vs)) {}

std::string PredArgRelation::to_string() const {
  std::string out = pred + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += ')';
  return out;
}

namespace {

// Parent of the node at `path`, or nullptr for the root.
struct ParentEdge {
  const UForm* parent = nullptr;
  ULabel label;
  NodePath parent_path;
};

ParentEdge parent_edge(const UForm& u, const NodePath& path) {
  if (path.empty()) return {};
  NodePath pp(path.begin(), path.end() - 1);
  const UForm& p = node_at(u, pp);
  int idx = path.back();
  if (idx < 0 || static_cast<size_t>(idx) >= p.children.size())
    throw std::out_of_range("invalid node path " + path_to_string(path));
  return {&p, p.children[idx].first, std::move(pp)};
}

}  // namespace

std::vector<PredicationEdge> predication_edges(const UForm& u, const NodePath& a) {
  const UForm& node = node_at(u, a);
  std::vector<PredicationEdge> out;
  for (size_t i = 0; i < node.children.size(); ++i) {
    const auto& [label, child] = node.children[i];
    if (label.kind == ULabel::Kind::Arg) {
      NodePath cp = a;
      cp.push_back(static_cast<int>(i));
      out.push_back({a, label, std::move(cp)});
    }
  }
  ParentEdge pe = parent_edge(u, a);
  if (pe.parent && pe.label.kind == ULabel::Kind::InvArg)
    out.push_back({pe.parent_path, pe.label, a});
  return out;
}

PredicationTree predication_tree(const UForm& u, const NodePath& a) {
  PredicationTree t;
  t.head = a;
  for (const auto& e : predication_edges(u, a)) {
    int slot = e.label.index;
    const NodePath& filler = (e.label.kind == ULabel::Kind::Arg) ? e.lower : e.upper;
    t.args.emplace(slot, filler);  // first assignment wins on repetition
  }
  return t;
}

std::string violation_to_string(const Violation& v) {
  switch (v.kind) {
    case Violation::Kind::NoHoles:
      return "no-holes violation at " + path_to_string(v.node) + ": " + v.detail;
    case Violation::Kind::Repetition:
      return "repetition violation at " + path_to_string(v.node) + ": " + v.detail;
  }
  return {};
}

namespace {

void validate_node(const UForm& root, const UForm& node, const NodePath& path,
                   std::vector<Violation>& out) {
  std::vector<int> indices;
  for (const auto& e : predication_edges(root, path)) indices.push_back(e.label.index);

  std::set<int> seen, reported;
  for (int i : indices) {
    if (!seen.insert(i).second && reported.insert(i).second)
      out.push_back({Violation::Kind::Repetition, path, i,
                     "argument slot " + std::to_string(i) + " of '" + node.pred +
                         "' is assigned more than once"});
  }
  if (!seen.empty()) {
    int max = *seen.rbegin();
    for (int j = 1; j < max; ++j)
      if (!seen.count(j))
        out.push_back({Violation::Kind::NoHoles, path, j,
                       "argument slot " + std::to_string(j) + " of '" + node.pred +
                           "' is missing (slot " + std::to_string(max) + " is present)"});
  }
  for (size_t i = 0; i < node.children.size(); ++i) {
    NodePath cp = path;
    cp.push_back(static_cast<int>(i));
    validate_node(root, node.children[i].second, cp, out);
  }
}

void collect_relations(const UForm& root, const UForm& node, const NodePath& path,
                       std::vector<PredArgRelation>& out) {
  PredicationTree t = predication_tree(root, path);
  if (!t.args.empty()) {
    PredArgRelation r;
    r.pred = node.pred;
    for (const auto& [slot, filler] : t.args) r.args.push_back(node_at(root, filler).pred);
    out.push_back(std::move(r));
  }
  for (size_t i = 0; i < node.children.size(); ++i) {
    NodePath cp = path;
    cp.push_back(static_cast<int>(i));
    collect_relations(root, node.children[i].second, cp, out);
  }
}

}  // namespace

std::vector<Violation> validate_uform(const UForm& u) {
  std::vector<Violation> out;
  validate_node(u, u, {}, out);
  return out;
}

std::vector<PredArgRelation> extract_predarg(const UForm& u) {
  auto violations = validate_uform(u);
  if (!violations.empty()) throw InvalidUFormError(std::move(violations));
  std::vector<PredArgRelation> out;
  collect_relations(u, u, {}, out);
  return out;
}

}  // namespace sdep::uform
