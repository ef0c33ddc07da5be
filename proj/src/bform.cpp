#include "sdep/bform.hpp"

#include <algorithm>
#include <cctype>

namespace sdep::bform {

namespace {

std::string join_vars(const std::set<VarName>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += ',';
    out += v;
  }
  return out;
}

std::set<VarName> intersect(const std::set<VarName>& a, const std::set<VarName>& b) {
  std::set<VarName> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

}  // namespace

IbfPtr make_leaf(PredName pred, std::vector<VarName> argvars) {
  auto node = std::make_shared<Ibf>();
  node->pred = std::move(pred);
  for (const auto& v : argvars)
    if (!node->fv.insert(v).second)
      throw std::invalid_argument("duplicate argument variable '" + v + "' on leaf '" +
                                  node->pred + "'");
  node->argvars = std::move(argvars);
  return node;
}

IbfPtr make_branch(IbfPtr dep, SLabel label, IbfPtr head) {
  if (!dep || !head) throw std::invalid_argument("branch with null subtree");
  auto node = std::make_shared<Ibf>();
  node->fv.insert(dep->fv.begin(), dep->fv.end());
  node->fv.insert(head->fv.begin(), head->fv.end());
  if (label.kind != SLabel::Kind::Det) node->fv.erase(label.var);
  node->dep = std::move(dep);
  node->head = std::move(head);
  node->label = std::move(label);
  return node;
}

namespace {

void check_node(const IbfPtr& t, const std::string& path,
                std::vector<IbfViolation>& out) {
  if (t->is_leaf()) return;
  check_node(t->dep, path + 'd', out);
  check_node(t->head, path + 'h', out);
  auto overlap = intersect(t->dep->fv, t->head->fv);
  if (!overlap.empty())
    out.push_back({path, "free variables {" + join_vars(overlap) +
                             "} occur in both the dependent and the head"});
  if (t->label.kind == SLabel::Kind::Plus && !t->head->fv.count(t->label.var))
    out.push_back({path, "binder '" + t->label.var +
                             "' of a +edge is not free in the head"});
  if (t->label.kind == SLabel::Kind::Minus && !t->dep->fv.count(t->label.var))
    out.push_back({path, "binder '" + t->label.var +
                             "' of a -edge is not free in the dependent"});
}

std::set<VarName> recompute_fv(const IbfPtr& t, const std::string& path) {
  if (t->is_leaf()) {
    std::set<VarName> fv(t->argvars.begin(), t->argvars.end());
    return fv;
  }
  auto fd = recompute_fv(t->dep, path + 'd');
  auto fh = recompute_fv(t->head, path + 'h');
  auto overlap = intersect(fd, fh);
  if (!overlap.empty())
    throw EncodeError("at " + (path.empty() ? std::string("root") : path) +
                      ": free variables {" + join_vars(overlap) +
                      "} occur in both the dependent and the head");
  if (t->label.kind == SLabel::Kind::Plus && !fh.count(t->label.var))
    throw EncodeError("at " + (path.empty() ? std::string("root") : path) +
                      ": binder '" + t->label.var + "' is not free in the head");
  if (t->label.kind == SLabel::Kind::Minus && !fd.count(t->label.var))
    throw EncodeError("at " + (path.empty() ? std::string("root") : path) +
                      ": binder '" + t->label.var + "' is not free in the dependent");
  std::set<VarName> fv;
  fv.insert(fd.begin(), fd.end());
  fv.insert(fh.begin(), fh.end());
  if (t->label.kind != SLabel::Kind::Det) fv.erase(t->label.var);
  return fv;
}

std::string sform_path_to_string(const std::vector<int>& p) {
  std::string out = "/";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(p[i]);
  }
  return out;
}

// Builds the incorporation tree for one S-form node, checking the clause
// side-conditions as each dependent is attached. When `violations` is null
// the first violation throws; otherwise all are collected.
IbfPtr build_node(const SForm& s, std::vector<int>& path,
                  std::vector<IbfViolation>* violations) {
  IbfPtr acc;
  try {
    acc = make_leaf(s.pred, s.argvars);
  } catch (const std::invalid_argument& e) {
    if (!violations) throw EncodeError(e.what());
    violations->push_back({sform_path_to_string(path), e.what()});
    std::vector<VarName> dedup;
    for (const auto& v : s.argvars)
      if (std::find(dedup.begin(), dedup.end(), v) == dedup.end()) dedup.push_back(v);
    acc = make_leaf(s.pred, dedup);
  }
  for (size_t i = s.children.size(); i-- > 0;) {
    const auto& [label, child] = s.children[i];
    path.push_back(static_cast<int>(i));
    IbfPtr dep = build_node(child, path, violations);
    std::string where = sform_path_to_string(path);
    path.pop_back();

    auto overlap = intersect(dep->fv, acc->fv);
    auto report = [&](const std::string& msg) {
      if (!violations) throw EncodeError("at " + where + ": " + msg);
      violations->push_back({where, msg});
    };
    if (!overlap.empty())
      report("free variables {" + join_vars(overlap) +
             "} occur in both the dependent and the head");
    if (label.kind == SLabel::Kind::Plus && !acc->fv.count(label.var))
      report("binder '" + label.var + "' of +" + label.var +
             " is not free in the head");
    if (label.kind == SLabel::Kind::Minus && !dep->fv.count(label.var))
      report("binder '" + label.var + "' of -" + label.var +
             " is not free in the dependent");
    acc = make_branch(std::move(dep), label, std::move(acc));
  }
  return acc;
}

}  // namespace

std::set<VarName> free_vars(const IbfPtr& t) {
  if (!t) throw std::invalid_argument("null IBF");
  return recompute_fv(t, "");
}

std::vector<IbfViolation> check_ibf(const IbfPtr& t) {
  std::vector<IbfViolation> out;
  if (t) check_node(t, "", out);
  return out;
}

BForm encode(const SForm& s) {
  std::vector<int> path;
  IbfPtr root = build_node(s, path, nullptr);
  if (!root->fv.empty())
    throw EncodeError("tree is not closed: free variables {" + join_vars(root->fv) +
                      "} remain at the root");
  return {std::move(root)};
}

std::vector<IbfViolation> validate_sform(const SForm& s) {
  std::vector<IbfViolation> out;
  std::vector<int> path;
  IbfPtr root = build_node(s, path, &out);
  if (!root->fv.empty())
    out.push_back({"/", "tree is not closed: free variables {" + join_vars(root->fv) +
                            "} remain at the root"});
  return out;
}

namespace {

SForm decode_node(const IbfPtr& t) {
  // Walk down the head spine; the outermost dependent is the leftmost
  // (widest-scope) child.
  std::vector<std::pair<SLabel, const Ibf*>> deps;
  const Ibf* cur = t.get();
  while (!cur->is_leaf()) {
    deps.emplace_back(cur->label, cur->dep.get());
    cur = cur->head.get();
  }
  SForm s;
  s.pred = cur->pred;
  s.argvars = cur->argvars;
  for (const auto& [label, dep] : deps)
    s.children.emplace_back(label, decode_node(IbfPtr(t, dep)));
  return s;
}

}  // namespace

SForm decode(const BForm& b) {
  if (!b.root) throw std::invalid_argument("null B-form");
  return decode_node(b.root);
}

bool ibf_equal(const IbfPtr& a, const IbfPtr& b) {
  if (!a || !b) return a == b;
  if (a->is_leaf() != b->is_leaf()) return false;
  if (a->is_leaf()) return a->pred == b->pred && a->argvars == b->argvars;
  return a->label == b->label && ibf_equal(a->dep, b->dep) && ibf_equal(a->head, b->head);
}

namespace {

void print_node(const IbfPtr& t, std::string& out) {
  if (t->is_leaf()) {
    out += t->pred;
    if (!t->argvars.empty()) {
      out += '(';
      for (size_t i = 0; i < t->argvars.size(); ++i) {
        if (i) out += ',';
        out += t->argvars[i];
      }
      out += ')';
    }
    return;
  }
  out += "((";
  print_node(t->dep, out);
  out += ' ';
  out += t->label.to_string();
  out += ") ";
  print_node(t->head, out);
  out += ')';
}

class BParser {
 public:
  explicit BParser(const std::string& text) : text_(text) {}

  IbfPtr parse() {
    IbfPtr t = node();
    skip_ws();
    if (pos_ != text_.size()) throw err("trailing input after B-form");
    return t;
  }

 private:
  IbfPtr node() {
    skip_ws();
    if (peek() != '(') return leaf();
    // '(' then another '(' means a branch; '(' then a name is a
    // parenthesized leaf.
    size_t save = pos_;
    expect('(');
    skip_ws();
    if (peek() != '(') {
      pos_ = save;
      return parenthesized_leaf();
    }
    expect('(');
    IbfPtr dep = node();
    SLabel label = parse_label();
    expect(')');
    IbfPtr head = node();
    expect(')');
    return make_branch(std::move(dep), std::move(label), std::move(head));
  }

  IbfPtr parenthesized_leaf() {
    expect('(');
    IbfPtr t = leaf();
    expect(')');
    return t;
  }

  IbfPtr leaf() {
    std::string pred = word();
    if (!core::is_valid_pred_name(pred)) throw err("invalid predicate name '" + pred + "'");
    std::vector<VarName> vars;
    if (peek() == '(') {  // argvars attach with no space
      expect('(');
      vars.push_back(var_word());
      skip_ws();
      while (peek() == ',') {
        expect(',');
        vars.push_back(var_word());
        skip_ws();
      }
      expect(')');
    }
    return make_leaf(std::move(pred), std::move(vars));
  }

  SLabel parse_label() {
    skip_ws();
    if (peek() == '+') {
      ++pos_;
      return SLabel::plus(var_word());
    }
    if (peek() == '-') {
      ++pos_;
      return SLabel::minus(var_word());
    }
    std::string w = word();
    if (w == "det") return SLabel::det();
    throw err("unknown label token '" + w + "'");
  }

  std::string word() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) throw err("expected a name");
    return text_.substr(start, pos_ - start);
  }

  std::string var_word() {
    std::string w = word();
    if (!core::is_valid_var_name(w)) throw err("invalid variable name '" + w + "'");
    return w;
  }

  char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c) throw err(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  core::ParseError err(const std::string& msg) {
    return core::ParseError(1, static_cast<int>(pos_) + 1, msg);
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

std::string print_bform(const BForm& b) {
  std::string out;
  print_node(b.root, out);
  return out;
}

BForm parse_bform(const std::string& text) {
  IbfPtr root = BParser(text).parse();
  auto violations = check_ibf(root);
  if (!violations.empty())
    throw EncodeError("at " + (violations.front().path.empty()
                                   ? std::string("root")
                                   : violations.front().path) +
                      ": " + violations.front().detail);
  if (!root->fv.empty())
    throw EncodeError("tree is not closed: free variables {" + join_vars(root->fv) +
                      "} remain at the root");
  return {std::move(root)};
}

}  // namespace sdep::bform
