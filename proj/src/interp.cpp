#include "sdep/interp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "sdep/lambda.hpp"

namespace sdep::interp {

using lambda::mk_abs;
using lambda::mk_and;
using lambda::mk_app;
using lambda::mk_const;
using lambda::mk_var;

const LexEntry* Lexicon::find(const PredName& pred, int arity) const {
  auto it = entries.find({pred, arity});
  return it == entries.end() ? nullptr : &it->second;
}

void Lexicon::add(PredName pred, LexEntry entry) {
  int arity = static_cast<int>(entry.arg_types.size());
  entries.insert_or_assign({std::move(pred), arity}, std::move(entry));
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Lexicon parse_lexicon(const std::string& text) {
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error("lexicon line " + std::to_string(lineno) + ": " + msg);
    };
    size_t colon = body.find(':');
    if (colon == std::string::npos) fail("missing ':'");
    std::string lhs = trim(body.substr(0, colon));
    std::string rhs = trim(body.substr(colon + 1));

    std::string pred = lhs;
    int arity = 0;
    if (size_t slash = lhs.find('/'); slash != std::string::npos) {
      pred = trim(lhs.substr(0, slash));
      try {
        arity = std::stoi(lhs.substr(slash + 1));
      } catch (const std::exception&) {
        fail("bad arity in '" + lhs + "'");
      }
      if (arity < 0) fail("negative arity");
    }
    if (!core::is_valid_pred_name(pred)) fail("invalid predicate name '" + pred + "'");

    LexEntry entry{{}, lambda::SemType::t()};
    size_t arrow = rhs.find("=>");
    try {
      if (arrow == std::string::npos) {
        if (arity != 0) fail("entry with arity " + std::to_string(arity) + " needs '=>'");
        entry.result_type = lambda::parse_type(rhs);
      } else {
        std::string args = trim(rhs.substr(0, arrow));
        entry.result_type = lambda::parse_type(trim(rhs.substr(arrow + 2)));
        std::istringstream as(args);
        std::string one;
        while (std::getline(as, one, ',')) entry.arg_types.push_back(lambda::parse_type(trim(one)));
        if (static_cast<int>(entry.arg_types.size()) != arity)
          fail("arity " + std::to_string(arity) + " but " +
               std::to_string(entry.arg_types.size()) + " argument types");
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    lex.add(pred, std::move(entry));
  }
  return lex;
}

Lexicon load_lexicon_file(const std::string& path) { return parse_lexicon(read_file(path)); }

struct TypePattern::Node {
  enum class Kind { Base, Metavar, Arrow } kind;
  SemType base = SemType::e();
  std::string var;
  std::shared_ptr<const Node> from, to;
};

TypePattern TypePattern::base(SemType t) {
  TypePattern p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Base;
  n->base = std::move(t);
  p.n_ = std::move(n);
  return p;
}

TypePattern TypePattern::metavar(std::string name) {
  TypePattern p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Metavar;
  n->var = std::move(name);
  p.n_ = std::move(n);
  return p;
}

TypePattern TypePattern::arrow(TypePattern from, TypePattern to) {
  TypePattern p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Arrow;
  n->from = std::move(from.n_);
  n->to = std::move(to.n_);
  p.n_ = std::move(n);
  return p;
}

namespace {

bool match_node(const std::shared_ptr<const TypePattern::Node>& n, const SemType& ty,
                std::map<std::string, SemType>& bindings);

}  // namespace

bool TypePattern::match(const SemType& ty, std::map<std::string, SemType>& bindings) const {
  return match_node(n_, ty, bindings);
}

namespace {

bool match_node(const std::shared_ptr<const TypePattern::Node>& n, const SemType& ty,
                std::map<std::string, SemType>& bindings) {
  using Kind = TypePattern::Node::Kind;
  switch (n->kind) {
    case Kind::Base:
      return n->base == ty;
    case Kind::Metavar: {
      auto [it, inserted] = bindings.emplace(n->var, ty);
      return inserted || it->second == ty;
    }
    case Kind::Arrow:
      if (!ty.is_arrow()) return false;
      return match_node(n->from, ty.from(), bindings) && match_node(n->to, ty.to(), bindings);
  }
  return false;
}

}  // namespace

std::string TypePattern::to_string() const {
  using Kind = Node::Kind;
  switch (n_->kind) {
    case Kind::Base:
      return n_->base.to_string();
    case Kind::Metavar:
      return n_->var;
    case Kind::Arrow: {
      TypePattern f, t;
      f.n_ = n_->from;
      t.n_ = n_->to;
      std::string lhs = f.to_string();
      if (n_->from->kind == Kind::Arrow) lhs = "(" + lhs + ")";
      return lhs + "->" + t.to_string();
    }
  }
  return {};
}

namespace {

class PatternParser {
 public:
  explicit PatternParser(const std::string& text) : text_(text) {}

  TypePattern parse() {
    TypePattern p = pattern();
    skip_ws();
    if (pos_ != text_.size())
      throw std::invalid_argument("trailing input in type pattern '" + text_ + "'");
    return p;
  }

 private:
  TypePattern pattern() {
    TypePattern lhs = atom();
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return TypePattern::arrow(lhs, pattern());
    }
    return lhs;
  }

  TypePattern atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw std::invalid_argument("unexpected end of type pattern");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      TypePattern p = pattern();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw std::invalid_argument("missing ')' in type pattern '" + text_ + "'");
      ++pos_;
      return p;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isupper(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      return TypePattern::metavar(text_.substr(start, pos_ - start));
    }
    ++pos_;
    if (c == 'e') return TypePattern::base(SemType::e());
    if (c == 't') return TypePattern::base(SemType::t());
    throw std::invalid_argument(std::string("unexpected character '") + c +
                                "' in type pattern '" + text_ + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

TypePattern parse_type_pattern(const std::string& text) { return PatternParser(text).parse(); }

std::string mode_to_string(Mode m) {
  switch (m) {
    case Mode::Plus: return "+";
    case Mode::Minus: return "-";
    case Mode::Det: return "det";
  }
  return {};
}

const std::vector<CompRule>& builtin_rules() {
  static const std::vector<CompRule> rules = [] {
    auto P = [](const char* s) { return parse_type_pattern(s); };
    std::vector<CompRule> r;
    r.push_back({"C1", Mode::Plus, P("T->S"), P("T"), RuleAction::ApplyLeftToRight});
    r.push_back({"C2", Mode::Plus, P("e"), P("e->t"), RuleAction::ApplyRightToLeft});
    r.push_back({"C3", Mode::Det, P("T->S"), P("T"), RuleAction::ApplyLeftToRight});
    r.push_back({"C4", Mode::Minus, P("T->S"), P("T"), RuleAction::ApplyLeftToRight});
    r.push_back({"C5", Mode::Minus, P("e->t"), P("e->t"), RuleAction::Intersect});
    return r;
  }();
  return rules;
}

std::vector<CompRule> parse_rules(const std::string& text) {
  std::vector<CompRule> rules;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error("rule line " + std::to_string(lineno) + ": " + msg);
    };
    std::istringstream fields(body);
    std::string id, mode_s, left_s, right_s, action_s, extra;
    if (!(fields >> id >> mode_s >> left_s >> right_s >> action_s))
      fail("expected 'id mode Lpattern Rpattern action'");
    if (fields >> extra) fail("trailing field '" + extra + "'");

    CompRule r{id, Mode::Plus, TypePattern::base(SemType::e()),
               TypePattern::base(SemType::e()), RuleAction::ApplyLeftToRight};
    if (mode_s == "+") r.mode = Mode::Plus;
    else if (mode_s == "-") r.mode = Mode::Minus;
    else if (mode_s == "det") r.mode = Mode::Det;
    else fail("unknown mode '" + mode_s + "'");

    try {
      r.left = parse_type_pattern(left_s);
      r.right = parse_type_pattern(right_s);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }

    if (action_s == "LR") r.action = RuleAction::ApplyLeftToRight;
    else if (action_s == "RL") r.action = RuleAction::ApplyRightToLeft;
    else if (action_s == "INTERSECT") r.action = RuleAction::Intersect;
    else fail("unknown action '" + action_s + "'");

    if (r.action == RuleAction::Intersect &&
        (r.left.to_string() != "e->t" || r.right.to_string() != "e->t"))
      fail("INTERSECT requires both patterns to be e->t");
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<CompRule> load_rules_file(const std::string& path) {
  return parse_rules(read_file(path));
}

InterpretError::InterpretError(std::string path, const std::string& msg)
    : std::runtime_error("interpretation error at " + (path.empty() ? "root" : path) +
                         ": " + msg),
      path(std::move(path)) {}

TermPtr type_leaf(const PredName& pred, const std::vector<VarName>& argvars,
                  const Lexicon& lex) {
  const LexEntry* entry = lex.find(pred, static_cast<int>(argvars.size()));
  if (!entry)
    throw InterpretError("", "no lexicon entry for '" + pred + "' with arity " +
                                 std::to_string(argvars.size()));
  // The constant itself is curried over the argument types.
  SemType cty = entry->result_type;
  for (size_t i = entry->arg_types.size(); i-- > 0;)
    cty = SemType::arrow(entry->arg_types[i], cty);
  TermPtr term = mk_const(pred, cty);
  for (size_t i = 0; i < argvars.size(); ++i)
    term = mk_app(term, mk_var(argvars[i], entry->arg_types[i]));
  return term;
}

std::vector<const CompRule*> match_rules(Mode mode, const SemType& left,
                                         const SemType& right,
                                         const std::vector<CompRule>& rules) {
  std::vector<const CompRule*> out;
  for (const auto& rule : rules) {
    if (rule.mode != mode) continue;
    std::map<std::string, SemType> bindings;
    if (rule.left.match(left, bindings) && rule.right.match(right, bindings))
      out.push_back(&rule);
  }
  return out;
}

namespace {

Mode mode_of(const SLabel& label) {
  switch (label.kind) {
    case SLabel::Kind::Plus: return Mode::Plus;
    case SLabel::Kind::Minus: return Mode::Minus;
    case SLabel::Kind::Det: return Mode::Det;
  }
  throw std::logic_error("unreachable");
}

// Abstracts the bound variable on the side that declares it; returns the
// left and right translations entering the composition.
std::pair<TermPtr, TermPtr> bind_sides(const SLabel& label, const TermPtr& dep_term,
                                       const TermPtr& head_term) {
  switch (label.kind) {
    case SLabel::Kind::Plus: {
      auto fv = lambda::free_term_vars(head_term);
      auto it = fv.find(label.var);
      if (it == fv.end())
        throw InterpretError("", "binder '" + label.var + "' of +" + label.var +
                                     " is not free in the head translation");
      return {dep_term, mk_abs(label.var, it->second, head_term)};
    }
    case SLabel::Kind::Minus: {
      auto fv = lambda::free_term_vars(dep_term);
      auto it = fv.find(label.var);
      if (it == fv.end())
        throw InterpretError("", "binder '" + label.var + "' of -" + label.var +
                                     " is not free in the dependent translation");
      return {mk_abs(label.var, it->second, dep_term), head_term};
    }
    case SLabel::Kind::Det:
      return {dep_term, head_term};
  }
  throw std::logic_error("unreachable");
}

TermPtr apply_rule(const CompRule& rule, const TermPtr& left, const TermPtr& right) {
  switch (rule.action) {
    case RuleAction::ApplyLeftToRight:
      return mk_app(left, right);
    case RuleAction::ApplyRightToLeft:
      return mk_app(right, left);
    case RuleAction::Intersect: {
      // lambda x . R(x) & L(x), x of type e, fresh for both sides.
      std::set<std::string> avoid;
      for (const auto& [name, ty] : lambda::free_term_vars(left)) avoid.insert(name);
      for (const auto& [name, ty] : lambda::free_term_vars(right)) avoid.insert(name);
      std::string x = "x";
      for (int i = 1; avoid.count(x); ++i) x = "x" + std::to_string(i);
      TermPtr var = mk_var(x, SemType::e());
      return mk_abs(x, SemType::e(), mk_and(mk_app(right, var), mk_app(left, var)));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

CompositionResult bind_and_compose(const SLabel& label, const TermPtr& dep_term,
                                   const TermPtr& head_term,
                                   const std::vector<CompRule>& rules, bool strict) {
  auto [left, right] = bind_sides(label, dep_term, head_term);
  SemType lt = lambda::type_of(left);
  SemType rt = lambda::type_of(right);
  Mode mode = mode_of(label);
  auto matches = match_rules(mode, lt, rt, rules);
  if (matches.empty())
    throw InterpretError("", "no applicable composition rule for mode " +
                                 mode_to_string(mode) + " with L:" + lt.to_string() +
                                 " and R:" + rt.to_string());
  if (strict && matches.size() > 1) {
    std::string ids;
    for (const CompRule* r : matches) {
      if (!ids.empty()) ids += ", ";
      ids += r->id;
    }
    throw InterpretError("", "ambiguous composition for mode " + mode_to_string(mode) +
                                 " with L:" + lt.to_string() + " and R:" + rt.to_string() +
                                 " (rules " + ids + " all apply)");
  }
  const CompRule& rule = *matches.front();
  TermPtr result = lambda::beta_normalize(apply_rule(rule, left, right));
  return {result, rule.id, left, lt, right, rt};
}

namespace {

TermPtr eval_ibf(const bform::IbfPtr& t, const Lexicon& lex,
                 const std::vector<CompRule>& rules, const std::string& path,
                 DerivationTrace& trace) {
  if (t->is_leaf()) {
    try {
      return type_leaf(t->pred, t->argvars, lex);
    } catch (const InterpretError& e) {
      throw InterpretError(path, e.what());
    }
  }
  TermPtr dep = eval_ibf(t->dep, lex, rules, path + 'd', trace);
  TermPtr head = eval_ibf(t->head, lex, rules, path + 'h', trace);
  CompositionResult res;
  try {
    res = bind_and_compose(t->label, dep, head, rules, /*strict=*/true);
  } catch (const InterpretError& e) {
    throw InterpretError(path, e.what());
  } catch (const lambda::TypeError& e) {
    throw InterpretError(path, e.what());
  }
  trace.push_back({path.empty() ? "root" : path, res.rule_id, t->label, res.left_term,
                   res.left_type, res.right_term, res.right_type, res.term,
                   lambda::type_of(res.term)});
  return res.term;
}

}  // namespace

Interpretation interpret(const bform::BForm& b, const Lexicon& lex,
                         const std::vector<CompRule>& rules) {
  if (!b.root) throw std::invalid_argument("null B-form");
  DerivationTrace trace;
  TermPtr term = eval_ibf(b.root, lex, rules, "", trace);
  auto fv = lambda::free_term_vars(term);
  if (!fv.empty()) {
    std::string names;
    for (const auto& [name, ty] : fv) {
      if (!names.empty()) names += ',';
      names += name;
    }
    throw InterpretError("", "result is not closed: free variables {" + names + "}");
  }
  return {term, lambda::type_of(term), std::move(trace)};
}

namespace {

struct Partial {
  TermPtr term;
  DerivationTrace trace;
};

std::vector<Partial> eval_all(const bform::IbfPtr& t, const Lexicon& lex,
                              const std::vector<CompRule>& rules,
                              const std::string& path) {
  if (t->is_leaf()) {
    try {
      return {{type_leaf(t->pred, t->argvars, lex), {}}};
    } catch (const InterpretError& e) {
      throw InterpretError(path, e.what());
    }
  }
  std::vector<Partial> out;
  for (const auto& dep : eval_all(t->dep, lex, rules, path + 'd')) {
    for (const auto& head : eval_all(t->head, lex, rules, path + 'h')) {
      std::pair<TermPtr, TermPtr> sides;
      try {
        sides = bind_sides(t->label, dep.term, head.term);
      } catch (const InterpretError&) {
        continue;
      }
      SemType lt = lambda::type_of(sides.first);
      SemType rt = lambda::type_of(sides.second);
      for (const CompRule* rule : match_rules(mode_of(t->label), lt, rt, rules)) {
        TermPtr result = lambda::beta_normalize(apply_rule(*rule, sides.first, sides.second));
        DerivationTrace trace = dep.trace;
        trace.insert(trace.end(), head.trace.begin(), head.trace.end());
        trace.push_back({path.empty() ? "root" : path, rule->id, t->label, sides.first,
                         lt, sides.second, rt, result, lambda::type_of(result)});
        out.push_back({result, std::move(trace)});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Interpretation> interpret_all(const bform::BForm& b, const Lexicon& lex,
                                          const std::vector<CompRule>& rules) {
  if (!b.root) throw std::invalid_argument("null B-form");
  std::vector<Interpretation> out;
  for (auto& partial : eval_all(b.root, lex, rules, "")) {
    if (!lambda::free_term_vars(partial.term).empty()) continue;
    out.push_back({partial.term, lambda::type_of(partial.term), std::move(partial.trace)});
  }
  return out;
}

UFormInterpretation interpret_uform(const UForm& u, const Lexicon& lex,
                                    const std::vector<CompRule>& rules,
                                    std::size_t max_scopings) {
  scoping::ScopingEnumerator en(u);
  UFormInterpretation out;
  while (auto s = en.next()) {
    if (out.scopings_tried >= max_scopings) {
      out.truncated = true;
      break;
    }
    ++out.scopings_tried;
    try {
      bform::BForm b = bform::encode(*s);
      Interpretation interp = interpret(b, lex, rules);
      bool duplicate = false;
      for (const auto& r : out.readings)
        if (lambda::alpha_eq(r.term, interp.term)) {
          duplicate = true;
          break;
        }
      if (!duplicate) out.readings.push_back({*s, interp.term, interp.type});
    } catch (const std::exception& e) {
      out.failures.push_back({*s, e.what()});
    }
  }
  return out;
}

}  // namespace sdep::interp
