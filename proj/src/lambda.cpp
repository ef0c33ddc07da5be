#include "sdep/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace sdep::lambda {

struct SemType::Node {
  bool arrow = false;
  bool base_e = false;  // when !arrow: e or t
  std::shared_ptr<const Node> from, to;
};

SemType SemType::e() {
  SemType t;
  auto n = std::make_shared<Node>();
  n->base_e = true;
  t.n_ = std::move(n);
  return t;
}

SemType SemType::t() {
  SemType t;
  t.n_ = std::make_shared<Node>();
  return t;
}

SemType SemType::arrow(SemType from, SemType to) {
  SemType t;
  auto n = std::make_shared<Node>();
  n->arrow = true;
  n->from = std::move(from.n_);
  n->to = std::move(to.n_);
  t.n_ = std::move(n);
  return t;
}

bool SemType::is_e() const { return !n_->arrow && n_->base_e; }
bool SemType::is_t() const { return !n_->arrow && !n_->base_e; }
bool SemType::is_arrow() const { return n_->arrow; }

SemType SemType::from() const {
  if (!is_arrow()) throw std::logic_error("from() on a base type");
  SemType t;
  t.n_ = n_->from;
  return t;
}

SemType SemType::to() const {
  if (!is_arrow()) throw std::logic_error("to() on a base type");
  SemType t;
  t.n_ = n_->to;
  return t;
}

bool SemType::operator==(const SemType& other) const {
  const Node *a = n_.get(), *b = other.n_.get();
  if (a == b) return true;
  if (a->arrow != b->arrow) return false;
  if (!a->arrow) return a->base_e == b->base_e;
  return from() == other.from() && to() == other.to();
}

std::string SemType::to_string() const {
  if (is_e()) return "e";
  if (is_t()) return "t";
  std::string lhs = from().to_string();
  if (from().is_arrow()) lhs = "(" + lhs + ")";
  return lhs + "->" + to().to_string();
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(const std::string& text) : text_(text) {}

  SemType parse() {
    SemType t = type();
    skip_ws();
    if (pos_ != text_.size())
      throw std::invalid_argument("trailing input in type '" + text_ + "'");
    return t;
  }

 private:
  SemType type() {
    SemType lhs = atom();
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return SemType::arrow(lhs, type());  // right associative
    }
    return lhs;
  }

  SemType atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw std::invalid_argument("unexpected end of type");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SemType t = type();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw std::invalid_argument("missing ')' in type '" + text_ + "'");
      ++pos_;
      return t;
    }
    ++pos_;
    if (c == 'e') return SemType::e();
    if (c == 't') return SemType::t();
    throw std::invalid_argument(std::string("unexpected character '") + c +
                                "' in type '" + text_ + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

SemType parse_type(const std::string& text) { return TypeParser(text).parse(); }

TermPtr mk_const(std::string name, SemType ty) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->name = std::move(name);
  t->ty = std::move(ty);
  return t;
}

TermPtr mk_var(std::string name, SemType ty) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = std::move(name);
  t->ty = std::move(ty);
  return t;
}

TermPtr mk_app(TermPtr fun, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->a = std::move(fun);
  t->b = std::move(arg);
  return t;
}

TermPtr mk_abs(std::string var, SemType var_ty, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Abs;
  t->name = std::move(var);
  t->ty = std::move(var_ty);
  t->a = std::move(body);
  return t;
}

TermPtr mk_and(TermPtr left, TermPtr right) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::And;
  t->a = std::move(left);
  t->b = std::move(right);
  return t;
}

TypeError::TypeError(std::string path, const std::string& msg)
    : std::runtime_error("type error at '" + (path.empty() ? "root" : path) + "': " + msg),
      path(std::move(path)) {}

namespace {

SemType type_check(const TermPtr& t, std::map<std::string, SemType>& bound,
                   std::string& path) {
  switch (t->kind) {
    case Term::Kind::Const:
      return *t->ty;
    case Term::Kind::Var: {
      auto it = bound.find(t->name);
      if (it != bound.end() && !(it->second == *t->ty))
        throw TypeError(path, "variable '" + t->name + "' used at type " +
                                  t->ty->to_string() + " but bound at " +
                                  it->second.to_string());
      return *t->ty;
    }
    case Term::Kind::App: {
      path.push_back('a');
      SemType f = type_check(t->a, bound, path);
      path.back() = 'b';
      SemType x = type_check(t->b, bound, path);
      path.pop_back();
      if (!f.is_arrow())
        throw TypeError(path, "applying a non-function of type " + f.to_string());
      if (!(f.from() == x))
        throw TypeError(path, "argument type " + x.to_string() +
                                  " does not match parameter type " +
                                  f.from().to_string());
      return f.to();
    }
    case Term::Kind::Abs: {
      auto prev = bound.find(t->name);
      std::optional<SemType> saved;
      if (prev != bound.end()) saved = prev->second;
      bound.insert_or_assign(t->name, *t->ty);
      path.push_back('a');
      SemType body = type_check(t->a, bound, path);
      path.pop_back();
      if (saved)
        bound.insert_or_assign(t->name, *saved);
      else
        bound.erase(t->name);
      return SemType::arrow(*t->ty, body);
    }
    case Term::Kind::And: {
      path.push_back('a');
      SemType l = type_check(t->a, bound, path);
      path.back() = 'b';
      SemType r = type_check(t->b, bound, path);
      path.pop_back();
      if (!l.is_t())
        throw TypeError(path, "left conjunct has type " + l.to_string() + ", expected t");
      if (!r.is_t())
        throw TypeError(path, "right conjunct has type " + r.to_string() + ", expected t");
      return SemType::t();
    }
  }
  throw std::logic_error("unreachable");
}

void collect_free(const TermPtr& t, std::set<std::string>& bound,
                  std::map<std::string, SemType>& out) {
  switch (t->kind) {
    case Term::Kind::Const:
      return;
    case Term::Kind::Var: {
      if (bound.count(t->name)) return;
      auto [it, inserted] = out.emplace(t->name, *t->ty);
      if (!inserted && !(it->second == *t->ty))
        throw TypeError("", "free variable '" + t->name + "' used at both " +
                                it->second.to_string() + " and " + t->ty->to_string());
      return;
    }
    case Term::Kind::App:
    case Term::Kind::And:
      collect_free(t->a, bound, out);
      collect_free(t->b, bound, out);
      return;
    case Term::Kind::Abs: {
      bool was_bound = !bound.insert(t->name).second;
      collect_free(t->a, bound, out);
      if (!was_bound) bound.erase(t->name);
      return;
    }
  }
}

bool occurs_free(const TermPtr& t, const std::string& x) {
  switch (t->kind) {
    case Term::Kind::Const: return false;
    case Term::Kind::Var: return t->name == x;
    case Term::Kind::App:
    case Term::Kind::And: return occurs_free(t->a, x) || occurs_free(t->b, x);
    case Term::Kind::Abs: return t->name != x && occurs_free(t->a, x);
  }
  return false;
}

void collect_all_names(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var:
      out.insert(t->name);
      return;
    case Term::Kind::App:
    case Term::Kind::And:
      collect_all_names(t->a, out);
      collect_all_names(t->b, out);
      return;
    case Term::Kind::Abs:
      out.insert(t->name);
      collect_all_names(t->a, out);
      return;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back())))
    stem.pop_back();
  if (stem.empty()) stem = "x";
  for (int i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

TermPtr subst_rec(const TermPtr& t, const std::string& x, const TermPtr& s,
                  const std::set<std::string>& fv_s) {
  switch (t->kind) {
    case Term::Kind::Const:
      return t;
    case Term::Kind::Var:
      return t->name == x ? s : t;
    case Term::Kind::App:
      return mk_app(subst_rec(t->a, x, s, fv_s), subst_rec(t->b, x, s, fv_s));
    case Term::Kind::And:
      return mk_and(subst_rec(t->a, x, s, fv_s), subst_rec(t->b, x, s, fv_s));
    case Term::Kind::Abs: {
      if (t->name == x) return t;  // x shadowed
      if (!occurs_free(t->a, x)) return t;
      if (fv_s.count(t->name)) {
        // Rename the binder before descending.
        std::set<std::string> avoid = fv_s;
        collect_all_names(t->a, avoid);
        avoid.insert(x);
        std::string renamed = fresh_name(t->name, avoid);
        TermPtr body = subst_rec(t->a, t->name, mk_var(renamed, *t->ty), {});
        return mk_abs(renamed, *t->ty, subst_rec(body, x, s, fv_s));
      }
      return mk_abs(t->name, *t->ty, subst_rec(t->a, x, s, fv_s));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

SemType type_of(const TermPtr& t) {
  if (!t) throw std::invalid_argument("null term");
  std::map<std::string, SemType> bound;
  std::string path;
  return type_check(t, bound, path);
}

std::map<std::string, SemType> free_term_vars(const TermPtr& t) {
  std::map<std::string, SemType> out;
  std::set<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
  auto fv = free_term_vars(t);
  if (auto it = fv.find(x); it != fv.end()) {
    SemType sub_ty = type_of(s);
    if (!(it->second == sub_ty))
      throw TypeError("", "substituting a term of type " + sub_ty.to_string() +
                              " for variable '" + x + "' of type " +
                              it->second.to_string());
  }
  std::set<std::string> fv_s;
  for (const auto& [name, ty] : free_term_vars(s)) fv_s.insert(name);
  return subst_rec(t, x, s, fv_s);
}

namespace {

TermPtr normalize_rec(const TermPtr& t, std::size_t& budget) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var:
      return t;
    case Term::Kind::Abs:
      return mk_abs(t->name, *t->ty, normalize_rec(t->a, budget));
    case Term::Kind::And:
      return mk_and(normalize_rec(t->a, budget), normalize_rec(t->b, budget));
    case Term::Kind::App: {
      TermPtr fun = normalize_rec(t->a, budget);
      if (fun->kind == Term::Kind::Abs) {
        if (budget-- == 0)
          throw NormalizationBudgetExceeded(
              "beta reduction did not finish within the step budget");
        return normalize_rec(substitute(fun->a, fun->name, t->b), budget);
      }
      return mk_app(fun, normalize_rec(t->b, budget));
    }
  }
  throw std::logic_error("unreachable");
}

bool alpha_rec(const TermPtr& a, const TermPtr& b, std::map<std::string, int>& la,
               std::map<std::string, int>& lb, int depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Const:
      return a->name == b->name && *a->ty == *b->ty;
    case Term::Kind::Var: {
      auto ia = la.find(a->name), ib = lb.find(b->name);
      bool bound_a = ia != la.end(), bound_b = ib != lb.end();
      if (bound_a != bound_b) return false;
      if (bound_a) return ia->second == ib->second;
      return a->name == b->name && *a->ty == *b->ty;
    }
    case Term::Kind::App:
    case Term::Kind::And:
      return alpha_rec(a->a, b->a, la, lb, depth) && alpha_rec(a->b, b->b, la, lb, depth);
    case Term::Kind::Abs: {
      if (!(*a->ty == *b->ty)) return false;
      auto sa = la.find(a->name), sb = lb.find(b->name);
      std::optional<int> prev_a, prev_b;
      if (sa != la.end()) prev_a = sa->second;
      if (sb != lb.end()) prev_b = sb->second;
      la.insert_or_assign(a->name, depth);
      lb.insert_or_assign(b->name, depth);
      bool ok = alpha_rec(a->a, b->a, la, lb, depth + 1);
      if (prev_a) la.insert_or_assign(a->name, *prev_a); else la.erase(a->name);
      if (prev_b) lb.insert_or_assign(b->name, *prev_b); else lb.erase(b->name);
      return ok;
    }
  }
  return false;
}

bool is_generalized_quantifier_type(const SemType& ty) {
  static const SemType gq = SemType::arrow(
      SemType::arrow(SemType::e(), SemType::t()),
      SemType::arrow(SemType::arrow(SemType::e(), SemType::t()), SemType::t()));
  return ty == gq;
}

std::string pp(const TermPtr& t, const PrintOptions& opts);

std::string pp_operand(const TermPtr& t, const PrintOptions& opts) {
  // An abstraction as a conjunct or application head needs parentheses.
  if (t->kind == Term::Kind::Abs) return "(" + pp(t, opts) + ")";
  return pp(t, opts);
}

std::string pp(const TermPtr& t, const PrintOptions& opts) {
  const std::string lam = opts.unicode ? "λ" : "\\";
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var:
      return t->name;
    case Term::Kind::Abs:
      return lam + t->name + "." + pp(t->a, opts);
    case Term::Kind::And:
      return pp_operand(t->a, opts) + (opts.unicode ? "∧" : " & ") +
             pp_operand(t->b, opts);
    case Term::Kind::App: {
      std::vector<TermPtr> args;
      TermPtr head = t;
      while (head->kind == Term::Kind::App) {
        args.push_back(head->b);
        head = head->a;
      }
      std::reverse(args.begin(), args.end());
      if (head->kind == Term::Kind::Const && args.size() == 1 &&
          is_generalized_quantifier_type(*head->ty)) {
        // Partially applied generalized quantifier: display eta-expanded,
        // quant(restriction,P) under a lambda.
        return lam + "P." + head->name + "(" + pp(args[0], opts) + ",P)";
      }
      std::string out = pp_operand(head, opts);
      out += '(';
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += pp(args[i], opts);
      }
      out += ')';
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TermPtr beta_normalize(const TermPtr& t, std::size_t max_steps) {
  if (!t) throw std::invalid_argument("null term");
  std::size_t budget = max_steps;
  return normalize_rec(t, budget);
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  std::map<std::string, int> la, lb;
  return alpha_rec(a, b, la, lb, 0);
}

std::string pretty(const TermPtr& t, const PrintOptions& opts) {
  if (!t) throw std::invalid_argument("null term");
  return pp(t, opts);
}

}  // namespace sdep::lambda
