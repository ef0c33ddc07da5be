#include "sdep/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sdep::core {

bool is_valid_pred_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

bool is_valid_var_name(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c))))
      return false;
  return true;
}

ParseError::ParseError(int line, int column, const std::string& msg)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg),
      line(line),
      column(column) {}

ULabel ULabel::arg(int i) {
  if (i < 1) throw std::invalid_argument("argument label index must be >= 1");
  return {Kind::Arg, i};
}

ULabel ULabel::inv_arg(int i) {
  if (i < 1) throw std::invalid_argument("argument label index must be >= 1");
  return {Kind::InvArg, i};
}

std::string ULabel::to_string() const {
  switch (kind) {
    case Kind::Det: return "det";
    case Kind::Arg: return std::to_string(index);
    case Kind::InvArg: return "-" + std::to_string(index);
  }
  return {};
}

std::string SLabel::to_string() const {
  switch (kind) {
    case Kind::Det: return "det";
    case Kind::Plus: return "+" + var;
    case Kind::Minus: return "-" + var;
  }
  return {};
}

namespace {

// Labels as written, before we know whether the tree is a U-form or S-form.
struct RawLabel {
  enum class Kind { Det, Num, NegNum, PlusName, MinusName } kind;
  int num = 0;
  std::string name;
  int line = 0, column = 0;
};

struct RawTree {
  std::string pred;
  std::vector<std::string> argvars;
  std::vector<std::pair<RawLabel, RawTree>> children;
  int line = 0, column = 0;
};

}  // namespace

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

struct Token {
  enum class Kind { LParen, RParen, Comma, Plus, Minus, Word, End } kind;
  std::string text;
  int line, column;
  bool glued = false;  // no whitespace between this token and the previous one
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  bool glued = true;
  size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, int l, int c) {
    out.push_back({k, std::move(t), l, c, glued});
    glued = true;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      glued = false;
      if (c == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
      continue;
    }
    int l = line, cc = col;
    if (c == '(') {
      push(Token::Kind::LParen, "(", l, cc);
      ++i; ++col;
    } else if (c == ')') {
      push(Token::Kind::RParen, ")", l, cc);
      ++i; ++col;
    } else if (c == ',') {
      push(Token::Kind::Comma, ",", l, cc);
      ++i; ++col;
    } else if (c == '+') {
      push(Token::Kind::Plus, "+", l, cc);
      ++i; ++col;
    } else if (c == '-') {
      push(Token::Kind::Minus, "-", l, cc);
      ++i; ++col;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i; ++col;
      }
      push(Token::Kind::Word, text.substr(start, i - start), l, cc);
    } else {
      throw ParseError(l, cc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::End, "", line, col, false});
  return out;
}

class RawParser {
 public:
  explicit RawParser(const std::string& text) : toks_(tokenize(text)) {}

  RawTree parse() {
    expect(Token::Kind::LParen);
    RawTree t = node_body(/*parenthesized=*/true);
    expect(Token::Kind::RParen);
    if (cur().kind != Token::Kind::End)
      throw err("trailing input after tree");
    return t;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t n) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  void expect(Token::Kind k) {
    if (cur().kind != k) throw err("unexpected token '" + cur().text + "'");
    ++pos_;
  }
  ParseError err(const std::string& msg) const {
    return ParseError(cur().line, cur().column, msg);
  }

  std::string word() {
    if (cur().kind != Token::Kind::Word) throw err("expected a name");
    return toks_[pos_++].text;
  }

  // pred [(v1,v2,...)] child*   (children only when parenthesized)
  RawTree node_body(bool parenthesized) {
    RawTree t;
    t.line = cur().line;
    t.column = cur().column;
    t.pred = word();
    if (!is_valid_pred_name(t.pred))
      throw ParseError(t.line, t.column, "invalid predicate name '" + t.pred + "'");
    if (cur().kind == Token::Kind::LParen && cur().glued && is_argvar_list())
      parse_argvars(t);
    if (parenthesized) {
      while (cur().kind == Token::Kind::LParen) {
        expect(Token::Kind::LParen);
        RawLabel label = parse_label();
        RawTree child = parse_subtree();
        expect(Token::Kind::RParen);
        t.children.emplace_back(std::move(label), std::move(child));
      }
    }
    return t;
  }

  // An argvar list is "(name" followed by ',' or ')'; anything else after
  // the first name (another word, a paren) means we are looking at a child.
  bool is_argvar_list() const {
    if (peek(1).kind != Token::Kind::Word) return false;
    if (peek(1).text == "det") return false;
    Token::Kind after = peek(2).kind;
    return after == Token::Kind::Comma || after == Token::Kind::RParen;
  }

  void parse_argvars(RawTree& t) {
    expect(Token::Kind::LParen);
    t.argvars.push_back(word());
    while (cur().kind == Token::Kind::Comma) {
      expect(Token::Kind::Comma);
      t.argvars.push_back(word());
    }
    expect(Token::Kind::RParen);
  }

  RawTree parse_subtree() {
    if (cur().kind == Token::Kind::LParen) {
      expect(Token::Kind::LParen);
      RawTree t = node_body(true);
      expect(Token::Kind::RParen);
      return t;
    }
    return node_body(false);  // bare leaf: pred or pred(v1,..)
  }

  RawLabel parse_label() {
    RawLabel l;
    l.line = cur().line;
    l.column = cur().column;
    if (cur().kind == Token::Kind::Plus) {
      expect(Token::Kind::Plus);
      l.name = word();
      l.kind = RawLabel::Kind::PlusName;
      if (!is_valid_var_name(l.name))
        throw ParseError(l.line, l.column, "invalid variable name '" + l.name + "'");
      return l;
    }
    if (cur().kind == Token::Kind::Minus) {
      expect(Token::Kind::Minus);
      std::string w = word();
      if (all_digits(w)) {
        l.kind = RawLabel::Kind::NegNum;
        l.num = std::stoi(w);
        if (l.num < 1)
          throw ParseError(l.line, l.column, "label index must be >= 1");
      } else {
        l.kind = RawLabel::Kind::MinusName;
        l.name = w;
        if (!is_valid_var_name(w))
          throw ParseError(l.line, l.column, "invalid variable name '" + w + "'");
      }
      return l;
    }
    std::string w = word();
    if (w == "det") {
      l.kind = RawLabel::Kind::Det;
    } else if (all_digits(w)) {
      l.kind = RawLabel::Kind::Num;
      l.num = std::stoi(w);
      if (l.num < 1)
        throw ParseError(l.line, l.column, "label index must be >= 1");
    } else {
      throw ParseError(l.line, l.column, "unknown label token '" + w + "'");
    }
    return l;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

enum class LabelClass { None, Numeric, Named };

void classify(const RawTree& t, LabelClass& cls, bool& has_argvars) {
  if (!t.argvars.empty()) has_argvars = true;
  for (const auto& [label, child] : t.children) {
    LabelClass here = LabelClass::None;
    switch (label.kind) {
      case RawLabel::Kind::Det: break;
      case RawLabel::Kind::Num:
      case RawLabel::Kind::NegNum: here = LabelClass::Numeric; break;
      case RawLabel::Kind::PlusName:
      case RawLabel::Kind::MinusName: here = LabelClass::Named; break;
    }
    if (here != LabelClass::None) {
      if (cls != LabelClass::None && cls != here)
        throw ParseError(label.line, label.column,
                         "mixing numeric and named labels in one tree");
      cls = here;
    }
    classify(child, cls, has_argvars);
  }
}

UForm to_uform(const RawTree& t) {
  if (!t.argvars.empty())
    throw ParseError(t.line, t.column, "argument variables are not allowed in a U-form");
  UForm u;
  u.pred = t.pred;
  for (const auto& [label, child] : t.children) {
    ULabel l;
    switch (label.kind) {
      case RawLabel::Kind::Det: l = ULabel::det(); break;
      case RawLabel::Kind::Num: l = ULabel::arg(label.num); break;
      case RawLabel::Kind::NegNum: l = ULabel::inv_arg(label.num); break;
      default:
        throw ParseError(label.line, label.column, "named label in a U-form");
    }
    u.children.emplace_back(l, to_uform(child));
  }
  return u;
}

SForm to_sform(const RawTree& t) {
  SForm s;
  s.pred = t.pred;
  for (const auto& v : t.argvars) {
    if (!is_valid_var_name(v))
      throw ParseError(t.line, t.column, "invalid argument variable '" + v + "'");
    if (std::find(s.argvars.begin(), s.argvars.end(), v) != s.argvars.end())
      throw ParseError(t.line, t.column,
                       "duplicate argument variable '" + v + "' on node '" + t.pred + "'");
    s.argvars.push_back(v);
  }
  for (const auto& [label, child] : t.children) {
    SLabel l;
    switch (label.kind) {
      case RawLabel::Kind::Det: l = SLabel::det(); break;
      case RawLabel::Kind::PlusName: l = SLabel::plus(label.name); break;
      case RawLabel::Kind::MinusName: l = SLabel::minus(label.name); break;
      default:
        throw ParseError(label.line, label.column, "numeric label in an S-form");
    }
    s.children.emplace_back(l, to_sform(child));
  }
  return s;
}

}  // namespace

UForm parse_uform(const std::string& text) {
  RawTree raw = RawParser(text).parse();
  LabelClass cls = LabelClass::None;
  bool has_argvars = false;
  classify(raw, cls, has_argvars);
  if (cls == LabelClass::Named || has_argvars)
    throw ParseError(raw.line, raw.column, "input is an S-form, not a U-form");
  return to_uform(raw);
}

SForm parse_sform(const std::string& text) {
  RawTree raw = RawParser(text).parse();
  LabelClass cls = LabelClass::None;
  bool has_argvars = false;
  classify(raw, cls, has_argvars);
  if (cls == LabelClass::Numeric)
    throw ParseError(raw.line, raw.column, "input is a U-form, not an S-form");
  return to_sform(raw);
}

TreeKind detect_tree_kind(const std::string& text) {
  RawTree raw = RawParser(text).parse();
  LabelClass cls = LabelClass::None;
  bool has_argvars = false;
  classify(raw, cls, has_argvars);
  if (cls == LabelClass::Named || has_argvars) return TreeKind::SForm;
  return TreeKind::UForm;
}

namespace {

int label_rank(const ULabel& l) {
  switch (l.kind) {
    case ULabel::Kind::Det: return 0;
    case ULabel::Kind::Arg: return 1;
    case ULabel::Kind::InvArg: return 2;
  }
  return 3;
}

void print_uform_rec(const UForm& u, bool as_child, std::string& out) {
  bool leaf = u.children.empty();
  if (!as_child || !leaf) out += '(';
  out += u.pred;
  for (const auto& [label, child] : u.children) {
    out += " (";
    out += label.to_string();
    out += ' ';
    print_uform_rec(child, true, out);
    out += ')';
  }
  if (!as_child || !leaf) out += ')';
}

void print_sform_rec(const SForm& s, bool as_child, std::string& out) {
  bool leaf = s.children.empty();
  if (!as_child || !leaf) out += '(';
  out += s.pred;
  if (!s.argvars.empty()) {
    out += '(';
    for (size_t i = 0; i < s.argvars.size(); ++i) {
      if (i) out += ',';
      out += s.argvars[i];
    }
    out += ')';
  }
  for (const auto& [label, child] : s.children) {
    out += " (";
    out += label.to_string();
    out += ' ';
    print_sform_rec(child, true, out);
    out += ')';
  }
  if (!as_child || !leaf) out += ')';
}

}  // namespace

std::strong_ordering compare_canonical(const std::pair<ULabel, UForm>& a,
                                       const std::pair<ULabel, UForm>& b) {
  int ra = label_rank(a.first), rb = label_rank(b.first);
  if (ra != rb) return ra <=> rb;
  if (a.first.index != b.first.index) return a.first.index <=> b.first.index;
  return print_uform(a.second) <=> print_uform(b.second);
}

UForm canonical(const UForm& u) {
  UForm out;
  out.pred = u.pred;
  out.children.reserve(u.children.size());
  for (const auto& [label, child] : u.children)
    out.children.emplace_back(label, canonical(child));
  std::stable_sort(out.children.begin(), out.children.end(),
                   [](const auto& a, const auto& b) {
                     return compare_canonical(a, b) < 0;
                   });
  return out;
}

std::string print_uform(const UForm& u) {
  std::string out;
  print_uform_rec(canonical(u), false, out);
  return out;
}

std::string print_sform(const SForm& s) {
  std::string out;
  print_sform_rec(s, false, out);
  return out;
}

bool uform_equal(const UForm& a, const UForm& b) {
  return print_uform(a) == print_uform(b);
}

}  // namespace sdep::core
