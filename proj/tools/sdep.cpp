// Command-line front end: validation, predicate-argument extraction, scope
// enumeration, the S-form/B-form transformations, and interpretation.
//
// Exit codes: 0 success, 1 validation failure, 2 parse/config error,
// 3 interpretation failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdep/bform.hpp"
#include "sdep/core.hpp"
#include "sdep/interp.hpp"
#include "sdep/lambda.hpp"
#include "sdep/scoping.hpp"
#include "sdep/uform.hpp"

using json = nlohmann::json;
using namespace sdep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitParse = 2;
constexpr int kExitInterp = 3;

struct Options {
  std::string file = "-";
  std::string lexicon_path;
  std::string rules_path;
  bool trace = false;
  bool all_derivations = false;
  std::size_t max_scopings = 1000;
  std::string format = "text";
  bool unicode = false;

  bool structured() const { return format == "structured"; }
  lambda::PrintOptions print_opts() const { return {.unicode = unicode}; }
};

std::string read_input(const std::string& file) {
  if (file == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open input file '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

enum class InputKind { UForm, SForm, BForm };

InputKind detect_input(const std::string& text) {
  if (text.rfind("((", 0) == 0) return InputKind::BForm;
  return core::detect_tree_kind(text) == core::TreeKind::UForm ? InputKind::UForm
                                                               : InputKind::SForm;
}

interp::Lexicon load_lexicon(const Options& opt) {
  if (opt.lexicon_path.empty())
    throw CLI::ValidationError("--lexicon", "interpretation needs a lexicon file");
  return interp::load_lexicon_file(opt.lexicon_path);
}

std::vector<interp::CompRule> load_rules(const Options& opt) {
  if (opt.rules_path.empty()) return interp::builtin_rules();
  return interp::load_rules_file(opt.rules_path);
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt) {
  std::string text = strip(read_input(opt.file));
  std::vector<std::pair<std::string, std::string>> problems;  // path, detail

  switch (detect_input(text)) {
    case InputKind::UForm:
      for (const auto& v : uform::validate_uform(core::parse_uform(text)))
        problems.emplace_back(uform::path_to_string(v.node),
                              uform::violation_to_string(v));
      break;
    case InputKind::SForm:
      for (const auto& v : bform::validate_sform(core::parse_sform(text)))
        problems.emplace_back(v.path.empty() ? "root" : v.path, v.detail);
      break;
    case InputKind::BForm:
      try {
        bform::parse_bform(text);
      } catch (const bform::EncodeError& e) {
        problems.emplace_back("root", e.what());
      }
      break;
  }

  if (opt.structured()) {
    json out = {{"valid", problems.empty()}, {"violations", json::array()}};
    for (const auto& [path, detail] : problems)
      out["violations"].push_back({{"path", path}, {"detail", detail}});
    std::cout << out.dump(2) << "\n";
  } else if (problems.empty()) {
    std::cout << "valid\n";
  } else {
    for (const auto& [path, detail] : problems)
      std::cout << path << ": " << detail << "\n";
  }
  return problems.empty() ? kExitOk : kExitInvalid;
}

int cmd_predarg(const Options& opt) {
  std::string text = strip(read_input(opt.file));
  core::UForm u = core::parse_uform(text);
  std::vector<uform::PredArgRelation> rels;
  try {
    rels = uform::extract_predarg(u);
  } catch (const uform::InvalidUFormError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (opt.structured()) {
    json out = {{"relations", json::array()}};
    for (const auto& r : rels) out["relations"].push_back(r.to_string());
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : rels) std::cout << r.to_string() << "\n";
  }
  return kExitOk;
}

int cmd_scopings(const Options& opt) {
  std::string text = strip(read_input(opt.file));
  core::UForm u = core::parse_uform(text);
  scoping::ScopingEnumerator en(u);
  bool truncated = en.total_count() > opt.max_scopings;
  auto scopings = scoping::enumerate_scopings(u, opt.max_scopings, /*truncate=*/true);
  if (truncated)
    std::cerr << "note: " << en.total_count() << " scopings total, showing first "
              << scopings.size() << "\n";
  if (opt.structured()) {
    json out = {{"total", en.total_count()},
                {"truncated", truncated},
                {"scopings", json::array()}};
    for (const auto& s : scopings) out["scopings"].push_back(core::print_sform(s));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& s : scopings) std::cout << core::print_sform(s) << "\n";
  }
  return kExitOk;
}

int cmd_to_bform(const Options& opt) {
  std::string text = strip(read_input(opt.file));
  bform::BForm b;
  try {
    b = bform::encode(core::parse_sform(text));
  } catch (const bform::EncodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (opt.structured())
    std::cout << json{{"bform", bform::print_bform(b)}}.dump(2) << "\n";
  else
    std::cout << bform::print_bform(b) << "\n";
  return kExitOk;
}

int cmd_to_sform(const Options& opt) {
  std::string text = strip(read_input(opt.file));
  bform::BForm b;
  try {
    b = bform::parse_bform(text);
  } catch (const bform::EncodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  core::SForm s = bform::decode(b);
  if (opt.structured())
    std::cout << json{{"sform", core::print_sform(s)}}.dump(2) << "\n";
  else
    std::cout << core::print_sform(s) << "\n";
  return kExitOk;
}

json trace_to_json(const interp::DerivationTrace& trace, const Options& opt) {
  json steps = json::array();
  for (const auto& s : trace)
    steps.push_back({{"path", s.path},
                     {"rule", s.rule_id},
                     {"label", s.label.to_string()},
                     {"left", lambda::pretty(s.left_term, opt.print_opts())},
                     {"left_type", s.left_type.to_string()},
                     {"right", lambda::pretty(s.right_term, opt.print_opts())},
                     {"right_type", s.right_type.to_string()},
                     {"term", lambda::pretty(s.result, opt.print_opts())},
                     {"type", s.result_type.to_string()}});
  return steps;
}

void print_trace(const interp::DerivationTrace& trace, const Options& opt) {
  for (const auto& s : trace)
    std::cout << s.path << ": " << s.rule_id << "  L:" << s.left_type.to_string()
              << "  R:" << s.right_type.to_string() << "  =>  "
              << lambda::pretty(s.result, opt.print_opts()) << " : "
              << s.result_type.to_string() << "\n";
}

int interpret_single(const bform::BForm& b, const Options& opt) {
  interp::Lexicon lex = load_lexicon(opt);
  auto rules = load_rules(opt);
  std::vector<interp::Interpretation> results;
  if (opt.all_derivations)
    results = interp::interpret_all(b, lex, rules);
  else
    results.push_back(interp::interpret(b, lex, rules));
  if (results.empty()) {
    std::cerr << "error: no derivation\n";
    return kExitInterp;
  }
  if (opt.structured()) {
    json out = json::array();
    for (const auto& r : results) {
      json one = {{"term", lambda::pretty(r.term, opt.print_opts())},
                  {"type", r.type.to_string()}};
      if (opt.trace) one["trace"] = trace_to_json(r.trace, opt);
      out.push_back(one);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      if (opt.trace) print_trace(r.trace, opt);
      std::cout << lambda::pretty(r.term, opt.print_opts()) << " : "
                << r.type.to_string() << "\n";
    }
  }
  return kExitOk;
}

int interpret_uform_cmd(const core::UForm& u, const Options& opt) {
  interp::Lexicon lex = load_lexicon(opt);
  auto rules = load_rules(opt);
  interp::UFormInterpretation out =
      interp::interpret_uform(u, lex, rules, opt.max_scopings);
  if (out.truncated)
    std::cerr << "note: scoping cap of " << opt.max_scopings
              << " reached after " << out.scopings_tried << " scopings\n";
  if (opt.structured()) {
    json j = {{"scopings_tried", out.scopings_tried},
              {"truncated", out.truncated},
              {"readings", json::array()},
              {"failures", json::array()}};
    for (const auto& r : out.readings)
      j["readings"].push_back({{"term", lambda::pretty(r.term, opt.print_opts())},
                               {"type", r.type.to_string()},
                               {"sform", core::print_sform(r.sform)}});
    for (const auto& f : out.failures)
      j["failures"].push_back(
          {{"sform", core::print_sform(f.sform)}, {"message", f.message}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : out.readings)
      std::cout << lambda::pretty(r.term, opt.print_opts()) << " : "
                << r.type.to_string() << "  [" << core::print_sform(r.sform)
                << "]\n";
    if (!out.failures.empty())
      std::cerr << "note: " << out.failures.size() << " of " << out.scopings_tried
                << " scopings had no derivation\n";
  }
  return out.readings.empty() ? kExitInterp : kExitOk;
}

int cmd_interpret(const Options& opt) {
  std::string text = strip(read_input(opt.file));
  switch (detect_input(text)) {
    case InputKind::BForm:
      return interpret_single(bform::parse_bform(text), opt);
    case InputKind::SForm:
      return interpret_single(bform::encode(core::parse_sform(text)), opt);
    case InputKind::UForm:
      return interpret_uform_cmd(core::parse_uform(text), opt);
  }
  return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scoped dependency forms: validation, scoping, encoding and "
               "interpretation"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool takes_input = true) {
    if (takes_input)
      sub->add_option("file", opt.file, "input file, or - for standard input")
          ->default_str("-");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->default_str("text");
    sub->add_flag("--unicode", opt.unicode, "print λ and ∧ instead of \\ and &");
    return sub;
  };
  auto add_interp = [&](CLI::App* sub) {
    sub->add_option("--lexicon", opt.lexicon_path, "lexicon file");
    sub->add_option("--rules", opt.rules_path,
                    "composition rule file (default: builtin table)");
    sub->add_flag("--trace", opt.trace, "print the per-step derivation");
    sub->add_flag("--all-derivations", opt.all_derivations,
                  "fork on every matching rule instead of strict mode");
    return sub;
  };
  auto add_scoping = [&](CLI::App* sub) {
    sub->add_option("--max-scopings", opt.max_scopings, "scoping cap")
        ->check(CLI::PositiveNumber)
        ->default_str("1000");
    return sub;
  };

  CLI::App* validate = add_common(app.add_subcommand(
      "validate", "check U-form/S-form well-formedness"));
  CLI::App* predarg = add_common(app.add_subcommand(
      "predarg", "extract predicate-argument relations from a U-form"));
  CLI::App* scopings = add_scoping(add_common(app.add_subcommand(
      "scopings", "enumerate the S-forms of a U-form")));
  CLI::App* to_bform = add_common(app.add_subcommand(
      "to-bform", "encode an S-form as a B-form"));
  CLI::App* to_sform = add_common(app.add_subcommand(
      "to-sform", "decode a B-form back to an S-form"));
  CLI::App* interpret = add_scoping(add_interp(add_common(app.add_subcommand(
      "interpret", "translate an S-form, B-form or U-form into logic"))));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (predarg->parsed()) return cmd_predarg(opt);
    if (scopings->parsed()) return cmd_scopings(opt);
    if (to_bform->parsed()) return cmd_to_bform(opt);
    if (to_sform->parsed()) return cmd_to_sform(opt);
    if (interpret->parsed()) return cmd_interpret(opt);
  } catch (const core::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const interp::InterpretError& e) {
    std::cerr << "interpretation error: " << e.what() << "\n";
    return kExitInterp;
  } catch (const lambda::NormalizationBudgetExceeded& e) {
    std::cerr << "interpretation error: " << e.what() << "\n";
    return kExitInterp;
  } catch (const bform::EncodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const uform::InvalidUFormError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}
