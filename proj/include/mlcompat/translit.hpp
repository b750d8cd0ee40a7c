// Copyright 2026 The mlcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rule-driven token rewriting from MATLAB/Octave to the legacy Julia dialect.
//
// A RuleSet is an ordered list of rules. Each rule matches a short window of
// consecutive tokens (1 to 3) and emits replacement text. At each position
// the first enabled rule that matches wins; tokens no rule claims are copied
// verbatim. A rule counts as fired only when its output differs from the
// text it matched, so pass-through rules can shield tokens from later rules
// without showing up in the report.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mlcompat/error.hpp"
#include "mlcompat/file_io.hpp"
#include "mlcompat/lexer.hpp"

namespace mlcompat {

enum class TargetDialect { JuliaLegacy };

inline std::string_view dialect_name(TargetDialect) { return "JuliaLegacy"; }

struct TranslationWarning {
  SourceSpan span;
  std::string message;
};

/// Per-match context handed to emitters.
struct EmitContext {
  std::vector<TranslationWarning>& warnings;
  SourceSpan span;

  void warn(std::string message) { warnings.push_back({span, std::move(message)}); }
};

struct TokenPattern {
  std::vector<TokenKind> kinds;  // any of
  std::function<bool(std::string_view)> text_matches;  // empty: any text
  std::optional<std::string> exact_text;  // set for patterns loaded from JSON

  bool matches(const Token& t) const {
    if (std::find(kinds.begin(), kinds.end(), t.kind) == kinds.end()) return false;
    return !text_matches || text_matches(t.text);
  }
};

using Emitter = std::function<std::string(std::span<const Token>, EmitContext&)>;

struct RewriteRule {
  std::string id;
  std::vector<TokenPattern> pattern;
  Emitter emit;
  bool enabled = true;
  // Set for rules defined by a `{0}`-style template rather than a shipped
  // emitter.
  std::optional<std::string> template_text;
};

struct RuleSet {
  std::vector<RewriteRule> rules;
  TargetDialect target_dialect = TargetDialect::JuliaLegacy;
  std::string version;

  const RewriteRule* find(std::string_view id) const {
    for (const auto& r : rules)
      if (r.id == id) return &r;
    return nullptr;
  }

  /// Throws RuleSetError on duplicate ids, empty or oversized windows and
  /// rules without an emitter.
  void validate() const {
    std::set<std::string_view> seen;
    for (const auto& r : rules) {
      if (r.id.empty()) throw RuleSetError("rule with empty id");
      if (!seen.insert(r.id).second) throw RuleSetError("duplicate rule id: " + r.id);
      if (r.pattern.empty() || r.pattern.size() > 3)
        throw RuleSetError("rule " + r.id + ": pattern must cover 1 to 3 tokens");
      for (const auto& p : r.pattern)
        if (p.kinds.empty()) throw RuleSetError("rule " + r.id + ": pattern without kinds");
      if (!r.emit) throw RuleSetError("rule " + r.id + ": no emitter");
    }
  }
};

struct TranslationReport {
  std::map<std::string, std::size_t> rules_fired;
  std::vector<TranslationWarning> warnings;
  std::size_t input_tokens = 0;
  std::size_t output_bytes = 0;

  std::size_t total_fired() const {
    std::size_t n = 0;
    for (const auto& [id, count] : rules_fired) n += count;
    return n;
  }
};

/// One emitted piece of output: either a run of one copied token or the
/// window a rule matched.
struct TranslationSite {
  std::size_t first_token = 0;
  std::size_t token_count = 0;
  std::string rule_id;  // empty when copied verbatim
  bool rewritten = false;
  std::string text;
};

struct Translation {
  std::string output;
  TranslationReport report;
  std::vector<TranslationSite> sites;
};

namespace rules {

/// 'it''s "x"'  ->  "it's \"x\""
inline std::string quote_string(std::string_view literal) {
  std::string out = "\"";
  const auto body = literal.substr(1, literal.size() - 2);
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '\'' && i + 1 < body.size() && body[i + 1] == '\'') {
      out += '\'';
      ++i;
    } else if (c == '"') {
      out += "\\\"";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string block_comment(std::string_view text, EmitContext& ctx) {
  const char lead = text[0];
  const std::string open{lead, '{'};
  const std::string close{lead, '}'};
  std::string out;
  std::size_t i = 0;
  bool closed = false;
  // Rewrite every marker line, keeping the surrounding bytes as they are.
  while (i < text.size()) {
    std::size_t le = text.find_first_of("\r\n", i);
    if (le == std::string_view::npos) le = text.size();
    auto line = text.substr(i, le - i);
    const auto first = line.find_first_not_of(" \t\f\v");
    const auto last = line.find_last_not_of(" \t\f\v");
    if (first != std::string_view::npos && last - first == 1) {
      const auto marker = line.substr(first, 2);
      if (marker == open) {
        out += std::string(line.substr(0, first)) + "#=" + std::string(line.substr(first + 2));
        closed = false;
      } else if (marker == close) {
        out += std::string(line.substr(0, first)) + "=#" + std::string(line.substr(first + 2));
        closed = true;
      } else {
        out += line;
      }
    } else {
      out += line;
    }
    std::size_t next = le;
    if (next < text.size() && text[next] == '\r') ++next;
    if (next < text.size() && text[next] == '\n') ++next;
    out += text.substr(le, next - le);
    i = next;
  }
  if (!closed) {
    ctx.warn("unterminated block comment closed at end of input");
    out += "\n=#";
  }
  return out;
}

inline std::string comment(std::string_view text, EmitContext& ctx) {
  if (text.size() >= 2 && (text[0] == '%' || text[0] == '#') && text[1] == '{' &&
      text.find_first_of("\r\n") != std::string_view::npos)
    return block_comment(text, ctx);
  if (text[0] == '%') return "#" + std::string(text.substr(1));
  if (text[0] == '#') return std::string(text);
  // Tail of a `...` line.
  return "#" + std::string(text);
}

inline bool is_elementwise_or_transpose(std::string_view t) {
  return t == ".*" || t == "./" || t == ".\\" || t == ".^" || t == "'" || t == ".'";
}

inline bool is_runtime_call(std::string_view t) {
  return t == "printf" || t == "disp" || t == "fprintf";
}

inline std::string copy_matched(std::span<const Token> m) {
  std::string s;
  for (const auto& t : m) s += t.text;
  return s;
}

}  // namespace rules

/// The shipped JuliaLegacy rule set.
inline RuleSet default_ruleset() {
  RuleSet rs;
  rs.version = "1.0";
  rs.target_dialect = TargetDialect::JuliaLegacy;

  rs.rules.push_back(
      {"quote-string",
       {{{TokenKind::StringLiteral}, [](std::string_view t) { return t.front() == '\''; }, {}}},
       [](std::span<const Token> m, EmitContext&) { return rules::quote_string(m[0].text); },
       true, std::nullopt});
  rs.rules.push_back({"comment",
                      {{{TokenKind::Comment}, {}, {}}},
                      [](std::span<const Token> m, EmitContext& ctx) {
                        return rules::comment(m[0].text, ctx);
                      },
       true, std::nullopt});
  rs.rules.push_back(
      {"not-equal",
       {{{TokenKind::Operator}, [](std::string_view t) { return t == "~="; }, {}}},
       [](std::span<const Token>, EmitContext&) { return std::string("!="); },
       true, std::nullopt});
  rs.rules.push_back({"elementwise-passthrough",
                      {{{TokenKind::Operator, TokenKind::Transpose},
                        rules::is_elementwise_or_transpose,
                        {}}},
                      [](std::span<const Token> m, EmitContext&) {
                        return rules::copy_matched(m);
                      },
       true, std::nullopt});
  rs.rules.push_back({"compat-call-passthrough",
                      {{{TokenKind::Identifier}, rules::is_runtime_call, {}}},
                      [](std::span<const Token> m, EmitContext&) {
                        return rules::copy_matched(m);
                      },
       true, std::nullopt});
  rs.rules.push_back({"line-continuation",
                      {{{TokenKind::LineContinuation}, {}, {}}},
                      [](std::span<const Token>, EmitContext& ctx) {
                        ctx.warn("line continuation removed; target continues on open "
                                 "brackets or a trailing operator");
                        return std::string();
                      },
       true, std::nullopt});
  return rs;
}

namespace detail {

// `{0}` .. `{2}` expand to matched token texts; `{{` and `}}` are literal.
inline std::string expand_template(std::string_view tmpl, std::span<const Token> m) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      out += c;
      ++i;
    } else if (c == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}' &&
               tmpl[i + 1] >= '0' && tmpl[i + 1] <= '9') {
      out += m[static_cast<std::size_t>(tmpl[i + 1] - '0')].text;
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

inline void check_template(const std::string& id, std::string_view tmpl, std::size_t width) {
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      ++i;
    } else if (c == '{') {
      if (i + 2 >= tmpl.size() || tmpl[i + 2] != '}' || tmpl[i + 1] < '0' ||
          static_cast<std::size_t>(tmpl[i + 1] - '0') >= width)
        throw RuleSetError("rule " + id + ": bad placeholder in template");
      i += 2;
    } else if (c == '}') {
      throw RuleSetError("rule " + id + ": unbalanced '}' in template");
    }
  }
}

}  // namespace detail

inline RuleSet ruleset_from_json(const nlohmann::json& j) {
  RuleSet rs;
  try {
    if (j.value("target_dialect", std::string("JuliaLegacy")) != "JuliaLegacy")
      throw RuleSetError("unsupported target dialect");
    rs.version = j.value("version", std::string("custom"));
    for (const auto& jr : j.at("rules")) {
      RewriteRule r;
      r.id = jr.at("id").get<std::string>();
      r.enabled = jr.value("enabled", true);
      if (jr.contains("pattern")) {
        for (const auto& jp : jr.at("pattern")) {
          TokenPattern p;
          const auto kind_text = jp.at("kind").get<std::string>();
          const auto kind = kind_from_name(kind_text);
          if (!kind) throw RuleSetError("rule " + r.id + ": unknown token kind " + kind_text);
          p.kinds = {*kind};
          if (jp.contains("text")) {
            p.exact_text = jp.at("text").get<std::string>();
            p.text_matches = [want = *p.exact_text](std::string_view t) { return t == want; };
          }
          r.pattern.push_back(std::move(p));
        }
        r.template_text = jr.at("emit").get<std::string>();
        detail::check_template(r.id, *r.template_text, r.pattern.size());
        r.emit = [tmpl = *r.template_text](std::span<const Token> m, EmitContext&) {
          return detail::expand_template(tmpl, m);
        };
      } else {
        const auto defaults = default_ruleset();
        const auto* builtin = defaults.find(r.id);
        if (!builtin) throw RuleSetError("unknown builtin rule id: " + r.id);
        r.pattern = builtin->pattern;
        r.emit = builtin->emit;
      }
      rs.rules.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw RuleSetError(std::string("malformed rule set: ") + e.what());
  }
  rs.validate();
  return rs;
}

inline nlohmann::ordered_json ruleset_to_json(const RuleSet& rs) {
  nlohmann::ordered_json j;
  j["target_dialect"] = dialect_name(rs.target_dialect);
  j["version"] = rs.version;
  j["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : rs.rules) {
    nlohmann::ordered_json jr;
    jr["id"] = r.id;
    jr["enabled"] = r.enabled;
    if (r.template_text) {
      jr["pattern"] = nlohmann::ordered_json::array();
      for (const auto& p : r.pattern) {
        nlohmann::ordered_json jp;
        jp["kind"] = kind_name(p.kinds.front());
        if (p.exact_text) jp["text"] = *p.exact_text;
        jr["pattern"].push_back(jp);
      }
      jr["emit"] = *r.template_text;
    }
    j["rules"].push_back(jr);
  }
  return j;
}

inline RuleSet load_ruleset(const std::filesystem::path& path) {
  const auto text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw RuleSetError("cannot parse " + path.string() + ": " + e.what());
  }
  return ruleset_from_json(j);
}

/// Rule set named by ROSETTA_RULES, or the shipped default.
inline RuleSet ruleset_from_environment() {
  if (const char* p = std::getenv("ROSETTA_RULES"); p && *p) return load_ruleset(p);
  return default_ruleset();
}

inline Translation transliterate(std::span<const Token> tokens, const RuleSet& rules) {
  Translation tr;
  std::vector<const RewriteRule*> active;
  for (const auto& r : rules.rules) {
    if (!r.enabled) continue;
    active.push_back(&r);
    tr.report.rules_fired[r.id] = 0;
  }
  tr.report.input_tokens = tokens.size();

  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    for (const auto* rule : active) {
      const std::size_t width = rule->pattern.size();
      if (i + width > tokens.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < width && ok; ++k) ok = rule->pattern[k].matches(tokens[i + k]);
      if (!ok) continue;

      const auto window = tokens.subspan(i, width);
      SourceSpan span = window.front().span;
      span.byte_end = window.back().span.byte_end;
      EmitContext ctx{tr.report.warnings, span};
      TranslationSite site{i, width, rule->id, false, rule->emit(window, ctx)};
      site.rewritten = site.text != rules::copy_matched(window);
      if (site.rewritten) ++tr.report.rules_fired[rule->id];
      tr.output += site.text;
      tr.sites.push_back(std::move(site));
      i += width;
      matched = true;
      break;
    }
    if (!matched) {
      tr.output += tokens[i].text;
      tr.sites.push_back({i, 1, {}, false, tokens[i].text});
      ++i;
    }
  }
  tr.report.output_bytes = tr.output.size();
  return tr;
}

/// Tokenize + transliterate; lexer diagnostics become report warnings.
inline Translation translate_source(std::string_view source, const RuleSet& rules) {
  auto lexed = tokenize(source);
  auto tr = transliterate(lexed.tokens, rules);
  for (auto& d : lexed.diagnostics)
    tr.report.warnings.push_back({d.span, std::move(d.message)});
  std::stable_sort(tr.report.warnings.begin(), tr.report.warnings.end(),
                   [](const auto& a, const auto& b) {
                     return a.span.byte_start < b.span.byte_start;
                   });
  return tr;
}

/// Reads an m-file, translates it and atomically writes the jl-file.
inline TranslationReport rosetta(const std::filesystem::path& input_path,
                                 const std::filesystem::path& output_path,
                                 const RuleSet& rules) {
  const auto source = read_file(input_path);
  auto tr = translate_source(source, rules);
  write_file_atomic(output_path, tr.output);
  return std::move(tr.report);
}

inline nlohmann::ordered_json to_json(const TranslationReport& r) {
  nlohmann::ordered_json j;
  j["input_tokens"] = r.input_tokens;
  j["output_bytes"] = r.output_bytes;
  j["rules_fired"] = nlohmann::ordered_json::object();
  for (const auto& [id, n] : r.rules_fired) j["rules_fired"][id] = n;
  j["warnings"] = nlohmann::ordered_json::array();
  for (const auto& w : r.warnings) {
    j["warnings"].push_back({{"line", w.span.line},
                             {"col", w.span.col},
                             {"byte_start", w.span.byte_start},
                             {"byte_end", w.span.byte_end},
                             {"message", w.message}});
  }
  return j;
}

struct FileTranslation {
  std::filesystem::path input;
  std::filesystem::path output;
  TranslationReport report;
};

/// Translates every `.m` under `input_dir` into a mirrored tree of `.jl`
/// files. Results are ordered by input path whatever `threads` is.
inline std::vector<FileTranslation> translate_tree(const std::filesystem::path& input_dir,
                                                   const std::filesystem::path& output_dir,
                                                   const RuleSet& rules,
                                                   unsigned threads = 0) {
  namespace fs = std::filesystem;
  std::vector<FileTranslation> jobs;
  std::error_code ec;
  for (fs::recursive_directory_iterator it(input_dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (!it->is_regular_file() || it->path().extension() != ".m") continue;
    auto rel = fs::relative(it->path(), input_dir);
    rel.replace_extension(".jl");
    jobs.push_back({it->path(), output_dir / rel, {}});
  }
  if (ec) throw IoError("cannot walk " + input_dir.string() + ": " + ec.message());
  std::sort(jobs.begin(), jobs.end(),
            [](const auto& a, const auto& b) { return a.input < b.input; });

  for (const auto& job : jobs) {
    fs::create_directories(job.output.parent_path(), ec);
    if (ec) throw IoError("cannot create " + job.output.parent_path().string());
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, jobs.size()));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::string> first_error;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        jobs[k].report = rosetta(jobs[k].input, jobs[k].output, rules);
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = e.what();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (first_error) throw IoError(*first_error);
  return jobs;
}

/// Names of identifiers used as calls (`name(`), in source order, keeping
/// only those accepted by `keep`.
inline std::vector<std::string> call_sequence(std::span<const Token> tokens,
                                              const std::function<bool(std::string_view)>& keep) {
  std::vector<std::string> calls;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is(TokenKind::Identifier)) continue;
    std::size_t k = i + 1;
    while (k < tokens.size() && tokens[k].is_trivia()) ++k;
    if (k < tokens.size() && tokens[k].is_punct(PunctKind::OpenParen) && keep(tokens[i].text))
      calls.push_back(tokens[i].text);
  }
  return calls;
}

}  // namespace mlcompat
