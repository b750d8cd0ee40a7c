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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "mlcompat/file_io.hpp"
#include "mlcompat/translit.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using mlcompat::Dialect;
using mlcompat::TokenKind;
using mlcompat::default_ruleset;
using mlcompat::tokenize;
using mlcompat::translate_source;

std::vector<fs::path> corpus_files() {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(oracle::source_dir() / "corpus"))
    if (e.path().extension() == ".m") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::size_t count_kind(const std::vector<mlcompat::Token>& toks, TokenKind k) {
  return static_cast<std::size_t>(
      std::count_if(toks.begin(), toks.end(), [k](const auto& t) { return t.kind == k; }));
}

TEST(Translit, DefaultRuleSetContents) {
  const auto rs = default_ruleset();
  ASSERT_NE(rs.find("quote-string"), nullptr);
  EXPECT_TRUE(rs.find("quote-string")->enabled);
  EXPECT_NO_THROW(rs.validate());
  std::vector<std::string> ids;
  for (const auto& r : rs.rules) ids.push_back(r.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"quote-string", "comment", "not-equal",
                                           "elementwise-passthrough",
                                           "compat-call-passthrough", "line-continuation"}));
}

TEST(Translit, QuoteString) {
  const auto tr = translate_source("'hello'", default_ruleset());
  EXPECT_EQ(tr.output, "\"hello\"");
  EXPECT_EQ(tr.report.rules_fired.at("quote-string"), 1u);
}

TEST(Translit, QuoteEscapes) {
  EXPECT_EQ(translate_source("s = 'it''s \"x\"'", default_ruleset()).output,
            "s = \"it's \\\"x\\\"\"");
  EXPECT_EQ(translate_source("s = ''", default_ruleset()).output, "s = \"\"");
}

TEST(Translit, CommentBecomesHash) {
  const auto tr = translate_source("% count nuclei", default_ruleset());
  EXPECT_EQ(tr.output, "# count nuclei");
  const auto relexed = tokenize(tr.output, Dialect::JuliaOutput).tokens;
  ASSERT_EQ(relexed.size(), 1u);
  EXPECT_EQ(relexed[0].kind, TokenKind::Comment);
}

TEST(Translit, BlockComment) {
  const auto tr = translate_source("x = 1;\n%{\nnotes 'here'\n%}\ny = 2;\n", default_ruleset());
  EXPECT_EQ(tr.output, "x = 1;\n#=\nnotes 'here'\n=#\ny = 2;\n");
  const auto relexed = tokenize(tr.output, Dialect::JuliaOutput).tokens;
  EXPECT_EQ(count_kind(relexed, TokenKind::Comment), 1u);
  EXPECT_EQ(count_kind(relexed, TokenKind::StringLiteral), 0u);
}

TEST(Translit, EmptyInput) {
  const auto tr = mlcompat::transliterate({}, default_ruleset());
  EXPECT_EQ(tr.output, "");
  EXPECT_EQ(tr.report.total_fired(), 0u);
  EXPECT_EQ(tr.report.rules_fired.size(), default_ruleset().rules.size());
  EXPECT_TRUE(tr.report.warnings.empty());
}

TEST(Translit, CallArgument) {
  const auto tr = translate_source("imshow('img.png')", default_ruleset());
  EXPECT_EQ(tr.output, "imshow(\"img.png\")");
  EXPECT_EQ(tr.report.rules_fired.at("quote-string"), 1u);
}

TEST(Translit, TransposeUntouched) {
  const auto tr = translate_source("B = A';", default_ruleset());
  EXPECT_EQ(tr.output, "B = A';");
  EXPECT_EQ(tr.report.rules_fired.at("quote-string"), 0u);
  EXPECT_EQ(tr.report.total_fired(), 0u);
}

TEST(Translit, NotEqual) {
  const auto tr = translate_source("if a ~= b, end", default_ruleset());
  EXPECT_EQ(tr.output, "if a != b, end");
  EXPECT_EQ(tr.report.rules_fired.at("not-equal"), 1u);
}

TEST(Translit, LineContinuationWarns) {
  const auto tr = translate_source("x = [1, 2, ... more\n     3];\n", default_ruleset());
  EXPECT_EQ(tr.output, "x = [1, 2,  #more\n     3];\n");
  ASSERT_EQ(tr.report.warnings.size(), 1u);
  EXPECT_EQ(tr.report.warnings[0].span.line, 1u);
  EXPECT_EQ(tr.report.warnings[0].span.col, 12u);
  EXPECT_EQ(tr.report.rules_fired.at("line-continuation"), 1u);
}

TEST(Translit, UnterminatedStringBecomesWarning) {
  const auto tr = translate_source("s = 'open\nt = 1;\n", default_ruleset());
  EXPECT_EQ(tr.output, "s = 'open\nt = 1;\n");
  ASSERT_EQ(tr.report.warnings.size(), 1u);
}

TEST(Translit, PassthroughRulesNeverCountAsFired) {
  const auto tr = translate_source("disp(A.*B'); printf(x.^2)", default_ruleset());
  EXPECT_EQ(tr.output, "disp(A.*B'); printf(x.^2)");
  EXPECT_EQ(tr.report.total_fired(), 0u);
}

TEST(Translit, GoldenFixtures) {
  for (const char* name : {"janus", "janus2"}) {
    const auto src = mlcompat::read_file(oracle::source_dir() / "corpus" / (std::string(name) + ".m"));
    const auto golden =
        mlcompat::read_file(oracle::source_dir() / "tests/golden" / (std::string(name) + ".jl"));
    const auto tr = translate_source(src, default_ruleset());
    EXPECT_EQ(tr.output, golden) << name;

    const auto in = tokenize(src).tokens;
    const auto out = tokenize(tr.output, Dialect::JuliaOutput).tokens;
    EXPECT_EQ(count_kind(out, TokenKind::Transpose), count_kind(in, TokenKind::Transpose));
    for (const auto& t : out) {
      if (t.kind == TokenKind::StringLiteral) {
        EXPECT_EQ(t.text.front(), '"') << t.text;
      }
      if (t.kind == TokenKind::Comment) {
        EXPECT_EQ(t.text.front(), '#') << t.text;
      }
    }
  }
}

// Every input token lands in exactly one site, in order; a site's text
// differs from its input exactly when a rule fired there.
TEST(Translit, NeverDrop) {
  for (const auto& f : corpus_files()) {
    const auto src = mlcompat::read_file(f);
    const auto toks = tokenize(src).tokens;
    const auto tr = mlcompat::transliterate(toks, default_ruleset());
    std::size_t next = 0;
    std::map<std::string, std::size_t> fired;
    std::string rebuilt_input;
    for (const auto& s : tr.sites) {
      ASSERT_EQ(s.first_token, next);
      std::string in;
      for (std::size_t k = 0; k < s.token_count; ++k) in += toks[s.first_token + k].text;
      rebuilt_input += in;
      next += s.token_count;
      EXPECT_EQ(s.rewritten, s.text != in);
      if (s.rewritten) {
        EXPECT_FALSE(s.rule_id.empty());
        ++fired[s.rule_id];
      }
    }
    EXPECT_EQ(next, toks.size());
    EXPECT_EQ(rebuilt_input, src);
    for (const auto& [id, n] : tr.report.rules_fired)
      EXPECT_EQ(n, fired.count(id) ? fired[id] : 0u) << f << " " << id;
  }
}

// Re-lexed output token count only moves at rewritten sites.
TEST(Translit, Conservation) {
  for (const auto& f : corpus_files()) {
    const auto src = mlcompat::read_file(f);
    const auto toks = tokenize(src).tokens;
    const auto tr = mlcompat::transliterate(toks, default_ruleset());
    std::size_t expected = 0;
    std::size_t differing = 0;
    for (const auto& s : tr.sites) {
      if (s.rewritten) {
        expected += tokenize(s.text, Dialect::JuliaOutput).tokens.size();
        ++differing;
      } else {
        expected += s.token_count;
      }
    }
    EXPECT_EQ(tokenize(tr.output, Dialect::JuliaOutput).tokens.size(), expected) << f;
    EXPECT_EQ(tr.report.total_fired(), differing);
  }
}

TEST(Translit, Idempotence) {
  for (const auto& f : corpus_files()) {
    const auto once = translate_source(mlcompat::read_file(f), default_ruleset());
    const auto twice = translate_source(once.output, default_ruleset());
    EXPECT_EQ(twice.output, once.output) << f;
    EXPECT_EQ(twice.report.total_fired(), 0u) << f;
  }
}

TEST(Translit, Determinism) {
  const auto src = mlcompat::read_file(oracle::source_dir() / "corpus/janus.m");
  const auto a = translate_source(src, default_ruleset());
  const auto b = translate_source(src, default_ruleset());
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(mlcompat::to_json(a.report), mlcompat::to_json(b.report));
}

TEST(Translit, RosettaWritesAndFixpoint) {
  const auto dir = oracle::scratch_dir("rosetta");
  const auto out = dir / "janus.jl";
  const auto report = mlcompat::rosetta(oracle::source_dir() / "corpus/janus.m", out, default_ruleset());
  EXPECT_EQ(mlcompat::read_file(out),
            mlcompat::read_file(oracle::source_dir() / "tests/golden/janus.jl"));
  EXPECT_EQ(report.output_bytes, fs::file_size(out));

  const auto again = mlcompat::rosetta(out, dir / "again.jl", default_ruleset());
  EXPECT_EQ(mlcompat::read_file(dir / "again.jl"), mlcompat::read_file(out));
  EXPECT_EQ(again.total_fired(), 0u);

  mlcompat::write_file_atomic(dir / "empty.m", "");
  const auto empty = mlcompat::rosetta(dir / "empty.m", dir / "empty.jl", default_ruleset());
  EXPECT_EQ(mlcompat::read_file(dir / "empty.jl"), "");
  EXPECT_EQ(empty.total_fired(), 0u);

  for (const auto& e : fs::directory_iterator(dir))
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Translit, MissingInputIsIoError) {
  EXPECT_THROW(mlcompat::rosetta("/nonexistent/missing.m", "/tmp/x.jl", default_ruleset()),
               mlcompat::IoError);
  const auto dir = oracle::scratch_dir("unwritable");
  mlcompat::write_file_atomic(dir / "a.m", "x = 1;\n");
  EXPECT_THROW(mlcompat::rosetta(dir / "a.m", dir / "no/such/dir/a.jl", default_ruleset()),
               mlcompat::IoError);
  fs::remove_all(dir);
}

TEST(Translit, TreeIsDeterministicAcrossThreadCounts) {
  const auto base = oracle::scratch_dir("tree");
  std::vector<std::string> outputs;
  std::vector<std::string> reports;
  for (unsigned threads : {1u, 2u, 4u, 8u}) {
    const auto out = base / ("t" + std::to_string(threads));
    const auto results =
        mlcompat::translate_tree(oracle::source_dir() / "corpus", out, default_ruleset(), threads);
    std::string all, rep;
    for (const auto& r : results) {
      all += fs::relative(r.output, out).generic_string() + "\n" + mlcompat::read_file(r.output);
      rep += mlcompat::to_json(r.report).dump();
    }
    EXPECT_EQ(results.size(), corpus_files().size());
    outputs.push_back(all);
    reports.push_back(rep);
  }
  for (std::size_t i = 1; i < outputs.size(); ++i) {
    EXPECT_EQ(outputs[i], outputs[0]);
    EXPECT_EQ(reports[i], reports[0]);
  }
  EXPECT_TRUE(fs::exists(base / "t1/bench/fib.jl"));
  fs::remove_all(base);
}

TEST(Translit, RuleSetFromJson) {
  const auto j = nlohmann::json::parse(R"({
    "target_dialect": "JuliaLegacy", "version": "test",
    "rules": [
      {"id": "comment", "enabled": false},
      {"id": "quote-string"},
      {"id": "dot-times", "pattern": [{"kind": "Identifier"}, {"kind": "Operator", "text": ".*"},
                                      {"kind": "Identifier"}],
       "emit": "{0} .* {2} {{x}}"}
    ]})");
  const auto rs = mlcompat::ruleset_from_json(j);
  const auto tr = translate_source("c = a.*b % 'q'", rs);
  EXPECT_EQ(tr.output, "c = a .* b {x} % 'q'");
  EXPECT_EQ(tr.report.rules_fired.at("dot-times"), 1u);
  EXPECT_EQ(tr.report.rules_fired.count("comment"), 0u);
}

TEST(Translit, RuleSetErrors) {
  auto bad = [](const char* text) {
    EXPECT_THROW(mlcompat::ruleset_from_json(nlohmann::json::parse(text)), mlcompat::RuleSetError)
        << text;
  };
  bad(R"({"rules": [{"id": "nope"}]})");
  bad(R"({"rules": [{"id": "comment"}, {"id": "comment"}]})");
  bad(R"({"rules": [{"id": "x", "pattern": [{"kind": "Bogus"}], "emit": ""}]})");
  bad(R"({"rules": [{"id": "x", "pattern": [{"kind": "Identifier"}], "emit": "{3}"}]})");
  bad(R"({"rules": [{"id": "x", "pattern": [], "emit": ""}]})");
  bad(R"({"rules": [{"id": "x", "pattern": [{"kind": "Identifier"}]}]})");
  bad(R"({"target_dialect": "Python", "rules": []})");
  bad(R"({"version": "1"})");
}

TEST(Translit, ShippedRuleFileMatchesDefault) {
  const auto rs = mlcompat::load_ruleset(oracle::source_dir() / "data/julia_legacy_rules.json");
  EXPECT_EQ(mlcompat::ruleset_to_json(rs), mlcompat::ruleset_to_json(default_ruleset()));
  const auto src = mlcompat::read_file(oracle::source_dir() / "corpus/janus.m");
  EXPECT_EQ(translate_source(src, rs).output, translate_source(src, default_ruleset()).output);
}

TEST(Translit, EnvironmentSelectsRuleSet) {
  const auto dir = oracle::scratch_dir("env");
  const auto path = dir / "rules.json";
  mlcompat::write_file_atomic(path, R"({"rules": [{"id": "not-equal"}]})");
  ::setenv("ROSETTA_RULES", path.c_str(), 1);
  const auto rs = mlcompat::ruleset_from_environment();
  ::unsetenv("ROSETTA_RULES");
  ASSERT_EQ(rs.rules.size(), 1u);
  EXPECT_EQ(translate_source("a ~= 'b'", rs).output, "a != 'b'");
  EXPECT_EQ(mlcompat::ruleset_from_environment().rules.size(), default_ruleset().rules.size());
  fs::remove_all(dir);
}

TEST(Translit, ReportJsonShape) {
  const auto tr = translate_source("x = 1 + ...\n 2; % c\n", default_ruleset());
  const auto j = mlcompat::to_json(tr.report);
  EXPECT_EQ(j["input_tokens"], tr.report.input_tokens);
  EXPECT_EQ(j["output_bytes"], tr.output.size());
  EXPECT_EQ(j["rules_fired"]["comment"], 1);
  ASSERT_EQ(j["warnings"].size(), 1u);
  EXPECT_EQ(j["warnings"][0]["line"], 1);
}

}  // namespace
