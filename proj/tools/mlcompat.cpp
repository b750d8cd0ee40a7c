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

// mlcompat: translate m-files, run the image programs and the benchmark
// suite, inspect the namespace manifest.

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlcompat/mlcompat.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kStrictWarnings = 3,
  kCorrectness = 4,
};

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error (bad flags or arguments, invalid rule set or calibration)\n"
    "  2  I/O error (missing, unreadable, malformed or unwritable files)\n"
    "  3  translation produced warnings and --strict was given\n"
    "  4  a benchmark kernel failed its correctness check\n";

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

mlcompat::RuleSet pick_rules(const std::string& rules_path) {
  if (!rules_path.empty()) return mlcompat::load_ruleset(rules_path);
  return mlcompat::ruleset_from_environment();
}

void print_warnings(const fs::path& file, const mlcompat::TranslationReport& r) {
  for (const auto& w : r.warnings)
    std::cerr << file.string() << ":" << w.span.line << ":" << w.span.col
              << ": warning: " << w.message << "\n";
}

// ---------------------------------------------------------------------------
// translate

struct TranslateArgs {
  std::string input;
  std::string out;
  std::string rules;
  std::string report;
  bool strict = false;
  unsigned threads = 0;
};

int cmd_translate(const TranslateArgs& a) {
  const auto rules = pick_rules(a.rules);
  const fs::path in(a.input);
  std::size_t warnings = 0;
  ordered_json report;

  if (fs::is_directory(in)) {
    if (a.out.empty()) throw mlcompat::InvalidArgument("directory mode needs --out DIR");
    const auto results = mlcompat::translate_tree(in, a.out, rules, a.threads);
    report["files"] = ordered_json::array();
    for (const auto& f : results) {
      print_warnings(f.input, f.report);
      warnings += f.report.warnings.size();
      report["files"].push_back({{"input", f.input.generic_string()},
                                 {"output", f.output.generic_string()},
                                 {"report", mlcompat::to_json(f.report)}});
    }
    std::cout << "translated " << results.size() << " file(s) into " << a.out << "\n";
  } else {
    fs::path out = a.out.empty() ? fs::path(in).replace_extension(".jl") : fs::path(a.out);
    if (fs::is_directory(out)) out /= fs::path(in.filename()).replace_extension(".jl");
    const auto r = mlcompat::rosetta(in, out, rules);
    print_warnings(in, r);
    warnings = r.warnings.size();
    report = mlcompat::to_json(r);
  }

  if (!a.report.empty()) mlcompat::write_file_atomic(a.report, report.dump(2) + "\n");
  return a.strict && warnings > 0 ? kStrictWarnings : kOk;
}

// ---------------------------------------------------------------------------
// janus / janus2

mlcompat::GrayImage load_image(const fs::path& p, const std::string& format) {
  const auto fmt =
      format.empty() ? mlcompat::image_format_from_path(p) : mlcompat::image_format_from_name(format);
  return mlcompat::load_gray(p, fmt);
}

int cmd_janus(const std::string& image, const std::string& format, int connectivity, bool json) {
  const auto img = load_image(image, format);
  const auto r = mlcompat::janus(img, mlcompat::connectivity_from_int(connectivity));
  if (json) {
    print_json(mlcompat::to_json(r));
  } else {
    std::cout << "level: " << r.threshold_level << "\n"
              << "count: " << r.object_count << "\n"
              << "degenerate: " << (r.degenerate ? "true" : "false") << "\n";
  }
  return kOk;
}

bool is_image_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".PGM" || ext == ".csv" || ext == ".CSV";
}

std::vector<fs::path> image_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

struct Group {
  std::string name;
  std::vector<fs::path> files;
  std::vector<std::size_t> raw;
};

int cmd_janus2(const std::string& dir, std::optional<double> min_ref,
               std::optional<double> max_ref, bool json) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw mlcompat::IoError("not a directory: " + dir);

  std::vector<Group> groups;
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) subdirs.push_back(e.path());
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& d : subdirs) {
    auto files = image_files(d);
    if (!files.empty()) groups.push_back({d.filename().string(), std::move(files), {}});
  }
  if (groups.empty()) {
    auto files = image_files(root);
    if (!files.empty()) groups.push_back({root.filename().string(), std::move(files), {}});
  }
  if (groups.empty()) throw mlcompat::IoError("no .pgm or .csv images under " + dir);

  std::vector<std::size_t> all;
  for (auto& g : groups) {
    for (const auto& f : g.files) {
      g.raw.push_back(mlcompat::death_pixel_count(load_image(f, "")));
      all.push_back(g.raw.back());
    }
  }

  mlcompat::Calibration cal;
  if (!min_ref || !max_ref) {
    const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
    cal = {static_cast<double>(*lo), static_cast<double>(*hi)};
  }
  if (min_ref) cal.min_ref = *min_ref;
  if (max_ref) cal.max_ref = *max_ref;
  if (!(cal.max_ref > cal.min_ref)) throw mlcompat::BadCalibration(cal.min_ref, cal.max_ref);

  ordered_json out;
  out["min_ref"] = cal.min_ref;
  out["max_ref"] = cal.max_ref;
  out["groups"] = ordered_json::array();
  for (const auto& g : groups) {
    std::vector<mlcompat::DeathSignal> signals;
    for (auto raw : g.raw)
      signals.push_back({raw, mlcompat::normalize_death_signal(static_cast<double>(raw), cal)});
    const auto s = mlcompat::summarize(signals);
    ordered_json jg;
    jg["name"] = g.name;
    jg["n"] = s.n;
    jg["mean"] = s.mean;
    jg["stddev"] = s.stddev;
    jg["signals"] = ordered_json::array();
    for (std::size_t i = 0; i < signals.size(); ++i) {
      auto js = mlcompat::to_json(signals[i]);
      js["file"] = g.files[i].filename().string();
      jg["signals"].push_back(std::move(js));
    }
    out["groups"].push_back(std::move(jg));
  }

  if (json) {
    print_json(out);
  } else {
    std::printf("calibration: min_ref=%g max_ref=%g\n", cal.min_ref, cal.max_ref);
    std::printf("%-24s %4s %12s %12s\n", "group", "n", "mean", "stddev");
    for (const auto& g : out["groups"])
      std::printf("%-24s %4zu %12.3f %12.3f\n", g["name"].get<std::string>().c_str(),
                  g["n"].get<std::size_t>(), g["mean"].get<double>(), g["stddev"].get<double>());
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  mlcompat::bench::SuiteConfig cfg;
  std::string out;
  std::string inject_failure;
};

void require_writable_parent(const fs::path& out) {
  auto parent = out.parent_path();
  if (parent.empty()) parent = ".";
  if (!fs::is_directory(parent) || ::access(parent.c_str(), W_OK) != 0)
    throw mlcompat::IoError("cannot write " + out.string());
  if (fs::exists(out) && ::access(out.c_str(), W_OK) != 0)
    throw mlcompat::IoError("cannot write " + out.string());
}

int cmd_bench(const BenchArgs& a) {
  namespace bench = mlcompat::bench;
  if (!a.out.empty()) require_writable_parent(a.out);

  auto benchmarks = bench::standard_benchmarks(a.cfg);
  if (!a.inject_failure.empty()) bench::break_kernel(benchmarks, a.inject_failure);
  const auto result = bench::run_suite(benchmarks, a.cfg.iterations);

  if (!a.out.empty()) mlcompat::write_file_atomic(a.out, bench::to_jsonl(result.records));

  const auto rel = bench::relative_to(result.records, "fib");
  std::printf("%-16s %14s %14s %10s\n", "benchmark", "median (s)", "min (s)", "vs fib");
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    std::printf("%-16s %14.6e %14.6e %10.3f\n", r.name.c_str(), r.median_seconds, r.min_seconds,
                rel[i].second);
  }
  for (const auto& name : result.failures)
    std::cerr << "error: benchmark '" << name << "' failed its correctness check\n";
  return result.failures.empty() ? kOk : kCorrectness;
}

// ---------------------------------------------------------------------------
// manifest

int cmd_manifest(bool list, const std::string& check, const std::string& registry_path,
                 bool json) {
  const auto reg = registry_path.empty() ? mlcompat::NamespaceRegistry::builtin()
                                         : mlcompat::NamespaceRegistry::load(registry_path);
  if (!check.empty()) {
    const auto before = reg.resolve(check);
    const auto after = reg.with_all_imports().resolve(check);
    if (json) {
      ordered_json j;
      j["name"] = check;
      j["default"] = before.to_string();
      j["imported"] = after.to_string();
      print_json(j);
    } else {
      std::cout << before.to_string() << " / " << after.to_string() << "\n";
    }
    return kOk;
  }
  (void)list;
  if (json) {
    print_json(reg.to_json());
  } else {
    std::printf("%-18s %-12s %s\n", "name", "module", "conflicts_with_base");
    for (const auto& e : reg.to_json())
      std::printf("%-18s %-12s %s\n", e["name"].get<std::string>().c_str(),
                  e["module_tag"].get<std::string>().c_str(),
                  e["conflicts_with_base"].get<bool>() ? "yes" : "no");
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const mlcompat::SyntheticSpec& spec, const std::string& out, bool json) {
  const auto s = mlcompat::generate_synthetic(spec);
  mlcompat::save_pgm(out, s.image);
  if (json) {
    ordered_json j;
    j["output"] = out;
    j["ground_truth_count"] = s.ground_truth_count;
    print_json(j);
  } else {
    std::cout << "wrote " << out << " (" << s.ground_truth_count << " blobs)\n";
  }
  return kOk;
}

int classify(const mlcompat::Error& e) {
  if (dynamic_cast<const mlcompat::IoError*>(&e) || dynamic_cast<const mlcompat::MalformedFile*>(&e) ||
      dynamic_cast<const mlcompat::InvalidUtf8*>(&e))
    return kIo;
  if (dynamic_cast<const mlcompat::CorrectnessFailure*>(&e)) return kCorrectness;
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MATLAB/Octave to Julia transliteration and compatibility toolkit", "mlcompat"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  // translate
  TranslateArgs ta;
  auto* translate = app.add_subcommand("translate", "Transliterate an m-file or a tree of m-files");
  translate->alias("rossetta");
  translate->alias("rosetta");
  translate->add_option("input", ta.input, "m-file or directory")->required();
  translate->add_option("--out,-o", ta.out,
                        "output jl-file, or output directory in directory mode");
  translate->add_option("--rules", ta.rules, "rule set JSON (default: $ROSETTA_RULES, else built-in)");
  translate->add_flag("--strict", ta.strict, "exit 3 if any warning was produced");
  translate->add_option("--report", ta.report, "write the translation report as JSON");
  translate->add_option("--threads", ta.threads, "worker threads in directory mode (0: auto)");

  // janus
  std::string image, format;
  int connectivity = 8;
  bool janus_json = false;
  auto* janus = app.add_subcommand("janus", "Count objects in a gray image");
  janus->add_option("image", image, "PGM or CSV image")->required();
  janus->add_option("--format", format, "pgm or csv (default: from extension)")
      ->check(CLI::IsMember({"pgm", "csv"}));
  janus->add_option("--connectivity", connectivity, "4 or 8")->check(CLI::IsMember({4, 8}));
  janus->add_flag("--json", janus_json, "print JSON");

  // janus2
  std::string group_dir;
  std::optional<double> min_ref, max_ref;
  bool janus2_json = false;
  auto* janus2 = app.add_subcommand("janus2", "Death signal per group of images");
  janus2->add_option("dir", group_dir, "directory with one subdirectory of images per group")
      ->required();
  janus2->add_option("--min-ref", min_ref, "raw count mapped to 0 (default: dataset minimum)");
  janus2->add_option("--max-ref", max_ref, "raw count mapped to 7000 (default: dataset maximum)");
  janus2->add_flag("--json", janus2_json, "print JSON");

  // bench
  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run the micro-benchmark suite");
  bench->add_option("--iterations", ba.cfg.iterations, "timed runs per kernel")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", ba.cfg.seed, "random seed");
  bench->add_option("--out", ba.out, "write records as JSON lines");
  bench->add_option("--fib-n", ba.cfg.fib_n, "fib argument");
  bench->add_option("--mat-mul-n", ba.cfg.rand_mat_mul_n, "rand_mat_mul size")
      ->check(CLI::PositiveNumber);
  bench->add_option("--mat-stat-trials", ba.cfg.rand_mat_stat_trials, "rand_mat_stat trials")
      ->check(CLI::PositiveNumber);
  bench->add_option("--inject-failure", ba.inject_failure)->group("");

  // manifest
  bool list = false, manifest_json = false;
  std::string check, registry_path;
  auto* manifest = app.add_subcommand("manifest", "Inspect the namespace manifest");
  auto* list_opt = manifest->add_flag("--list", list, "list entries");
  auto* check_opt = manifest->add_option("--check", check, "resolve one name");
  list_opt->excludes(check_opt);
  manifest->add_option("--registry", registry_path, "manifest JSON (default: built-in)");
  manifest->add_flag("--json", manifest_json, "print JSON");

  // synth
  mlcompat::SyntheticSpec spec;
  std::string synth_out;
  bool synth_json = false;
  auto* synth = app.add_subcommand("synth", "Write a synthetic blob image as PGM");
  synth->add_option("--out,-o", synth_out, "output PGM")->required();
  synth->add_option("--rows", spec.rows);
  synth->add_option("--cols", spec.cols);
  synth->add_option("--blobs", spec.num_blobs);
  synth->add_option("--radius", spec.blob_radius);
  synth->add_option("--background", spec.background_level);
  synth->add_option("--foreground", spec.foreground_level);
  synth->add_option("--sigma", spec.noise_sigma);
  synth->add_option("--seed", spec.seed);
  synth->add_flag("--json", synth_json, "print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*translate) return cmd_translate(ta);
    if (*janus) return cmd_janus(image, format, connectivity, janus_json);
    if (*janus2) return cmd_janus2(group_dir, min_ref, max_ref, janus2_json);
    if (*bench) return cmd_bench(ba);
    if (*manifest) return cmd_manifest(list, check, registry_path, manifest_json);
    if (*synth) return cmd_synth(spec, synth_out, synth_json);
  } catch (const mlcompat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
