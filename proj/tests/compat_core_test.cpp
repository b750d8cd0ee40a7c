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

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mlcompat/math_tools.hpp"
#include "mlcompat/registry.hpp"
#include "mlcompat/string_tools.hpp"
#include "oracles.hpp"

namespace {

using mlcompat::Matrix;
using mlcompat::ModuleTag;
using mlcompat::NamespaceRegistry;
using mlcompat::Resolution;

constexpr ModuleTag kModules[] = {ModuleTag::MathTools, ModuleTag::StringTools,
                                  ModuleTag::ImageTools, ModuleTag::Support};

TEST(Registry, MaxNeedsImport) {
  const auto reg = NamespaceRegistry::builtin();
  const auto r = mlcompat::resolve(reg, "max");
  EXPECT_EQ(r.kind, Resolution::Kind::CompatRequiresImport);
  EXPECT_EQ(r.module, ModuleTag::MathTools);
  EXPECT_EQ(r.to_string(), "CompatRequiresImport(MathTools)");
  EXPECT_EQ(reg.with_import(ModuleTag::MathTools).resolve("max").kind,
            Resolution::Kind::CompatExported);
  EXPECT_EQ(reg.with_import(ModuleTag::ImageTools).resolve("max").kind,
            Resolution::Kind::CompatRequiresImport);
}

TEST(Registry, NonConflictingNamesAreExported) {
  const auto reg = NamespaceRegistry::builtin();
  EXPECT_EQ(reg.resolve("graythresh").kind, Resolution::Kind::CompatExported);
  EXPECT_EQ(reg.resolve("num2str").kind, Resolution::Kind::CompatExported);
  EXPECT_EQ(reg.resolve("nosuchfn").kind, Resolution::Kind::NotFound);
  EXPECT_EQ(reg.resolve("nosuchfn").to_string(), "NotFound");
}

TEST(Registry, ConflictFlagsFollowFrozenList) {
  const auto reg = NamespaceRegistry::builtin();
  for (const auto& [name, entry] : reg.entries()) {
    bool listed = false;
    for (auto n : mlcompat::kBaseConflicts) listed |= n == name;
    EXPECT_EQ(entry.conflicts_with_base, listed) << name;
  }
}

// Soundness and monotonicity over every subset of imported modules.
TEST(Registry, ImportMonotonicity) {
  const auto base = NamespaceRegistry::builtin();
  std::vector<std::string> names;
  for (const auto& [n, e] : base.entries()) names.push_back(n);
  names.push_back("not_registered");
  for (unsigned mask = 0; mask < 16; ++mask) {
    auto reg = base;
    for (unsigned m = 0; m < 4; ++m)
      if (mask & (1u << m)) reg = reg.with_import(kModules[m]);
    for (unsigned m = 0; m < 4; ++m) {
      const auto more = reg.with_import(kModules[m]);
      for (const auto& n : names) {
        const auto before = reg.resolve(n);
        EXPECT_EQ(before, reg.resolve(n));  // pure
        if (before.kind == Resolution::Kind::CompatExported) {
          EXPECT_EQ(more.resolve(n).kind, Resolution::Kind::CompatExported) << n;
        }
        if (before.kind == Resolution::Kind::NotFound) {
          EXPECT_EQ(more.resolve(n).kind, Resolution::Kind::NotFound) << n;
        }
      }
    }
  }
  for (const auto& n : names)
    EXPECT_NE(base.with_all_imports().resolve(n).kind, Resolution::Kind::CompatRequiresImport);
}

TEST(Registry, ShippedManifestMatchesBuiltin) {
  const auto shipped = NamespaceRegistry::load(oracle::source_dir() / "data/registry.json");
  EXPECT_EQ(shipped.entries(), NamespaceRegistry::builtin().entries());
  EXPECT_EQ(NamespaceRegistry::from_json(NamespaceRegistry::builtin().to_json()).entries(),
            NamespaceRegistry::builtin().entries());
}

TEST(Registry, MalformedManifest) {
  EXPECT_THROW(NamespaceRegistry::from_json(nlohmann::json::parse(R"([{"name": "x"}])")),
               mlcompat::Error);
  EXPECT_THROW(NamespaceRegistry::from_json(
                   nlohmann::json::parse(R"([{"name": "x", "module_tag": "Nope"}])")),
               mlcompat::Error);
}

TEST(MathTools, MaxExamples) {
  EXPECT_EQ(mlcompat::mx_max(Matrix{{1, 2, 3}})(0, 0), 3.0);
  EXPECT_EQ(mlcompat::mx_max(Matrix{{5}})(0, 0), 5.0);
  const auto m = mlcompat::mx_max(Matrix{{1, 4}, {3, 2}});
  ASSERT_EQ(m.rows(), 1u);
  ASSERT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(0, 0), 3.0);
  EXPECT_EQ(m(0, 1), 4.0);
  EXPECT_EQ(mlcompat::mx_max(Matrix{{1}, {7}, {2}})(0, 0), 7.0);
  EXPECT_THROW(mlcompat::mx_max(Matrix()), mlcompat::EmptyInput);
}

TEST(MathTools, MaxNanPolicy) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(mlcompat::mx_max(Matrix{{nan, 2, 1}})(0, 0), 2.0);
  const auto m = mlcompat::mx_max(Matrix{{nan, 1}, {nan, 0}});
  EXPECT_TRUE(std::isnan(m(0, 0)));
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(mlcompat::mx_min(Matrix{{nan, 2, -1}})(0, 0), -1.0);
}

TEST(MathTools, MaxAgreesWithLoopOracle) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 20);
  std::uniform_real_distribution<double> val(-1e3, 1e3);
  std::bernoulli_distribution is_nan(0.05);
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix m(dim(rng), dim(rng));
    for (auto& x : m.data())
      x = is_nan(rng) ? std::numeric_limits<double>::quiet_NaN() : val(rng);
    const auto got = mlcompat::mx_max(m);
    const auto want = oracle::loop_max(m);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (std::isnan(want[i])) EXPECT_TRUE(std::isnan(got.data()[i]));
      else EXPECT_EQ(got.data()[i], want[i]);
    }
  }
}

TEST(MathTools, Find) {
  const auto f = mlcompat::mx_find(Matrix{{0, 3}, {4, 0}});
  ASSERT_EQ(f.rows(), 2u);
  EXPECT_EQ(f(0, 0), 2.0);  // column-major: (2,1) then (1,2)
  EXPECT_EQ(f(1, 0), 3.0);
  const auto r = mlcompat::mx_find(Matrix{{0, 1, 1}});
  EXPECT_EQ(r.rows(), 1u);
  EXPECT_EQ(r.cols(), 2u);
}

TEST(StringTools, Num2strExamples) {
  EXPECT_EQ(mlcompat::num2str(3), "3");
  EXPECT_EQ(mlcompat::num2str(3.14159265), "3.1416");
  EXPECT_EQ(mlcompat::num2str(std::nan("")), "NaN");
  EXPECT_EQ(mlcompat::num2str(-INFINITY), "-Inf");
  EXPECT_EQ(mlcompat::num2str(-0.5), "-0.5");
  EXPECT_EQ(mlcompat::num2str(3.14159265, 8), "3.1415927");
  EXPECT_EQ(mlcompat::num2str(0.0), "0");
  EXPECT_THROW(mlcompat::num2str(1.5, 0), mlcompat::InvalidArgument);
}

TEST(StringTools, Num2strIntegerRoundTrip) {
  for (long v = -1000000; v <= 1000000; v += (v > -1000 && v < 1000) ? 1 : 997) {
    const auto s = mlcompat::num2str(static_cast<double>(v));
    ASSERT_EQ(std::stol(s), v) << s;
    ASSERT_EQ(s.find('.'), std::string::npos);
  }
  EXPECT_EQ(mlcompat::num2str(1e6), "1000000");
  EXPECT_EQ(mlcompat::num2str(-1e6), "-1000000");
}

TEST(StringTools, Strcat) {
  EXPECT_EQ(mlcompat::strcat({"a", "b"}), "ab");
  EXPECT_EQ(mlcompat::strcat(std::span<const std::string>{}), "");
  EXPECT_EQ(mlcompat::strcat({"janus", ".jl"}), "janus.jl");
}

TEST(StringTools, Sprintf) {
  using mlcompat::mx_sprintf;
  EXPECT_EQ(mx_sprintf("%d and %s\\n", {1.0, std::string("x")}), "1 and x\n");
  EXPECT_EQ(mx_sprintf("%5.2f|", {3.14159}), " 3.14|");
  EXPECT_EQ(mx_sprintf("%d,", {1.0, 2.0, 3.0}), "1,2,3,");
  EXPECT_EQ(mx_sprintf("%d", {1.5}), "1.500000e+00");
  EXPECT_EQ(mx_sprintf("%s", {65.0}), "A");
  EXPECT_EQ(mx_sprintf("100%%", {}), "100%");
  EXPECT_EQ(mx_sprintf("a=%d b=%d", {1.0}), "a=1 b=");
  EXPECT_EQ(mx_sprintf("%x", {255.0}), "ff");
  EXPECT_EQ(mx_sprintf("%s", {std::string(2000, 'z')}).size(), 2000u);
  EXPECT_THROW(mx_sprintf("%q", {1.0}), mlcompat::InvalidArgument);
}

}  // namespace
