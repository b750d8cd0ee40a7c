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

// Catalog of compatibility functions and the export policy that keeps them
// from shadowing target base-library names.
//
// A plain `using` of the package exports only names that do not collide with
// the target's base namespace. Colliding names (max, min, ...) stay hidden
// until the module that owns them is imported explicitly.

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"
#include "mlcompat/error.hpp"
#include "mlcompat/file_io.hpp"

namespace mlcompat {

enum class ModuleTag { MathTools, StringTools, ImageTools, Support };

inline constexpr std::array<ModuleTag, 4> kAllModules = {
    ModuleTag::MathTools, ModuleTag::StringTools, ModuleTag::ImageTools, ModuleTag::Support};

inline std::string_view module_name(ModuleTag m) {
  switch (m) {
    case ModuleTag::MathTools: return "MathTools";
    case ModuleTag::StringTools: return "StringTools";
    case ModuleTag::ImageTools: return "ImageTools";
    case ModuleTag::Support: return "Support";
  }
  return "Support";
}

inline std::optional<ModuleTag> module_from_name(std::string_view name) {
  for (auto m : kAllModules)
    if (module_name(m) == name) return m;
  return std::nullopt;
}

// Target base-library names that MATLAB code also uses with different
// semantics. Frozen; registry entries are flagged exactly when listed here.
inline constexpr std::array<std::string_view, 24> kBaseConflicts = {
    "abs",   "all",   "any",     "ceil",    "cumsum", "exp",  "find",  "floor",
    "isempty", "length", "log",  "max",     "mean",   "min",  "ones",  "prod",
    "reshape", "round", "size",  "sort",    "sqrt",   "std",  "strcat", "sum"};

inline bool is_base_conflict(std::string_view name) {
  for (auto n : kBaseConflicts)
    if (n == name) return true;
  return false;
}

struct RegistryEntry {
  ModuleTag module = ModuleTag::Support;
  bool conflicts_with_base = false;

  friend bool operator==(const RegistryEntry&, const RegistryEntry&) = default;
};

struct Resolution {
  enum class Kind { CompatExported, CompatRequiresImport, NotFound };
  Kind kind = Kind::NotFound;
  std::optional<ModuleTag> module;  // set for CompatRequiresImport

  std::string to_string() const {
    switch (kind) {
      case Kind::CompatExported: return "CompatExported";
      case Kind::CompatRequiresImport:
        return "CompatRequiresImport(" + std::string(module_name(*module)) + ")";
      case Kind::NotFound: return "NotFound";
    }
    return "NotFound";
  }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

class NamespaceRegistry {
 public:
  NamespaceRegistry() = default;
  explicit NamespaceRegistry(std::map<std::string, RegistryEntry, std::less<>> entries,
                             std::set<ModuleTag> imported = {})
      : entries_(std::move(entries)), imported_(std::move(imported)) {}

  /// Every compatibility function this library implements.
  static NamespaceRegistry builtin() {
    std::map<std::string, RegistryEntry, std::less<>> e;
    auto add = [&](const char* name, ModuleTag m) { e[name] = {m, is_base_conflict(name)}; };
    add("max", ModuleTag::MathTools);
    add("min", ModuleTag::MathTools);
    add("find", ModuleTag::MathTools);
    add("num2str", ModuleTag::StringTools);
    add("strcat", ModuleTag::StringTools);
    add("sprintf", ModuleTag::StringTools);
    add("imread", ModuleTag::ImageTools);
    add("imhist", ModuleTag::ImageTools);
    add("graythresh", ModuleTag::ImageTools);
    add("im2bw", ModuleTag::ImageTools);
    add("mat2gray", ModuleTag::ImageTools);
    add("bwlabel", ModuleTag::ImageTools);
    add("count_foreground", ModuleTag::ImageTools);
    add("rosetta", ModuleTag::Support);
    return NamespaceRegistry(std::move(e));
  }

  const auto& entries() const { return entries_; }
  const std::set<ModuleTag>& imported_modules() const { return imported_; }

  /// Copy with `module` added to the imported set.
  NamespaceRegistry with_import(ModuleTag module) const {
    auto copy = *this;
    copy.imported_.insert(module);
    return copy;
  }

  NamespaceRegistry with_all_imports() const {
    auto copy = *this;
    copy.imported_.insert(kAllModules.begin(), kAllModules.end());
    return copy;
  }

  Resolution resolve(std::string_view name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) return {};
    const auto& entry = it->second;
    if (entry.conflicts_with_base && !imported_.contains(entry.module))
      return {Resolution::Kind::CompatRequiresImport, entry.module};
    return {Resolution::Kind::CompatExported, std::nullopt};
  }

  /// Manifest entries, one object per name in name order.
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& [name, entry] : entries_) {
      nlohmann::ordered_json je;
      je["name"] = name;
      je["module_tag"] = module_name(entry.module);
      je["conflicts_with_base"] = entry.conflicts_with_base;
      j.push_back(je);
    }
    return j;
  }

  static NamespaceRegistry from_json(const nlohmann::json& j) {
    std::map<std::string, RegistryEntry, std::less<>> e;
    try {
      for (const auto& je : j) {
        const auto name = je.at("name").get<std::string>();
        const auto tag_text = je.at("module_tag").get<std::string>();
        const auto tag = module_from_name(tag_text);
        if (!tag) throw InvalidArgument("unknown module tag " + tag_text + " for " + name);
        if (!e.emplace(name, RegistryEntry{*tag, je.at("conflicts_with_base").get<bool>()})
                 .second)
          throw InvalidArgument("duplicate registry entry " + name);
      }
    } catch (const nlohmann::json::exception& ex) {
      throw InvalidArgument(std::string("malformed registry manifest: ") + ex.what());
    }
    return NamespaceRegistry(std::move(e));
  }

  static NamespaceRegistry load(const std::filesystem::path& path) {
    try {
      return from_json(nlohmann::json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& ex) {
      throw InvalidArgument("cannot parse " + path.string() + ": " + ex.what());
    }
  }

 private:
  std::map<std::string, RegistryEntry, std::less<>> entries_;
  std::set<ModuleTag> imported_;
};

inline Resolution resolve(const NamespaceRegistry& registry, std::string_view name) {
  return registry.resolve(name);
}

}  // namespace mlcompat
