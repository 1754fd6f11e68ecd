#pragma once

// Reader for the small TOML-like key/value format used by registry and run
// config files:
//
//   # comment
//   key = "string" | 123 | 1.5e-3 | true | ["a", "b", 3]
//   [section.name]
//   key = ...
//
// Keys keep file order. Duplicate keys and duplicate sections are errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace intermarket {

struct KvValue {
  enum class Kind { Bool, Int, Float, String, List };
  Kind kind = Kind::String;
  bool b = false;
  std::int64_t i = 0;
  double f = 0.0;
  std::string s;
  std::vector<KvValue> list;

  std::string as_string(const std::string& key) const;
  std::int64_t as_int(const std::string& key) const;
  double as_double(const std::string& key) const;  // accepts Int too
  bool as_bool(const std::string& key) const;
  std::vector<std::string> as_string_list(const std::string& key) const;
};

struct KvSection {
  std::string name;  // empty for the root section
  int line = 0;
  std::vector<std::pair<std::string, KvValue>> entries;

  const KvValue* find(const std::string& key) const;
};

struct KvDocument {
  std::vector<KvSection> sections;  // sections[0] is the root

  const KvSection& root() const { return sections.front(); }
};

KvDocument parse_kv(const std::string& text);
KvDocument parse_kv_file(const std::filesystem::path& path);

}  // namespace intermarket
