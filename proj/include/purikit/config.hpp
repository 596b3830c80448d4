#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace purikit {

/// Flat `key = value` text. `#` starts a comment line; blank lines are
/// ignored; keys are unique. Lookups remember which keys were read so that
/// misspelled keys can be reported.
class KeyValues {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  static KeyValues parse(std::istream& is);
  static KeyValues parse(const std::string& text);
  static KeyValues load(const std::filesystem::path& path);

  bool contains(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  /// Typed getters return `fallback` when the key is absent and throw
  /// ParseError (carrying the entry's line) on malformed values.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  /// Keys never looked up, in file order.
  std::vector<std::string> unused_keys() const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  const Entry* find(const std::string& key) const;

  std::vector<Entry> entries_;
  mutable std::vector<char> used_;
};

}  // namespace purikit
