#include "purikit/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "purikit/errors.hpp"

namespace purikit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& text, std::size_t line, const std::string& key) {
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw ParseError(line, "bad value for '" + key + "': '" + text + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

KeyValues KeyValues::parse(std::istream& is) {
  KeyValues kv;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError(line, "empty key");
    if (kv.find(key)) throw ParseError(line, "duplicate key '" + key + "'");
    kv.entries_.push_back({std::move(key), trim(s.substr(eq + 1)), line});
  }
  kv.used_.assign(kv.entries_.size(), 0);
  return kv;
}

KeyValues KeyValues::parse(const std::string& text) {
  std::istringstream is(text);
  return parse(is);
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  return parse(is);
}

const KeyValues::Entry* KeyValues::find(const std::string& key) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].key == key) {
      if (i < used_.size()) used_[i] = 1;
      return &entries_[i];
    }
  }
  return nullptr;
}

bool KeyValues::contains(const std::string& key) const { return find(key) != nullptr; }

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  return e ? parse_number<double>(e->value, e->line, key) : fallback;
}

long long KeyValues::get_int(const std::string& key, long long fallback) const {
  const Entry* e = find(key);
  return e ? parse_number<long long>(e->value, e->line, key) : fallback;
}

std::uint64_t KeyValues::get_uint(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  return e ? parse_number<std::uint64_t>(e->value, e->line, key) : fallback;
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ParseError(e->line, "bad boolean for '" + key + "': '" + e->value + "'");
}

std::vector<double> KeyValues::get_doubles(const std::string& key,
                                           const std::vector<double>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& item : split_commas(e->value))
    out.push_back(parse_number<double>(item, e->line, key));
  return out;
}

std::vector<std::string> KeyValues::get_strings(const std::string& key,
                                                const std::vector<std::string>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  auto out = split_commas(e->value);
  for (const auto& item : out)
    if (item.empty()) throw ParseError(e->line, "empty list item in '" + key + "'");
  return out;
}

std::vector<std::string> KeyValues::unused_keys() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (!used_[i]) out.push_back(entries_[i].key);
  return out;
}

}  // namespace purikit
