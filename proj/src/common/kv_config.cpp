#include "sememe/common/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char delimiter) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == delimiter) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(fmt::format("config line {}: expected key = value, got '{}'", line_no, line));
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(fmt::format("config line {}: empty key", line_no));
    config.set(key, trim(line.substr(eq + 1)));
  }
  return config;
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

void KeyValueConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError(fmt::format("override '{}' is not of the form key=value", assignment));
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool KeyValueConfig::contains(const std::string& key) const { return entries_.count(key) != 0; }

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return find(key).value_or(fallback);
}

namespace {

template <typename T>
T parse_integral(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(fmt::format("config key '{}': '{}' is not a valid integer", key, text));
  }
  return value;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return value;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("config key '{}': '{}' is not a valid number", key, text));
  }
}

}  // namespace

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  auto v = find(key);
  return v ? parse_integral<std::int64_t>(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  auto v = find(key);
  return v ? parse_integral<std::uint64_t>(key, *v) : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto v = find(key);
  return v ? parse_double(key, *v) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
  throw UsageError(fmt::format("config key '{}': '{}' is not a boolean", key, *v));
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                const std::vector<double>& fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& part : split(*v, ',')) out.push_back(parse_double(key, trim(part)));
  return out;
}

std::string KeyValueConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) { return fmt::format("{:016x}", value); }

}  // namespace sememe
