#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sememe {

/// Flat key=value configuration.
///
/// File syntax: one `key = value` per line, `#` starts a comment, blank lines
/// are ignored. Keys are case sensitive and may contain dots
/// (`loss.mode`, `baseline.k`). Later assignments override earlier ones, which
/// is how command line `--key=value` overrides are layered on a file.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig from_file(const std::filesystem::path& path);
  static KeyValueConfig from_string(const std::string& text);

  void set(const std::string& key, std::string value);
  void merge(const KeyValueConfig& other);
  // Parses "key=value"; throws UsageError when there is no '='.
  void set_assignment(const std::string& assignment);

  bool contains(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Canonical `key=value\n` rendering, sorted by key. Stable input for hashing.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> entries_;
};

// 64-bit FNV-1a; stable across runs and platforms.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char delimiter);

}  // namespace sememe
