#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sememe::data {

/// Token <-> contiguous id map with three reserved ids.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kEos = 2;
  static constexpr int kReserved = 3;

  Vocab();

  // Rebuilds a vocab from its full token list (reserved tokens first).
  static Vocab from_tokens(const std::vector<std::string>& tokens);

  // Returns the existing id or appends the token.
  int add(const std::string& token);
  // Unknown tokens map to kUnk.
  int id(const std::string& token) const;
  std::optional<int> find(const std::string& token) const;
  const std::string& token(int id) const;

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace sememe::data
