#include "sememe/data/vocab.hpp"

#include <fmt/format.h>

#include "sememe/common/error.hpp"

namespace sememe::data {

namespace {
const char* const kReservedTokens[] = {"<pad>", "<unk>", "<eos>"};
}

Vocab::Vocab() {
  for (const char* t : kReservedTokens) add(t);
}

Vocab Vocab::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < static_cast<std::size_t>(kReserved)) throw DataError("vocab is missing its reserved tokens");
  for (int i = 0; i < kReserved; ++i) {
    if (tokens[i] != kReservedTokens[i]) throw DataError(fmt::format("vocab slot {} must be '{}'", i, kReservedTokens[i]));
  }
  Vocab v;
  for (std::size_t i = kReserved; i < tokens.size(); ++i) {
    if (v.find(tokens[i])) throw DataError(fmt::format("vocab token '{}' appears twice", tokens[i]));
    v.add(tokens[i]);
  }
  return v;
}

int Vocab::add(const std::string& token) {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

int Vocab::id(const std::string& token) const { return find(token).value_or(kUnk); }

std::optional<int> Vocab::find(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw DataError(fmt::format("vocab id {} out of range (size {})", id, tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

}  // namespace sememe::data
