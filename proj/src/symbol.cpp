#include "sp/symbol.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace sp {
namespace {

class TokenTable {
 public:
  TokenId intern(std::string_view text) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(text); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = index_.find(text); it != index_.end()) return it->second;
    const auto id = static_cast<TokenId>(texts_.size());
    const std::string& stored = texts_.emplace_back(text);
    index_.emplace(std::string_view(stored), id);
    return id;
  }

  const std::string& text(TokenId id) const {
    std::shared_lock lock(mutex_);
    if (id >= texts_.size()) throw std::out_of_range("unknown token id");
    return texts_[id];
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return texts_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::deque<std::string> texts_;  // deque: element addresses are stable
  std::unordered_map<std::string_view, TokenId> index_;
};

TokenTable& table() {
  static TokenTable instance;
  return instance;
}

}  // namespace

TokenId intern_token(std::string_view text) {
  if (text.empty()) throw FormatError("empty token");
  for (unsigned char c : text) {
    if (std::isspace(c)) throw FormatError("token contains whitespace: '" + std::string(text) + "'");
  }
  return table().intern(text);
}

const std::string& token_text(TokenId token) { return table().text(token); }

std::size_t interned_count() { return table().size(); }

char role_char(Role role) { return role == Role::id ? 'I' : 'C'; }

Role role_from_char(char c) {
  switch (c) {
    case 'I':
      return Role::id;
    case 'C':
      return Role::content;
    default:
      throw FormatError(std::string("role must be I or C, got '") + c + "'");
  }
}

}  // namespace sp
