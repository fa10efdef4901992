// Symbols: interned atomic tokens carrying an identification/contents role.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sp {

using TokenId = std::uint32_t;

/// Identification symbols (codes, class markers, discriminators) versus
/// contents symbols. The role belongs to an occurrence, not to a token.
enum class Role : std::uint8_t { id, content };

/// Malformed textual input: tokens, grammar files, corpus files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interns `text` in the process-wide token table. Thread-safe.
/// Throws FormatError if `text` is empty or contains whitespace.
TokenId intern_token(std::string_view text);

/// Text of an interned token. The reference stays valid for the process lifetime.
const std::string& token_text(TokenId token);

/// Number of tokens interned so far; ids are dense in [0, interned_count()).
std::size_t interned_count();

char role_char(Role role);
Role role_from_char(char c);  // 'I' or 'C'; anything else throws FormatError

/// One occurrence of a token. Equality looks at the token only.
class Symbol {
 public:
  Symbol() = default;
  Symbol(TokenId token, Role role) : token_(token), role_(role) {}

  static Symbol intern(std::string_view text, Role role) {
    return Symbol(intern_token(text), role);
  }

  TokenId token() const { return token_; }
  Role role() const { return role_; }
  bool is_id() const { return role_ == Role::id; }
  const std::string& text() const { return token_text(token_); }

  Symbol with_role(Role role) const { return Symbol(token_, role); }

  friend bool operator==(Symbol a, Symbol b) { return a.token_ == b.token_; }

 private:
  TokenId token_ = 0;
  Role role_ = Role::content;
};

}  // namespace sp
