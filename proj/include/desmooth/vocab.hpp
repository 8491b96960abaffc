#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace desmooth {

using TokenId = std::int32_t;

// Structural begin-of-text id used to left-pad n-gram contexts. It is not a
// vocabulary member and can never be generated.
inline constexpr TokenId kBeginOfText = -1;

// Ordered table of unique token strings; ids are 0..size()-1 in list order.
class Vocab {
 public:
  explicit Vocab(std::vector<std::string> tokens);

  // "w0", "w1", ... convenience table for synthetic distributions.
  static Vocab numbered(std::size_t size, std::string_view prefix = "w");

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const;
  std::optional<TokenId> id_of(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

std::vector<std::string> split_whitespace(std::string_view text);

struct TokenizedText {
  Vocab vocab;                 // first-appearance order
  std::vector<TokenId> ids;
};

// Whitespace tokenization; the vocab is built from the text itself.
TokenizedText tokenize_corpus(std::string_view text);

}  // namespace desmooth
