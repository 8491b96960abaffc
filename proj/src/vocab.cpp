#include "desmooth/vocab.hpp"

#include <cctype>
#include <stdexcept>

namespace desmooth {

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) {
    throw std::invalid_argument("Vocab: needs at least one token");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw std::invalid_argument("Vocab: duplicate token \"" + tokens_[i] + "\"");
    }
  }
}

Vocab Vocab::numbered(std::size_t size, std::string_view prefix) {
  std::vector<std::string> tokens;
  tokens.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    tokens.push_back(std::string(prefix) + std::to_string(i));
  }
  return Vocab(std::move(tokens));
}

const std::string& Vocab::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("Vocab: token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> Vocab::id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > start) {
      out.emplace_back(text.substr(start, i - start));
    }
  }
  return out;
}

TokenizedText tokenize_corpus(std::string_view text) {
  auto words = split_whitespace(text);
  if (words.empty()) {
    throw std::invalid_argument("tokenize_corpus: no tokens in text");
  }
  std::vector<std::string> table;
  std::unordered_map<std::string, TokenId> seen;
  std::vector<TokenId> ids;
  ids.reserve(words.size());
  for (auto& w : words) {
    auto it = seen.find(w);
    if (it == seen.end()) {
      TokenId id = static_cast<TokenId>(table.size());
      seen.emplace(w, id);
      table.push_back(std::move(w));
      ids.push_back(id);
    } else {
      ids.push_back(it->second);
    }
  }
  return TokenizedText{Vocab(std::move(table)), std::move(ids)};
}

}  // namespace desmooth
