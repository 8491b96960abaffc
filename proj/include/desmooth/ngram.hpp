#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "desmooth/dist.hpp"
#include "desmooth/rng.hpp"
#include "desmooth/truncation.hpp"
#include "desmooth/vocab.hpp"

namespace desmooth {

struct UnseenContextError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationRecord {
  enum class Status { Completed, UnseenContext };

  std::vector<TokenId> prompt_ids;
  std::vector<TokenId> generated_ids;
  // First generation step whose post-sampling (n-1)-gram context never
  // appeared in the training text.
  std::optional<std::size_t> support_exit_index;
  // Post-truncation entropy of the distribution sampled at each step.
  std::vector<double> per_step_entropy;
  Status status = Status::Completed;
};

// Order-n count model with optional uniform-mixture smoothing:
//   P(x | c) = (1 - w) * count(c, x) / total(c) + w / V      for seen c,
//   P(x | c) = 1 / V                                          for unseen c, w > 0.
// Unseen contexts are a hard error when w = 0.
class NGramModel {
 public:
  using CountVec = std::vector<std::pair<TokenId, std::uint64_t>>;  // sorted by token id

  static NGramModel train(std::span<const TokenId> corpus, std::size_t order, Vocab vocab,
                          double uniform_weight = 0.0);

  std::size_t order() const { return order_; }
  const Vocab& vocab() const { return vocab_; }
  double uniform_weight() const { return uniform_weight_; }
  std::size_t context_count() const { return contexts_.size(); }

  // Conditional distribution for the trailing order-1 tokens of `context`
  // (left-padded with the begin-of-text id when shorter).
  Dist cond_dist(std::span<const TokenId> context) const;

  // Whether the context has continuation counts.
  bool context_seen(std::span<const TokenId> context) const;
  // Whether the context appeared as an (order-1)-gram window anywhere in the
  // training text, including the trailing window that has no continuation.
  bool window_seen(std::span<const TokenId> context) const;

  GenerationRecord generate(std::span<const TokenId> prompt, std::size_t steps,
                            const std::optional<TruncationRule>& rule, Rng& rng) const;

  void save(const std::filesystem::path& path) const;
  static NGramModel load(const std::filesystem::path& path);

  void for_each_context(
      const std::function<void(std::span<const TokenId>, const CountVec&)>& fn) const;

 private:
  struct ContextEntry {
    CountVec items;
    std::uint64_t total = 0;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<TokenId>& key) const;
  };

  NGramModel(std::size_t order, Vocab vocab, double uniform_weight);

  std::vector<TokenId> tail_context(std::span<const TokenId> tokens) const;

  std::size_t order_;
  Vocab vocab_;
  double uniform_weight_;
  std::unordered_map<std::vector<TokenId>, ContextEntry, KeyHash> contexts_;
  std::vector<TokenId> final_window_;
};

}  // namespace desmooth
