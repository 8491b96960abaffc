#pragma once

#include <functional>
#include <span>
#include <vector>

#include "desmooth/vocab.hpp"

namespace desmooth {

class Rng;

// Post-construction normalization tolerance.
inline constexpr double kNormalizedTol = 1e-9;
// Constructors silently renormalize inputs whose sum is off by at most this
// much and reject anything worse.
inline constexpr double kNormalizeLimit = 1e-6;

// Immutable categorical distribution over token ids 0..size()-1.
// Entries are non-negative and sum to 1 within kNormalizedTol.
class Dist {
 public:
  explicit Dist(std::vector<double> probs);

  static Dist uniform(std::size_t vocab_size);
  static Dist one_hot(std::size_t vocab_size, std::size_t hot);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  // Highest-probability id, ties broken by lower id.
  std::size_t argmax() const;

 private:
  std::vector<double> probs_;
};

// Shannon entropy in nats, with the 0 log 0 = 0 convention. In [0, log V].
double entropy(const Dist& d);

// sum_{p>0} p log(p/q); +infinity when q assigns zero mass where p does not.
double kl_divergence(const Dist& p, const Dist& q);

// (1/2) sum |p - q|, in [0, 1].
double total_variation(const Dist& p, const Dist& q);

// Yields the conditional distribution for the next position given the tokens
// generated so far (the prefix of the sequence being scored).
using DistProvider = std::function<Dist(std::span<const TokenId> prefix)>;

// (1/T) sum -log P(x_i | x_<i) in nats; +infinity if any observed token gets
// zero probability.
double avg_neg_log_prob(std::span<const TokenId> token_ids, const DistProvider& scorer);

// Inverse-CDF draw over the stored order. Never returns a zero-probability id.
TokenId sample(const Dist& d, Rng& rng);

}  // namespace desmooth
