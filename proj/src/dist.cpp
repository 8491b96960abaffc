#include "desmooth/dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "desmooth/rng.hpp"

namespace desmooth {

Dist::Dist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("Dist: empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("Dist: non-finite probability");
    }
    if (p < 0.0) {
      throw std::invalid_argument("Dist: negative probability " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizeLimit) {
    throw std::invalid_argument("Dist: probabilities sum to " + std::to_string(sum) +
                                ", beyond the renormalization limit");
  }
  for (double& p : probs_) {
    p /= sum;
  }
}

Dist Dist::uniform(std::size_t vocab_size) {
  if (vocab_size == 0) {
    throw std::invalid_argument("Dist::uniform: vocab_size must be positive");
  }
  return Dist(std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)));
}

Dist Dist::one_hot(std::size_t vocab_size, std::size_t hot) {
  if (hot >= vocab_size) {
    throw std::invalid_argument("Dist::one_hot: hot id out of range");
  }
  std::vector<double> p(vocab_size, 0.0);
  p[hot] = 1.0;
  return Dist(std::move(p));
}

std::size_t Dist::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    if (probs_[i] > probs_[best]) {
      best = i;
    }
  }
  return best;
}

double entropy(const Dist& d) {
  double h = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) {
      h -= p * std::log(p);
    }
  }
  return h < 0.0 ? 0.0 : h;
}

double kl_divergence(const Dist& p, const Dist& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: size mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (pi <= 0.0) {
      continue;
    }
    const double qi = q[i];
    if (qi <= 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    sum += pi * std::log(pi / qi);
  }
  return sum < 0.0 ? 0.0 : sum;
}

double total_variation(const Dist& p, const Dist& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("total_variation: size mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(p[i] - q[i]);
  }
  return 0.5 * sum;
}

double avg_neg_log_prob(std::span<const TokenId> token_ids, const DistProvider& scorer) {
  if (token_ids.empty()) {
    throw std::invalid_argument("avg_neg_log_prob: empty sequence");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < token_ids.size(); ++i) {
    const Dist d = scorer(token_ids.subspan(0, i));
    const TokenId id = token_ids[i];
    if (id < 0 || static_cast<std::size_t>(id) >= d.size()) {
      throw std::invalid_argument("avg_neg_log_prob: token id out of range for scorer");
    }
    total += -std::log(d[static_cast<std::size_t>(id)]);
  }
  return total / static_cast<double>(token_ids.size());
}

TokenId sample(const Dist& d, Rng& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  std::size_t last_positive = 0;
  bool any = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double p = d[i];
    if (p <= 0.0) {
      continue;
    }
    cum += p;
    last_positive = i;
    any = true;
    if (cum > u) {
      return static_cast<TokenId>(i);
    }
  }
  if (!any) {
    throw std::logic_error("sample: distribution has no positive mass");
  }
  // u landed in the rounding slack past the final cumulative value.
  return static_cast<TokenId>(last_positive);
}

}  // namespace desmooth
