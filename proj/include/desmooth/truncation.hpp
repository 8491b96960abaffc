#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "desmooth/dist.hpp"

namespace desmooth {

enum class TruncationKind { TopK, TopP, Typical, Epsilon, Eta };

std::string_view kind_name(TruncationKind kind);
std::optional<TruncationKind> kind_from_name(std::string_view name);

// Algorithm tag plus hyperparameters. Only the fields of the active kind are
// meaningful; accessors for the wrong kind throw.
class TruncationRule {
 public:
  static TruncationRule top_k(std::size_t k);
  static TruncationRule top_p(double p);
  static TruncationRule typical(double p);
  static TruncationRule epsilon(double eps);
  static TruncationRule eta(double eps);                       // alpha = sqrt(eps)
  static TruncationRule eta_with_alpha(double eps, double alpha);

  TruncationKind kind() const { return kind_; }
  std::size_t k() const;
  double p() const;
  double epsilon_value() const;
  double alpha() const;          // effective value; sqrt(epsilon) when auto
  bool alpha_is_auto() const;

  // The headline hyperparameter (k, p, or epsilon).
  double param() const;
  std::string describe() const;  // e.g. "top-p(0.95)"

 private:
  explicit TruncationRule(TruncationKind kind) : kind_(kind) {}

  TruncationKind kind_;
  std::size_t k_ = 0;
  double p_ = 0.0;
  double epsilon_ = 0.0;
  std::optional<double> alpha_;
};

// Parses "kind=param" or "kind=param:alpha" (eta only), e.g. "top-p=0.95".
std::optional<TruncationRule> parse_rule_spec(std::string_view spec);

// Membership mask over the vocabulary plus the kept mass Z of the source
// distribution. Always non-empty.
class AllowedSet {
 public:
  AllowedSet(const Dist& source, std::vector<bool> mask, TruncationRule rule);

  const std::vector<bool>& mask() const { return mask_; }
  double kept_mass() const { return kept_mass_; }
  const TruncationRule& rule() const { return rule_; }

  std::size_t count() const;
  bool contains(std::size_t id) const { return id < mask_.size() && mask_[id]; }
  std::vector<std::size_t> members() const;

 private:
  std::vector<bool> mask_;
  double kept_mass_;
  TruncationRule rule_;
};

// Renormalized restriction of d to the allowed set: p_i/Z inside, 0 outside.
Dist truncate(const Dist& d, const AllowedSet& a);

// The k most likely words, ties broken by lower id.
AllowedSet allowed_top_k(const Dist& d, std::size_t k);

// Minimal prefix of the probability-sorted vocabulary with cumulative mass
// >= p, ties by lower id.
AllowedSet allowed_top_p(const Dist& d, double p);

// Words sorted by |H(d) + log p| ascending (ties by lower id); minimal prefix
// of that order with cumulative mass >= p. Zero-probability words sort last
// and can never enter the set.
AllowedSet allowed_typical(const Dist& d, double p);

// Words with probability strictly greater than eps. Falls back to {argmax}
// when the threshold empties the set, so sampling is always possible.
AllowedSet allowed_epsilon(const Dist& d, double eps);

// Entropy-dependent threshold eta = min(eps, alpha * exp(-H(d))); keeps words
// with probability strictly greater than eta. alpha defaults to sqrt(eps).
AllowedSet allowed_eta(const Dist& d, double eps, std::optional<double> alpha = std::nullopt);

AllowedSet apply(const Dist& d, const TruncationRule& rule);

}  // namespace desmooth
