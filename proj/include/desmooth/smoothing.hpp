#pragma once

#include <cstddef>
#include <vector>

#include "desmooth/dist.hpp"
#include "desmooth/rng.hpp"
#include "desmooth/truncation.hpp"

namespace desmooth {

// Probabilities at or below this are treated as zero when computing supports,
// to keep floating-point dust out.
inline constexpr double kSupportEps = 1e-12;

bool in_support(const Dist& d, std::size_t i);
std::vector<std::size_t> support_of(const Dist& d);

// Ground-truth mixture experiment: a model distribution is
//   P = lambda * P_star + (1 - lambda) * Q
// where Q stays within a delta-band around uniform and lambda respects both a
// constant floor and an entropy-dependent floor 1 - V*alpha*exp(-h*)/(1+delta).
class SmoothingScenario {
 public:
  SmoothingScenario(Dist p_star, Dist q, double lambda, double delta, double alpha,
                    double lambda_bar_floor);

  const Dist& p_star() const { return p_star_; }
  const Dist& q() const { return q_; }
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  double alpha() const { return alpha_; }
  double lambda_bar_floor() const { return lambda_bar_floor_; }
  double p_star_entropy() const { return p_star_entropy_; }
  std::size_t vocab_size() const { return p_star_.size(); }

 private:
  Dist p_star_;
  Dist q_;
  double lambda_;
  double delta_;
  double alpha_;
  double lambda_bar_floor_;
  double p_star_entropy_;
};

struct TvsWeights {
  double beta_var = 1.0;
  double beta_sup = 1.0;
};

// lambda * p_star + (1 - lambda) * q.
Dist smooth(const SmoothingScenario& s);

// Random scenario whose true distribution has exactly support_size positive
// entries and entropy within 0.1 nats of entropy_target.
SmoothingScenario sample_scenario(std::size_t vocab_size, std::size_t support_size,
                                  double entropy_target, Rng& rng);

// (1+delta)(1-lambda_bar)/V: cap on the model probability of any word outside
// the true support.
double absolute_bound(double delta, double lambda_bar, std::size_t vocab_size);

// alpha * exp(-h): the same cap expressed relative to the entropy of the true
// distribution.
double relative_bound(double alpha, double entropy_of_p_star);

double bound_absolute(const SmoothingScenario& s);
double bound_relative(const SmoothingScenario& s);

// min(bound_absolute, bound_relative): the largest probability a word whose
// mass comes entirely from the smoothing component can reach.
double eta_star(const SmoothingScenario& s);

// Support-weighted total variation: beta_var-weighted true mass lost to
// truncation plus beta_sup-weighted truncated mass kept off the true support.
double tv_s(const Dist& p_star, const Dist& p_trunc, const AllowedSet& a, const TvsWeights& w);

struct RecoveryReport {
  bool support_loss_zero = false;
  bool minimal = false;
};

// Thresholds the smoothed distribution at `threshold` and checks (i) every
// allowed word lies in the true support and (ii) no threshold that also
// guarantees zero support loss truncates strictly less true mass. The second
// check is brute-forced over every distinct smoothed probability value plus
// the midpoints between adjacent values.
RecoveryReport recovery_report(const SmoothingScenario& s, double threshold);

// recovery_report at eta_star(s).
RecoveryReport verify_recovery(const SmoothingScenario& s);

}  // namespace desmooth
