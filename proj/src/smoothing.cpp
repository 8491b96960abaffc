#include "desmooth/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace desmooth {

namespace {

constexpr double kBandTol = 1e-12;

void check_q_band(const Dist& q, double delta) {
  const double v = static_cast<double>(q.size());
  const double lo = (1.0 - delta) / v;
  const double hi = (1.0 + delta) / v;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < lo - kBandTol || q[i] > hi + kBandTol) {
      throw std::invalid_argument("SmoothingScenario: Q leaves the delta band at id " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

bool in_support(const Dist& d, std::size_t i) { return d[i] > kSupportEps; }

std::vector<std::size_t> support_of(const Dist& d) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (in_support(d, i)) {
      ids.push_back(i);
    }
  }
  return ids;
}

SmoothingScenario::SmoothingScenario(Dist p_star, Dist q, double lambda, double delta,
                                     double alpha, double lambda_bar_floor)
    : p_star_(std::move(p_star)),
      q_(std::move(q)),
      lambda_(lambda),
      delta_(delta),
      alpha_(alpha),
      lambda_bar_floor_(lambda_bar_floor),
      p_star_entropy_(entropy(p_star_)) {
  if (p_star_.size() != q_.size()) {
    throw std::invalid_argument("SmoothingScenario: P* and Q sizes differ");
  }
  if (!(lambda_ > 0.0 && lambda_ <= 1.0)) {
    throw std::invalid_argument("SmoothingScenario: lambda must be in (0, 1]");
  }
  if (!(delta_ >= 0.0)) {
    throw std::invalid_argument("SmoothingScenario: delta must be non-negative");
  }
  if (!(alpha_ > 0.0 && alpha_ <= 1.0)) {
    throw std::invalid_argument("SmoothingScenario: alpha must be in (0, 1]");
  }
  if (!(lambda_bar_floor_ > 0.0 && lambda_bar_floor_ < 1.0)) {
    throw std::invalid_argument("SmoothingScenario: lambda_bar_floor must be in (0, 1)");
  }
  check_q_band(q_, delta_);
  const double v = static_cast<double>(p_star_.size());
  const double context_floor = 1.0 - v * alpha_ * std::exp(-p_star_entropy_) / (1.0 + delta_);
  const double floor = std::max(lambda_bar_floor_, context_floor);
  if (lambda_ < floor - kBandTol) {
    throw std::invalid_argument("SmoothingScenario: lambda below its floor");
  }
}

Dist smooth(const SmoothingScenario& s) {
  std::vector<double> probs(s.vocab_size());
  const double lambda = s.lambda();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = lambda * s.p_star()[i] + (1.0 - lambda) * s.q()[i];
  }
  return Dist(std::move(probs));
}

namespace {

// P* generator: exponential tilting of random scores, with the inverse
// temperature bisected until the entropy matches the target.
std::vector<double> tilted_probs(const std::vector<double>& scores, double beta) {
  double max_s = scores[0];
  for (double s : scores) {
    max_s = std::max(max_s, s);
  }
  std::vector<double> w(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp(beta * (scores[i] - max_s));
    sum += w[i];
  }
  for (double& x : w) {
    x /= sum;
  }
  return w;
}

double probs_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) {
      h -= x * std::log(x);
    }
  }
  return h;
}

Dist q_in_band(std::size_t vocab_size, double delta, Rng& rng) {
  const double v = static_cast<double>(vocab_size);
  if (delta <= 0.0 || vocab_size == 1) {
    return Dist::uniform(vocab_size);
  }
  const double lo = (1.0 - delta) / v;
  const double hi = (1.0 + delta) / v;
  // Coordinate-wise box draw projected back to the simplex; rejected when the
  // projection leaves the band.
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<double> q(vocab_size);
    double sum = 0.0;
    for (double& x : q) {
      x = rng.next_in(lo, hi);
      sum += x;
    }
    bool ok = true;
    for (double& x : q) {
      x /= sum;
      if (x <= lo || x >= hi) {
        ok = false;
      }
    }
    if (ok) {
      return Dist(std::move(q));
    }
  }
  // Centered perturbation: sums to one exactly and stays strictly inside.
  std::vector<double> e(vocab_size);
  double mean = 0.0;
  for (double& x : e) {
    x = rng.next_in(-1.0, 1.0);
    mean += x;
  }
  mean /= v;
  double max_abs = 0.0;
  for (double& x : e) {
    x -= mean;
    max_abs = std::max(max_abs, std::abs(x));
  }
  std::vector<double> q(vocab_size, 1.0 / v);
  if (max_abs > 0.0) {
    for (std::size_t i = 0; i < vocab_size; ++i) {
      q[i] = (1.0 + 0.9 * delta * e[i] / max_abs) / v;
    }
  }
  return Dist(std::move(q));
}

}  // namespace

SmoothingScenario sample_scenario(std::size_t vocab_size, std::size_t support_size,
                                  double entropy_target, Rng& rng) {
  if (vocab_size < 1 || support_size < 1 || support_size > vocab_size) {
    throw std::invalid_argument("sample_scenario: need 1 <= support_size <= vocab_size");
  }
  const double max_entropy = std::log(static_cast<double>(support_size));
  if (!(entropy_target >= 0.0) || entropy_target > max_entropy + 1e-9) {
    throw std::invalid_argument("sample_scenario: entropy_target infeasible for support size");
  }

  // Support placement.
  std::vector<std::size_t> ids(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    ids[i] = i;
  }
  for (std::size_t i = 0; i < support_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(vocab_size - i));
    std::swap(ids[i], ids[j]);
  }

  std::vector<double> on_support;
  if (support_size == 1) {
    on_support = {1.0};
  } else {
    std::vector<double> scores(support_size);
    for (double& s : scores) {
      s = rng.next_double();
    }
    // Entropy decreases monotonically in beta from log(support_size) to ~0.
    double lo = 0.0, hi = 1.0;
    while (probs_entropy(tilted_probs(scores, hi)) > entropy_target && hi < 1e6) {
      hi *= 2.0;
    }
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (probs_entropy(tilted_probs(scores, mid)) > entropy_target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    on_support = tilted_probs(scores, 0.5 * (lo + hi));
    // Keep every support word comfortably above the support cutoff.
    double sum = 0.0;
    for (double& x : on_support) {
      x = std::max(x, 1e-10);
      sum += x;
    }
    for (double& x : on_support) {
      x /= sum;
    }
  }

  std::vector<double> probs(vocab_size, 0.0);
  for (std::size_t i = 0; i < support_size; ++i) {
    probs[ids[i]] = on_support[i];
  }
  Dist p_star{std::move(probs)};
  const double h_star = entropy(p_star);
  if (std::abs(h_star - entropy_target) > 0.1) {
    throw std::runtime_error("sample_scenario: generator missed the entropy target");
  }

  const double delta = rng.next_in(0.0, 0.5);
  const double lambda_bar = rng.next_in(0.7, 0.95);
  const double alpha = rng.next_in(0.02, 1.0);
  Dist q = q_in_band(vocab_size, delta, rng);

  const double context_floor =
      1.0 - static_cast<double>(vocab_size) * alpha * std::exp(-h_star) / (1.0 + delta);
  const double lambda_min = std::min(1.0, std::max(lambda_bar, context_floor));
  const double lambda = rng.next_in(lambda_min, 1.0);

  return SmoothingScenario(std::move(p_star), std::move(q), lambda, delta, alpha, lambda_bar);
}

double absolute_bound(double delta, double lambda_bar, std::size_t vocab_size) {
  return (1.0 + delta) * (1.0 - lambda_bar) / static_cast<double>(vocab_size);
}

double relative_bound(double alpha, double entropy_of_p_star) {
  return alpha * std::exp(-entropy_of_p_star);
}

double bound_absolute(const SmoothingScenario& s) {
  return absolute_bound(s.delta(), s.lambda_bar_floor(), s.vocab_size());
}

double bound_relative(const SmoothingScenario& s) {
  return relative_bound(s.alpha(), s.p_star_entropy());
}

double eta_star(const SmoothingScenario& s) {
  return std::min(bound_absolute(s), bound_relative(s));
}

double tv_s(const Dist& p_star, const Dist& p_trunc, const AllowedSet& a, const TvsWeights& w) {
  if (p_star.size() != p_trunc.size() || a.mask().size() != p_star.size()) {
    throw std::invalid_argument("tv_s: size mismatch");
  }
  if (w.beta_var == 0.0 && w.beta_sup == 0.0) {
    throw std::invalid_argument("tv_s: weights must not both be zero");
  }
  double lost_variety = 0.0;  // true mass truncated away
  double off_support = 0.0;   // kept mass outside the true support
  for (std::size_t i = 0; i < p_star.size(); ++i) {
    if (!a.mask()[i] && p_trunc[i] > kSupportEps) {
      throw std::invalid_argument("tv_s: p_trunc has mass outside the allowed set");
    }
    if (in_support(p_star, i)) {
      if (!a.mask()[i]) {
        lost_variety += p_star[i];
      }
    } else if (a.mask()[i]) {
      off_support += p_trunc[i];
    }
  }
  return w.beta_var * lost_variety + w.beta_sup * off_support;
}

RecoveryReport recovery_report(const SmoothingScenario& s, double threshold) {
  const Dist model = smooth(s);
  const Dist& p_star = s.p_star();
  const std::size_t v = model.size();

  const auto truncated_true_mass = [&](double t) {
    double lost = 0.0;
    for (std::size_t i = 0; i < v; ++i) {
      if (in_support(p_star, i) && model[i] <= t) {
        lost += p_star[i];
      }
    }
    return lost;
  };
  const auto keeps_only_support = [&](double t) {
    for (std::size_t i = 0; i < v; ++i) {
      if (model[i] > t && !in_support(p_star, i)) {
        return false;
      }
    }
    return true;
  };

  RecoveryReport report;
  report.support_loss_zero = keeps_only_support(threshold);

  // Candidate thresholds: every distinct model probability plus the midpoints
  // between adjacent sorted values. Allowed sets only change at those points.
  std::vector<double> values(model.probs());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> candidates;
  candidates.reserve(2 * values.size() + 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    candidates.push_back(values[i]);
    if (i + 1 < values.size()) {
      candidates.push_back(0.5 * (values[i] + values[i + 1]));
    }
  }

  // Minimality is judged against the thresholds the mixture bounds certify:
  // those at or above eta_star keep only true-support words for every valid
  // scenario, while lower thresholds carry no such guarantee even when they
  // happen to stay on-support for this particular draw.
  const double guarantee = eta_star(s);
  double best = truncated_true_mass(guarantee);
  for (double t : candidates) {
    if (t < guarantee) {
      continue;
    }
    best = std::min(best, truncated_true_mass(t));
  }
  report.minimal = truncated_true_mass(threshold) <= best + 1e-12;
  return report;
}

RecoveryReport verify_recovery(const SmoothingScenario& s) {
  return recovery_report(s, eta_star(s));
}

}  // namespace desmooth
