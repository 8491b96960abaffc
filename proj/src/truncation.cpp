#include "desmooth/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace desmooth {

namespace {

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Indices sorted by probability descending, ties by lower id.
std::vector<std::size_t> order_by_prob_desc(const Dist& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d[a] != d[b]) {
      return d[a] > d[b];
    }
    return a < b;
  });
  return order;
}

std::vector<bool> argmax_mask(const Dist& d) {
  std::vector<bool> mask(d.size(), false);
  mask[d.argmax()] = true;
  return mask;
}

}  // namespace

std::string_view kind_name(TruncationKind kind) {
  switch (kind) {
    case TruncationKind::TopK: return "top-k";
    case TruncationKind::TopP: return "top-p";
    case TruncationKind::Typical: return "typical";
    case TruncationKind::Epsilon: return "epsilon";
    case TruncationKind::Eta: return "eta";
  }
  return "?";
}

std::optional<TruncationKind> kind_from_name(std::string_view name) {
  if (name == "top-k") return TruncationKind::TopK;
  if (name == "top-p") return TruncationKind::TopP;
  if (name == "typical") return TruncationKind::Typical;
  if (name == "epsilon") return TruncationKind::Epsilon;
  if (name == "eta") return TruncationKind::Eta;
  return std::nullopt;
}

TruncationRule TruncationRule::top_k(std::size_t k) {
  if (k == 0) {
    throw std::invalid_argument("top-k: k must be positive");
  }
  TruncationRule r(TruncationKind::TopK);
  r.k_ = k;
  return r;
}

TruncationRule TruncationRule::top_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("top-p: p must be in (0, 1]");
  }
  TruncationRule r(TruncationKind::TopP);
  r.p_ = p;
  return r;
}

TruncationRule TruncationRule::typical(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("typical: p must be in (0, 1]");
  }
  TruncationRule r(TruncationKind::Typical);
  r.p_ = p;
  return r;
}

TruncationRule TruncationRule::epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("epsilon: threshold must be in (0, 1)");
  }
  TruncationRule r(TruncationKind::Epsilon);
  r.epsilon_ = eps;
  return r;
}

TruncationRule TruncationRule::eta(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("eta: epsilon must be in (0, 1)");
  }
  TruncationRule r(TruncationKind::Eta);
  r.epsilon_ = eps;
  return r;
}

TruncationRule TruncationRule::eta_with_alpha(double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("eta: epsilon must be in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("eta: alpha must be in (0, 1]");
  }
  TruncationRule r(TruncationKind::Eta);
  r.epsilon_ = eps;
  r.alpha_ = alpha;
  return r;
}

std::size_t TruncationRule::k() const {
  if (kind_ != TruncationKind::TopK) {
    throw std::logic_error("TruncationRule: k is only set for top-k");
  }
  return k_;
}

double TruncationRule::p() const {
  if (kind_ != TruncationKind::TopP && kind_ != TruncationKind::Typical) {
    throw std::logic_error("TruncationRule: p is only set for top-p/typical");
  }
  return p_;
}

double TruncationRule::epsilon_value() const {
  if (kind_ != TruncationKind::Epsilon && kind_ != TruncationKind::Eta) {
    throw std::logic_error("TruncationRule: epsilon is only set for epsilon/eta");
  }
  return epsilon_;
}

double TruncationRule::alpha() const {
  if (kind_ != TruncationKind::Eta) {
    throw std::logic_error("TruncationRule: alpha is only set for eta");
  }
  return alpha_ ? *alpha_ : std::sqrt(epsilon_);
}

bool TruncationRule::alpha_is_auto() const {
  if (kind_ != TruncationKind::Eta) {
    throw std::logic_error("TruncationRule: alpha is only set for eta");
  }
  return !alpha_.has_value();
}

double TruncationRule::param() const {
  switch (kind_) {
    case TruncationKind::TopK: return static_cast<double>(k_);
    case TruncationKind::TopP:
    case TruncationKind::Typical: return p_;
    case TruncationKind::Epsilon:
    case TruncationKind::Eta: return epsilon_;
  }
  return 0.0;
}

std::string TruncationRule::describe() const {
  std::string s(kind_name(kind_));
  s += "(";
  s += format_param(param());
  if (kind_ == TruncationKind::Eta && alpha_) {
    s += ", alpha=" + format_param(*alpha_);
  }
  s += ")";
  return s;
}

std::optional<TruncationRule> parse_rule_spec(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) {
    return std::nullopt;
  }
  const auto kind = kind_from_name(spec.substr(0, eq));
  if (!kind) {
    return std::nullopt;
  }
  std::string rest(spec.substr(eq + 1));
  std::string alpha_part;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    alpha_part = rest.substr(colon + 1);
    rest = rest.substr(0, colon);
  }
  try {
    switch (*kind) {
      case TruncationKind::TopK: return TruncationRule::top_k(std::stoul(rest));
      case TruncationKind::TopP: return TruncationRule::top_p(std::stod(rest));
      case TruncationKind::Typical: return TruncationRule::typical(std::stod(rest));
      case TruncationKind::Epsilon: return TruncationRule::epsilon(std::stod(rest));
      case TruncationKind::Eta:
        if (!alpha_part.empty()) {
          return TruncationRule::eta_with_alpha(std::stod(rest), std::stod(alpha_part));
        }
        return TruncationRule::eta(std::stod(rest));
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

AllowedSet::AllowedSet(const Dist& source, std::vector<bool> mask, TruncationRule rule)
    : mask_(std::move(mask)), kept_mass_(0.0), rule_(std::move(rule)) {
  if (mask_.size() != source.size()) {
    throw std::invalid_argument("AllowedSet: mask size does not match distribution");
  }
  bool any = false;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) {
      kept_mass_ += source[i];
      any = true;
    }
  }
  if (!any) {
    throw std::invalid_argument("AllowedSet: empty mask");
  }
}

std::size_t AllowedSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<std::size_t> AllowedSet::members() const {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i]) {
      ids.push_back(i);
    }
  }
  return ids;
}

Dist truncate(const Dist& d, const AllowedSet& a) {
  if (a.mask().size() != d.size()) {
    throw std::invalid_argument("truncate: allowed set size does not match distribution");
  }
  double z = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (a.mask()[i]) {
      z += d[i];
    }
  }
  if (std::abs(z - a.kept_mass()) > kNormalizedTol) {
    throw std::invalid_argument("truncate: allowed set was not computed from this distribution");
  }
  if (z <= 0.0) {
    throw std::invalid_argument("truncate: allowed set keeps no probability mass");
  }
  std::vector<double> probs(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (a.mask()[i]) {
      probs[i] = d[i] / z;
    }
  }
  return Dist(std::move(probs));
}

AllowedSet allowed_top_k(const Dist& d, std::size_t k) {
  if (k < 1 || k > d.size()) {
    throw std::invalid_argument("allowed_top_k: k out of range");
  }
  const auto order = order_by_prob_desc(d);
  std::vector<bool> mask(d.size(), false);
  for (std::size_t i = 0; i < k; ++i) {
    mask[order[i]] = true;
  }
  return AllowedSet(d, std::move(mask), TruncationRule::top_k(k));
}

AllowedSet allowed_top_p(const Dist& d, double p) {
  const TruncationRule rule = TruncationRule::top_p(p);
  const auto order = order_by_prob_desc(d);
  std::vector<bool> mask(d.size(), false);
  double cum = 0.0;
  for (std::size_t idx : order) {
    if (d[idx] <= 0.0) {
      break;  // remaining mass is zero; the positive words already cover p
    }
    mask[idx] = true;
    cum += d[idx];
    if (cum >= p) {
      break;
    }
  }
  return AllowedSet(d, std::move(mask), rule);
}

AllowedSet allowed_typical(const Dist& d, double p) {
  const TruncationRule rule = TruncationRule::typical(p);
  const double h = entropy(d);
  std::vector<double> key(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    key[i] = d[i] > 0.0 ? std::abs(h + std::log(d[i]))
                        : std::numeric_limits<double>::infinity();
  }
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) {
      return key[a] < key[b];
    }
    return a < b;
  });
  std::vector<bool> mask(d.size(), false);
  double cum = 0.0;
  for (std::size_t idx : order) {
    if (d[idx] <= 0.0) {
      break;
    }
    mask[idx] = true;
    cum += d[idx];
    if (cum >= p) {
      break;
    }
  }
  return AllowedSet(d, std::move(mask), rule);
}

AllowedSet allowed_epsilon(const Dist& d, double eps) {
  const TruncationRule rule = TruncationRule::epsilon(eps);
  std::vector<bool> mask(d.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > eps) {
      mask[i] = true;
      any = true;
    }
  }
  if (!any) {
    mask = argmax_mask(d);  // sampling must always be possible
  }
  return AllowedSet(d, std::move(mask), rule);
}

AllowedSet allowed_eta(const Dist& d, double eps, std::optional<double> alpha) {
  const TruncationRule rule =
      alpha ? TruncationRule::eta_with_alpha(eps, *alpha) : TruncationRule::eta(eps);
  const double h = entropy(d);
  const double threshold = std::min(eps, rule.alpha() * std::exp(-h));
  std::vector<bool> mask(d.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > threshold) {
      mask[i] = true;
      any = true;
    }
  }
  if (!any) {
    // Unreachable except at the exact alpha = 1, perfectly-uniform boundary,
    // where rounding can put the threshold at the maximum probability.
    mask = argmax_mask(d);
  }
  return AllowedSet(d, std::move(mask), rule);
}

AllowedSet apply(const Dist& d, const TruncationRule& rule) {
  switch (rule.kind()) {
    case TruncationKind::TopK: return allowed_top_k(d, rule.k());
    case TruncationKind::TopP: return allowed_top_p(d, rule.p());
    case TruncationKind::Typical: return allowed_typical(d, rule.p());
    case TruncationKind::Epsilon: return allowed_epsilon(d, rule.epsilon_value());
    case TruncationKind::Eta:
      return allowed_eta(d, rule.epsilon_value(),
                         rule.alpha_is_auto() ? std::nullopt : std::optional<double>(rule.alpha()));
  }
  throw std::logic_error("apply: unknown truncation kind");
}

}  // namespace desmooth
