#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "desmooth/dist.hpp"
#include "desmooth/ngram.hpp"
#include "desmooth/truncation.hpp"

namespace desmooth {

// Neumaier compensated sum; keeps bucket statistics stable under reordering
// and parallel sharding.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  void merge(const KahanSum& o) {
    add(o.sum);
    add(o.comp);
  }
  double value() const { return sum + comp; }
};

struct EntropyBucketStats {
  double bucket_lo = 0.0;
  double bucket_hi = 0.0;
  std::size_t count = 0;
  double mean_tv = 0.0;                // average TV(pre, post) per distribution
  double mean_retained_entropy = 0.0;  // average post-truncation entropy
};

struct EntropyProfile {
  std::vector<EntropyBucketStats> buckets;
  // Distributions whose pre-truncation entropy falls outside
  // [edges.front(), edges.back()).
  EntropyBucketStats overflow;
};

// One-pass accumulator: each distribution is bucketed by its pre-truncation
// entropy; per bucket the mean truncation TV and mean retained entropy are
// tracked. Accumulators over disjoint shards can be merged deterministically.
class EntropyProfileAccumulator {
 public:
  EntropyProfileAccumulator(std::vector<double> bucket_edges, TruncationRule rule);

  void add(const Dist& pre);
  void merge(const EntropyProfileAccumulator& other);
  EntropyProfile finalize() const;

 private:
  struct Cell {
    std::size_t count = 0;
    KahanSum tv;
    KahanSum retained;
  };

  std::vector<double> edges_;
  TruncationRule rule_;
  std::vector<Cell> cells_;
  Cell overflow_;
};

// Convenience wrapper; shards the input into a fixed number of chunks so the
// result does not depend on the worker count.
EntropyProfile entropy_profile(std::span<const Dist> dists, const TruncationRule& rule,
                               std::span<const double> bucket_edges);

// Default 0.25-nat buckets over [0, 8].
std::vector<double> default_bucket_edges();

// Appends extra_reps copies of the final tail_len tokens.
std::vector<TokenId> build_adversarial_prompt(std::span<const TokenId> prompt,
                                              std::size_t tail_len = 3,
                                              std::size_t extra_reps = 5);

struct RepetitionVerdict {
  double avg_nll = 0.0;
  bool is_repetition = false;  // avg_nll < threshold
};

RepetitionVerdict detect_repetition(std::span<const TokenId> sample_ids,
                                    const DistProvider& scorer, double threshold = 1.0);

// For each prompt, builds the adversarial repeated-tail version, generates
// completions under `rule`, scores each against the raw model, and returns
// the flagged fraction. Deterministic given (rng seed, prompt order).
double repetition_experiment(const NGramModel& model,
                             std::span<const std::vector<TokenId>> prompts,
                             const std::optional<TruncationRule>& rule, Rng& rng,
                             std::size_t completions_per_prompt = 5,
                             std::size_t max_steps = 512, double threshold = 1.0);

struct ChecklistExpectation {
  TruncationKind rule_kind;
  std::optional<std::size_t> size_eq;
  std::optional<std::size_t> size_min;
  std::optional<std::size_t> size_max;
  std::vector<std::size_t> contains;
  std::vector<std::size_t> excludes;
};

struct ChecklistCase {
  std::string name;
  Vocab vocab;
  Dist dist;
  std::vector<TruncationRule> rules;
  std::vector<ChecklistExpectation> expected;
};

struct ChecklistAssertionResult {
  std::string description;
  bool passed = false;
};

struct ChecklistEntry {
  std::string case_name;
  TruncationRule rule;
  std::size_t allowed_size = 0;
  double kept_mass = 0.0;
  // Allowed ids with source probability >= the print threshold, most likely
  // first.
  std::vector<std::size_t> printed_members;
  std::vector<ChecklistAssertionResult> assertions;
};

std::vector<ChecklistEntry> run_checklist(std::span<const ChecklistCase> cases,
                                          double print_threshold = 0.01);

}  // namespace desmooth
