#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixhal/types.hpp"

namespace mixhal {

struct ConfusionMatrix {
    // counts[gold][predicted] over [FH, NFH, NoH].
    std::array<std::array<long, kNumLabels>, kNumLabels> counts{};
    long unjudged = 0;

    long total() const;
    long gold_count(SummaryLabel label) const;
    long predicted_count(SummaryLabel label) const;
};

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> accuracy;  // absent when the class has no gold support
};

struct Scores {
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::map<SummaryLabel, ClassScores> per_class;
    long unjudged = 0;
};

ConfusionMatrix confusion_matrix(const std::vector<SummaryLabel>& gold,
                                 const std::vector<std::optional<SummaryLabel>>& predicted);

// One-vs-rest precision/recall/F1 per class, zero-division yielding 0, with
// macro values averaged over all three classes regardless of support.
// macro_f1 is the mean of per-class F1 values.
Scores macro_prf(const ConfusionMatrix& matrix);

// Diagonal over gold row sum; classes without gold support are absent.
std::map<SummaryLabel, double> per_category_accuracy(const ConfusionMatrix& matrix);

// Gold-row percentages over predicted labels, each non-empty row summing to 100.
std::map<SummaryLabel, std::map<SummaryLabel, double>> prediction_distribution(
    const ConfusionMatrix& matrix);

// Monte-Carlo lower bound: uniform random predictions over a gold multiset,
// Scores averaged across trials. Deterministic for a fixed seed regardless of
// thread count.
Scores random_baseline(const std::map<SummaryLabel, long>& gold_distribution, long trials,
                       std::uint64_t rng_seed);

// Serial reference for the baseline kernel, kept for testing and benchmarks.
Scores random_baseline_serial(const std::map<SummaryLabel, long>& gold_distribution, long trials,
                              std::uint64_t rng_seed);

}  // namespace mixhal
