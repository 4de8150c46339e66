#include "mixhal/metrics.hpp"

#include <random>

#include "mixhal/error.hpp"
#include "mixhal/hashing.hpp"

namespace mixhal {

namespace {

constexpr std::array<SummaryLabel, kNumLabels> kLabels = {
    SummaryLabel::factual_hallucination,
    SummaryLabel::non_factual_hallucination,
    SummaryLabel::no_hallucination,
};

int index_of(SummaryLabel label) { return static_cast<int>(label); }

}  // namespace

long ConfusionMatrix::total() const {
    long sum = unjudged;
    for (const auto& row : counts)
        for (long value : row) sum += value;
    return sum;
}

long ConfusionMatrix::gold_count(SummaryLabel label) const {
    long sum = 0;
    for (long value : counts[index_of(label)]) sum += value;
    return sum;
}

long ConfusionMatrix::predicted_count(SummaryLabel label) const {
    long sum = 0;
    for (const auto& row : counts) sum += row[index_of(label)];
    return sum;
}

ConfusionMatrix confusion_matrix(const std::vector<SummaryLabel>& gold,
                                 const std::vector<std::optional<SummaryLabel>>& predicted) {
    if (gold.size() != predicted.size()) {
        throw MixhalError(ErrorKind::validation, "gold and predicted lengths differ");
    }
    ConfusionMatrix matrix;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (!predicted[i]) {
            ++matrix.unjudged;
            continue;
        }
        ++matrix.counts[index_of(gold[i])][index_of(*predicted[i])];
    }
    return matrix;
}

Scores macro_prf(const ConfusionMatrix& matrix) {
    if (matrix.total() == 0) {
        throw MixhalError(ErrorKind::validation, "empty confusion matrix");
    }

    Scores scores;
    scores.unjudged = matrix.unjudged;
    double precision_sum = 0.0, recall_sum = 0.0, f1_sum = 0.0;

    for (SummaryLabel label : kLabels) {
        const long true_positive = matrix.counts[index_of(label)][index_of(label)];
        const long predicted = matrix.predicted_count(label);
        const long gold = matrix.gold_count(label);

        ClassScores cls;
        cls.precision = predicted > 0 ? static_cast<double>(true_positive) / predicted : 0.0;
        cls.recall = gold > 0 ? static_cast<double>(true_positive) / gold : 0.0;
        cls.f1 = (cls.precision + cls.recall) > 0.0
                     ? 2.0 * cls.precision * cls.recall / (cls.precision + cls.recall)
                     : 0.0;
        if (gold > 0) cls.accuracy = static_cast<double>(true_positive) / gold;

        precision_sum += cls.precision;
        recall_sum += cls.recall;
        f1_sum += cls.f1;
        scores.per_class[label] = cls;
    }

    scores.macro_precision = precision_sum / kNumLabels;
    scores.macro_recall = recall_sum / kNumLabels;
    scores.macro_f1 = f1_sum / kNumLabels;
    return scores;
}

std::map<SummaryLabel, double> per_category_accuracy(const ConfusionMatrix& matrix) {
    std::map<SummaryLabel, double> accuracy;
    for (SummaryLabel label : kLabels) {
        const long gold = matrix.gold_count(label);
        if (gold == 0) continue;
        accuracy[label] =
            static_cast<double>(matrix.counts[index_of(label)][index_of(label)]) / gold;
    }
    return accuracy;
}

std::map<SummaryLabel, std::map<SummaryLabel, double>> prediction_distribution(
    const ConfusionMatrix& matrix) {
    std::map<SummaryLabel, std::map<SummaryLabel, double>> distribution;
    for (SummaryLabel gold : kLabels) {
        const long row_total = matrix.gold_count(gold);
        if (row_total == 0) continue;
        auto& row = distribution[gold];
        for (SummaryLabel predicted : kLabels) {
            row[predicted] =
                100.0 * static_cast<double>(matrix.counts[index_of(gold)][index_of(predicted)]) /
                row_total;
        }
    }
    return distribution;
}

namespace {

struct TrialResult {
    double macro_precision;
    double macro_recall;
    double macro_f1;
    std::array<double, kNumLabels> precision;
    std::array<double, kNumLabels> recall;
    std::array<double, kNumLabels> f1;
    std::array<double, kNumLabels> accuracy;
};

TrialResult run_trial(const std::vector<SummaryLabel>& gold, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ConfusionMatrix matrix;
    for (SummaryLabel g : gold) {
        auto predicted = static_cast<SummaryLabel>(rng() % kNumLabels);
        ++matrix.counts[index_of(g)][index_of(predicted)];
    }
    Scores scores = macro_prf(matrix);

    TrialResult trial{};
    trial.macro_precision = scores.macro_precision;
    trial.macro_recall = scores.macro_recall;
    trial.macro_f1 = scores.macro_f1;
    for (SummaryLabel label : kLabels) {
        const auto& cls = scores.per_class.at(label);
        trial.precision[index_of(label)] = cls.precision;
        trial.recall[index_of(label)] = cls.recall;
        trial.f1[index_of(label)] = cls.f1;
        trial.accuracy[index_of(label)] = cls.accuracy.value_or(0.0);
    }
    return trial;
}

Scores reduce_trials(const std::vector<TrialResult>& trials,
                     const std::map<SummaryLabel, long>& gold_distribution) {
    Scores scores;
    const double n = static_cast<double>(trials.size());
    std::array<double, kNumLabels> precision{}, recall{}, f1{}, accuracy{};
    for (const auto& trial : trials) {
        scores.macro_precision += trial.macro_precision;
        scores.macro_recall += trial.macro_recall;
        scores.macro_f1 += trial.macro_f1;
        for (int i = 0; i < kNumLabels; ++i) {
            precision[i] += trial.precision[i];
            recall[i] += trial.recall[i];
            f1[i] += trial.f1[i];
            accuracy[i] += trial.accuracy[i];
        }
    }
    scores.macro_precision /= n;
    scores.macro_recall /= n;
    scores.macro_f1 /= n;
    for (SummaryLabel label : kLabels) {
        ClassScores cls;
        cls.precision = precision[index_of(label)] / n;
        cls.recall = recall[index_of(label)] / n;
        cls.f1 = f1[index_of(label)] / n;
        auto it = gold_distribution.find(label);
        if (it != gold_distribution.end() && it->second > 0) {
            cls.accuracy = accuracy[index_of(label)] / n;
        }
        scores.per_class[label] = cls;
    }
    return scores;
}

std::vector<SummaryLabel> expand_distribution(const std::map<SummaryLabel, long>& distribution) {
    std::vector<SummaryLabel> gold;
    long total = 0;
    for (SummaryLabel label : kLabels) {
        auto it = distribution.find(label);
        if (it == distribution.end()) continue;
        if (it->second < 0) throw MixhalError(ErrorKind::validation, "negative gold count");
        total += it->second;
        gold.insert(gold.end(), static_cast<std::size_t>(it->second), label);
    }
    if (total == 0) throw MixhalError(ErrorKind::validation, "gold distribution is empty");
    return gold;
}

std::uint64_t trial_seed(std::uint64_t rng_seed, long trial) {
    return fnv1a64_field(rng_seed, std::to_string(trial));
}

}  // namespace

Scores random_baseline_serial(const std::map<SummaryLabel, long>& gold_distribution, long trials,
                              std::uint64_t rng_seed) {
    if (trials < 1) throw MixhalError(ErrorKind::validation, "trials must be >= 1");
    const std::vector<SummaryLabel> gold = expand_distribution(gold_distribution);

    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    for (long t = 0; t < trials; ++t) {
        results[static_cast<std::size_t>(t)] = run_trial(gold, trial_seed(rng_seed, t));
    }
    return reduce_trials(results, gold_distribution);
}

Scores random_baseline(const std::map<SummaryLabel, long>& gold_distribution, long trials,
                       std::uint64_t rng_seed) {
    if (trials < 1) throw MixhalError(ErrorKind::validation, "trials must be >= 1");
    const std::vector<SummaryLabel> gold = expand_distribution(gold_distribution);

    // Each trial owns a seed derived from (rng_seed, trial index), and the
    // reduction runs serially over the indexed results, so the outcome is
    // identical for any thread count.
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (long t = 0; t < trials; ++t) {
        results[static_cast<std::size_t>(t)] = run_trial(gold, trial_seed(rng_seed, t));
    }
    return reduce_trials(results, gold_distribution);
}

}  // namespace mixhal
