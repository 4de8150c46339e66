#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mixhal/metrics.hpp"
#include "mixhal/types.hpp"

namespace mixhal {

struct MethodScores {
    std::string name;  // method or "random"
    Scores scores;
};

// Aligned "Method  P  R  F" table.
std::string render_prf_table(const std::vector<MethodScores>& rows);

// Aligned "Method  FH-Acc  NFH-Acc  NoH-Acc" table; absent classes render "-".
std::string render_accuracy_table(const std::vector<MethodScores>& rows);

nlohmann::json to_json(const Scores& scores);

// CSV rows: gold_label,pred_factual_hallucination,pred_non_factual_hallucination,pred_no_hallucination
std::string distribution_csv(const ConfusionMatrix& matrix);

}  // namespace mixhal
