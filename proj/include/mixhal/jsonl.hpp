#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixhal/types.hpp"

namespace mixhal {

using nlohmann::json;

std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);

json to_json(const BenchmarkRecord& record);
BenchmarkRecord benchmark_record_from_json(const json& row);

json to_json(const PredictionRecord& record);
PredictionRecord prediction_record_from_json(const json& row);

json to_json(const EntityKnowledge& knowledge);
EntityKnowledge entity_knowledge_from_json(const json& row);

json to_json(const ClaimVerdict& verdict);
ClaimVerdict claim_verdict_from_json(const json& row);

std::vector<BenchmarkRecord> read_benchmark_file(const std::filesystem::path& path);
void write_benchmark_file(const std::filesystem::path& path, const std::vector<BenchmarkRecord>& records);

std::vector<PredictionRecord> read_prediction_file(const std::filesystem::path& path);
void write_prediction_file(const std::filesystem::path& path, const std::vector<PredictionRecord>& records);

}  // namespace mixhal
