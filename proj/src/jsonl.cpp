#include "mixhal/jsonl.hpp"

#include <fstream>

#include "mixhal/error.hpp"

namespace mixhal {

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MixhalError(ErrorKind::io, "cannot open " + path.string());
    std::vector<json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw MixhalError(ErrorKind::parse,
                              path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw MixhalError(ErrorKind::io, "cannot write " + path.string());
    for (const auto& row : rows) out << row.dump() << '\n';
}

json to_json(const BenchmarkRecord& record) {
    json row{
        {"id", record.id},
        {"document", record.document},
        {"summary", record.summary},
        {"label", to_string(record.label)},
        {"seed_id", record.seed_id},
    };
    if (record.injected_entity) row["injected_entity"] = *record.injected_entity;
    if (record.injected_description) row["injected_description"] = *record.injected_description;
    if (record.injection_source) row["injection_source"] = to_string(*record.injection_source);
    return row;
}

BenchmarkRecord benchmark_record_from_json(const json& row) {
    BenchmarkRecord record;
    record.id = row.at("id").get<std::string>();
    record.document = row.at("document").get<std::string>();
    record.summary = row.at("summary").get<std::string>();
    auto label = label_from_string(row.at("label").get<std::string>());
    if (!label) {
        throw MixhalError(ErrorKind::parse,
                          "record " + record.id + ": unknown label " + row.at("label").dump());
    }
    record.label = *label;
    record.seed_id = row.value("seed_id", std::string{});
    if (row.contains("injected_entity")) record.injected_entity = row.at("injected_entity").get<std::string>();
    if (row.contains("injected_description"))
        record.injected_description = row.at("injected_description").get<std::string>();
    if (row.contains("injection_source")) {
        auto source = knowledge_source_from_string(row.at("injection_source").get<std::string>());
        if (!source) throw MixhalError(ErrorKind::parse, "record " + record.id + ": bad injection_source");
        record.injection_source = *source;
    }
    return record;
}

json to_json(const ClaimVerdict& verdict) {
    json row{
        {"claim", verdict.claim.text},
        {"claim_index", verdict.claim.index},
        {"claim_label", to_string(verdict.claim_label)},
    };
    auto judgment_json = [](const EvidenceJudgment& judgment) {
        return json{{"relevant", judgment.relevant},
                    {"relation", to_string(judgment.relation)},
                    {"rationale", judgment.rationale}};
    };
    if (verdict.doc_judgment) row["doc_judgment"] = judgment_json(*verdict.doc_judgment);
    if (verdict.kb_judgment) row["kb_judgment"] = judgment_json(*verdict.kb_judgment);
    return row;
}

ClaimVerdict claim_verdict_from_json(const json& row) {
    ClaimVerdict verdict;
    verdict.claim.text = row.at("claim").get<std::string>();
    verdict.claim.index = row.value("claim_index", 0);
    std::string label = row.at("claim_label").get<std::string>();
    if (label == "faithful") verdict.claim_label = ClaimLabel::faithful;
    else if (label == "factual_hallucination") verdict.claim_label = ClaimLabel::factual_hallucination;
    else if (label == "non_factual_hallucination") verdict.claim_label = ClaimLabel::non_factual_hallucination;
    else verdict.claim_label = ClaimLabel::unknown;

    auto parse_judgment = [](const json& j) {
        EvidenceJudgment judgment;
        judgment.relevant = j.value("relevant", false);
        std::string relation = j.value("relation", "none");
        if (relation == "support") judgment.relation = EvidenceRelation::support;
        else if (relation == "contradict") judgment.relation = EvidenceRelation::contradict;
        else judgment.relation = EvidenceRelation::none;
        judgment.rationale = j.value("rationale", std::string{});
        return judgment;
    };
    if (row.contains("doc_judgment")) verdict.doc_judgment = parse_judgment(row.at("doc_judgment"));
    if (row.contains("kb_judgment")) verdict.kb_judgment = parse_judgment(row.at("kb_judgment"));
    return verdict;
}

json to_json(const PredictionRecord& record) {
    json claim_rows = json::array();
    for (const auto& verdict : record.claim_verdicts) claim_rows.push_back(to_json(verdict));
    return json{
        {"id", record.id},
        {"method", to_string(record.method)},
        {"model_id", record.model_id},
        {"predicted_label", record.predicted_label ? to_string(*record.predicted_label) : "unjudged"},
        {"gold_label", to_string(record.gold_label)},
        {"claim_verdicts", claim_rows},
        {"anomaly_flags", record.anomaly_flags},
        {"trace_ref", record.trace_ref},
    };
}

PredictionRecord prediction_record_from_json(const json& row) {
    PredictionRecord record;
    record.id = row.at("id").get<std::string>();
    auto method = method_from_string(row.at("method").get<std::string>());
    if (!method) throw MixhalError(ErrorKind::parse, "prediction " + record.id + ": bad method");
    record.method = *method;
    record.model_id = row.value("model_id", std::string{});
    std::string predicted = row.at("predicted_label").get<std::string>();
    if (predicted != "unjudged") {
        auto label = label_from_string(predicted);
        if (!label) throw MixhalError(ErrorKind::parse, "prediction " + record.id + ": bad predicted_label");
        record.predicted_label = *label;
    }
    auto gold = label_from_string(row.at("gold_label").get<std::string>());
    if (!gold) throw MixhalError(ErrorKind::parse, "prediction " + record.id + ": bad gold_label");
    record.gold_label = *gold;
    for (const auto& claim_row : row.value("claim_verdicts", json::array()))
        record.claim_verdicts.push_back(claim_verdict_from_json(claim_row));
    for (const auto& flag : row.value("anomaly_flags", json::array()))
        record.anomaly_flags.push_back(flag.get<std::string>());
    record.trace_ref = row.value("trace_ref", std::string{});
    return record;
}

json to_json(const EntityKnowledge& knowledge) {
    return json{
        {"entity_surface", knowledge.entity_surface},
        {"description", knowledge.description},
        {"source", to_string(knowledge.source)},
        {"retrieved_at", knowledge.retrieved_at},
    };
}

EntityKnowledge entity_knowledge_from_json(const json& row) {
    EntityKnowledge knowledge;
    knowledge.entity_surface = row.at("entity_surface").get<std::string>();
    knowledge.description = row.at("description").get<std::string>();
    auto source = knowledge_source_from_string(row.at("source").get<std::string>());
    if (!source) throw MixhalError(ErrorKind::parse, "bad knowledge source for " + knowledge.entity_surface);
    knowledge.source = *source;
    knowledge.retrieved_at = row.value("retrieved_at", std::string{});
    return knowledge;
}

std::vector<BenchmarkRecord> read_benchmark_file(const std::filesystem::path& path) {
    std::vector<BenchmarkRecord> records;
    for (const auto& row : read_jsonl(path)) records.push_back(benchmark_record_from_json(row));
    return records;
}

void write_benchmark_file(const std::filesystem::path& path, const std::vector<BenchmarkRecord>& records) {
    std::vector<json> rows;
    rows.reserve(records.size());
    for (const auto& record : records) rows.push_back(to_json(record));
    write_jsonl(path, rows);
}

std::vector<PredictionRecord> read_prediction_file(const std::filesystem::path& path) {
    std::vector<PredictionRecord> records;
    for (const auto& row : read_jsonl(path)) records.push_back(prediction_record_from_json(row));
    return records;
}

void write_prediction_file(const std::filesystem::path& path, const std::vector<PredictionRecord>& records) {
    std::vector<json> rows;
    rows.reserve(records.size());
    for (const auto& record : records) rows.push_back(to_json(record));
    write_jsonl(path, rows);
}

}  // namespace mixhal
