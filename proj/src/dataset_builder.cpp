#include "mixhal/dataset_builder.hpp"

#include <algorithm>
#include <random>

#include "mixhal/error.hpp"
#include "mixhal/hashing.hpp"
#include "mixhal/jsonl.hpp"
#include "mixhal/log.hpp"
#include "mixhal/text_utils.hpp"

namespace mixhal {

using nlohmann::json;

namespace {

bool is_nonfactual_label(const std::string& label) {
    std::string lowered = to_lower_ascii(label);
    lowered = replace_all(std::move(lowered), "_", "-");
    lowered = replace_all(std::move(lowered), " ", "-");
    return lowered.find("non-factual") != std::string::npos ||
           lowered.find("nonfactual") != std::string::npos;
}

// Post-excision cleanup: single spaces, no space before punctuation, no
// doubled commas.
std::string repair_whitespace(std::string text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '\t') {
            if (!out.empty() && out.back() == ' ') continue;
            out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    out = replace_all(std::move(out), " ,", ",");
    out = replace_all(std::move(out), " .", ".");
    out = replace_all(std::move(out), " ;", ";");
    out = replace_all(std::move(out), ",,", ",");
    return trim(out);
}

std::string insert_appositive(const std::string& summary, const std::string& surface,
                              const std::string& description) {
    std::size_t pos = summary.find(surface);
    if (pos == std::string::npos) {
        throw MixhalError(ErrorKind::injection, "entity '" + surface + "' not found in summary");
    }
    std::size_t end = pos + surface.size();

    bool suppress_trailing_comma = end >= summary.size();
    if (!suppress_trailing_comma) {
        char next = summary[end];
        if (next == '.' || next == ',' || next == '!' || next == '?' || next == ';' || next == ':') {
            suppress_trailing_comma = true;
        }
    }

    std::string insertion = ", " + description + (suppress_trailing_comma ? "" : ",");
    std::string out = summary;
    out.insert(end, insertion);
    return out;
}

}  // namespace

std::optional<std::string> derive_correct_summary(const SeedRecord& seed) {
    if (seed.document.empty() || seed.summary.empty()) {
        throw MixhalError(ErrorKind::validation, "seed " + seed.id + ": empty document or summary");
    }
    for (const auto& span : seed.annotations) {
        if (span.span_end <= span.span_start || span.span_end > seed.summary.size()) {
            throw MixhalError(ErrorKind::annotation,
                              "seed " + seed.id + ": span outside summary bounds");
        }
    }

    switch (seed.seed_source) {
        case SeedSource::xent: {
            std::vector<SpanAnnotation> spans;
            for (const auto& span : seed.annotations) {
                if (is_nonfactual_label(span.label)) spans.push_back(span);
            }
            std::sort(spans.begin(), spans.end(),
                      [](const SpanAnnotation& a, const SpanAnnotation& b) {
                          return a.span_start < b.span_start;
                      });
            for (std::size_t i = 1; i < spans.size(); ++i) {
                if (spans[i].span_start < spans[i - 1].span_end) {
                    throw MixhalError(ErrorKind::annotation,
                                      "seed " + seed.id + ": overlapping annotation spans");
                }
            }
            std::string summary = seed.summary;
            for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
                summary.erase(it->span_start, it->span_end - it->span_start);
            }
            return repair_whitespace(summary);
        }
        case SeedSource::factcollect: {
            if (seed.record_label && to_lower_ascii(*seed.record_label) == "correct") {
                return seed.summary;
            }
            return std::nullopt;
        }
        case SeedSource::generic:
            return seed.summary;
    }
    return std::nullopt;
}

BenchmarkRecord inject_factual(const std::string& summary, const EntityMention& entity,
                               const EntityKnowledge& knowledge) {
    BenchmarkRecord record;
    record.summary = insert_appositive(summary, entity.surface, knowledge.description);
    record.label = SummaryLabel::factual_hallucination;
    record.injected_entity = entity.surface;
    record.injected_description = knowledge.description;
    record.injection_source = knowledge.source;
    return record;
}

BenchmarkRecord inject_nonfactual(const std::string& summary, const EntityMention& entity,
                                  const std::vector<EntityKnowledge>& description_pool,
                                  const EntityKnowledge& correct, std::uint64_t rng_seed) {
    std::vector<const EntityKnowledge*> candidates;
    for (const auto& knowledge : description_pool) {
        if (knowledge.description.empty()) continue;
        if (knowledge.description == correct.description) continue;
        candidates.push_back(&knowledge);
    }
    if (candidates.empty()) {
        throw MixhalError(ErrorKind::construction,
                          "no unrelated description available for '" + entity.surface + "'");
    }

    std::mt19937_64 rng(rng_seed);
    const EntityKnowledge& wrong = *candidates[rng() % candidates.size()];

    BenchmarkRecord record;
    record.summary = insert_appositive(summary, entity.surface, wrong.description);
    record.label = SummaryLabel::non_factual_hallucination;
    record.injected_entity = entity.surface;
    record.injected_description = wrong.description;
    record.injection_source = wrong.source;
    return record;
}

std::string strip_injection(const BenchmarkRecord& record) {
    if (!record.injected_entity || !record.injected_description) return record.summary;

    std::size_t pos = record.summary.find(*record.injected_entity);
    if (pos == std::string::npos) {
        throw MixhalError(ErrorKind::validation,
                          "record " + record.id + ": injected entity missing from summary");
    }
    std::size_t end = pos + record.injected_entity->size();

    const std::string with_comma = ", " + *record.injected_description + ",";
    const std::string bare = ", " + *record.injected_description;

    std::string out = record.summary;
    if (out.compare(end, with_comma.size(), with_comma) == 0) {
        out.erase(end, with_comma.size());
    } else if (out.compare(end, bare.size(), bare) == 0) {
        out.erase(end, bare.size());
    } else {
        throw MixhalError(ErrorKind::validation,
                          "record " + record.id + ": appositive not found after entity mention");
    }
    return out;
}

namespace {

struct PreparedSeed {
    const SeedRecord* seed = nullptr;
    std::string summary;
    std::vector<EntityMention> mentions;
};

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

BuildResult build_benchmark(const std::vector<SeedRecord>& seeds, const BuildConfig& config,
                            KnowledgeStore& store, NerAdapter& ner, LlmGateway* gateway) {
    BuildResult result;

    std::vector<PreparedSeed> prepared;
    std::vector<EntityMention> all_mentions;
    std::map<std::string, std::string> surface_type;  // normalized surface -> NER type

    for (const auto& seed : seeds) {
        // Pre-labeled generic records are ingested as-is for evaluation runs.
        if (seed.seed_source == SeedSource::generic && seed.record_label) {
            if (auto label = label_from_string(*seed.record_label)) {
                BenchmarkRecord record;
                record.id = seed.id;
                record.document = seed.document;
                record.summary = seed.summary;
                record.label = *label;
                record.seed_id = seed.id;
                record.validate();
                result.records.push_back(std::move(record));
                continue;
            }
        }

        auto summary = derive_correct_summary(seed);
        if (!summary || summary->empty()) {
            ++result.stats.seeds_skipped;
            continue;
        }
        PreparedSeed entry;
        entry.seed = &seed;
        entry.summary = *summary;
        entry.mentions = extract_entities(entry.summary, ner);
        for (const auto& mention : entry.mentions) {
            all_mentions.push_back(mention);
            surface_type.emplace(normalize_surface(mention.surface), mention.entity_type);
        }
        prepared.push_back(std::move(entry));
    }

    long remaining_fh = config.target_factual;
    long remaining_nfh = config.target_nonfactual;
    long remaining_noh = config.target_clean;

    if (remaining_fh > 0 || remaining_nfh > 0) {
        result.pool = store.build_knowledge_pool(all_mentions, config.kb_mode, gateway);
    }

    std::mt19937_64 rng(config.rng_seed);

    std::vector<double> doc_words_fh, sum_words_fh, inj_words_fh;
    std::vector<double> doc_words_nfh, sum_words_nfh, inj_words_nfh;
    std::vector<double> doc_words_noh, sum_words_noh;

    for (const auto& entry : prepared) {
        if (remaining_fh + remaining_nfh + remaining_noh <= 0) break;

        std::vector<const EntityMention*> resolvable;
        for (const auto& mention : entry.mentions) {
            if (result.pool.find(mention.surface)) resolvable.push_back(&mention);
        }

        // Category with the largest remaining deficit; ties prefer FH, NFH, NoH.
        auto pick_category = [&]() -> char {
            long best = std::max({remaining_fh, remaining_nfh, remaining_noh});
            if (best <= 0) return 'x';
            if (remaining_fh == best) return 'f';
            if (remaining_nfh == best) return 'n';
            return 'c';
        };

        char category = pick_category();
        if ((category == 'f' || category == 'n') && resolvable.empty()) {
            category = remaining_noh > 0 ? 'c' : 'x';
        }
        if (category == 'x') {
            ++result.stats.seeds_skipped;
            continue;
        }

        const SeedRecord& seed = *entry.seed;
        try {
            if (category == 'f') {
                const EntityMention& entity = *resolvable[rng() % resolvable.size()];
                const EntityKnowledge& knowledge = *result.pool.find(entity.surface);
                BenchmarkRecord record = inject_factual(entry.summary, entity, knowledge);
                record.id = seed.id + "-fh";
                record.document = seed.document;
                record.seed_id = seed.id;
                record.validate();
                doc_words_fh.push_back(static_cast<double>(word_count(record.document)));
                sum_words_fh.push_back(static_cast<double>(word_count(record.summary)));
                inj_words_fh.push_back(static_cast<double>(word_count(*record.injected_description)));
                result.records.push_back(std::move(record));
                --remaining_fh;
            } else if (category == 'n') {
                const EntityMention& entity = *resolvable[rng() % resolvable.size()];
                const EntityKnowledge& correct = *result.pool.find(entity.surface);

                std::vector<EntityKnowledge> candidates;
                const std::string normalized = normalize_surface(entity.surface);
                for (const auto& [key, knowledge] : result.pool.entries) {
                    if (key == normalized) continue;
                    if (config.type_matched_nonfactual) {
                        auto it = surface_type.find(key);
                        if (it != surface_type.end() && it->second != entity.entity_type) continue;
                    }
                    candidates.push_back(knowledge);
                }
                if (candidates.empty() && config.type_matched_nonfactual) {
                    for (const auto& [key, knowledge] : result.pool.entries) {
                        if (key != normalized) candidates.push_back(knowledge);
                    }
                }

                std::uint64_t record_seed = fnv1a64_field(config.rng_seed, seed.id);
                BenchmarkRecord record =
                    inject_nonfactual(entry.summary, entity, candidates, correct, record_seed);
                record.id = seed.id + "-nfh";
                record.document = seed.document;
                record.seed_id = seed.id;
                record.validate();
                doc_words_nfh.push_back(static_cast<double>(word_count(record.document)));
                sum_words_nfh.push_back(static_cast<double>(word_count(record.summary)));
                inj_words_nfh.push_back(static_cast<double>(word_count(*record.injected_description)));
                result.records.push_back(std::move(record));
                --remaining_nfh;
            } else {
                BenchmarkRecord record;
                record.id = seed.id + "-noh";
                record.document = seed.document;
                record.summary = entry.summary;
                record.label = SummaryLabel::no_hallucination;
                record.seed_id = seed.id;
                record.validate();
                doc_words_noh.push_back(static_cast<double>(word_count(record.document)));
                sum_words_noh.push_back(static_cast<double>(word_count(record.summary)));
                result.records.push_back(std::move(record));
                --remaining_noh;
            }
        } catch (const MixhalError& e) {
            ++result.stats.seeds_skipped;
            result.stats.warnings.push_back("seed " + seed.id + ": " + e.what());
        }
    }

    if (remaining_fh > 0 || remaining_nfh > 0 || remaining_noh > 0) {
        std::string warning = "insufficient seeds: short by " + std::to_string(remaining_fh) +
                              " factual / " + std::to_string(remaining_nfh) + " non-factual / " +
                              std::to_string(remaining_noh) + " clean records";
        result.stats.warnings.push_back(warning);
        log::warn(warning);
    }

    result.stats.factual = {static_cast<long>(doc_words_fh.size()), mean_of(doc_words_fh),
                            mean_of(sum_words_fh), mean_of(inj_words_fh)};
    result.stats.nonfactual = {static_cast<long>(doc_words_nfh.size()), mean_of(doc_words_nfh),
                               mean_of(sum_words_nfh), mean_of(inj_words_nfh)};
    result.stats.clean = {static_cast<long>(doc_words_noh.size()), mean_of(doc_words_noh),
                          mean_of(sum_words_noh), std::nullopt};
    result.stats.total = static_cast<long>(result.records.size());
    return result;
}

namespace {

std::string field_or(const json& row, std::initializer_list<const char*> keys,
                     const std::string& fallback = {}) {
    for (const char* key : keys) {
        if (row.contains(key) && row.at(key).is_string()) return row.at(key).get<std::string>();
    }
    return fallback;
}

}  // namespace

std::vector<SeedRecord> seeds_from_jsonl(const std::filesystem::path& path, SeedSource format) {
    std::vector<SeedRecord> seeds;
    std::size_t index = 0;
    for (const auto& row : read_jsonl(path)) {
        SeedRecord seed;
        seed.seed_source = format;
        seed.id = field_or(row, {"id"}, path.stem().string() + "-" + std::to_string(index));
        seed.document = field_or(row, {"document", "article", "text"});
        seed.summary = field_or(row, {"summary", "claim"});
        if (row.contains("label") && row.at("label").is_string()) {
            seed.record_label = row.at("label").get<std::string>();
        }
        const char* span_key = row.contains("entities") ? "entities" : "annotations";
        if (row.contains(span_key) && row.at(span_key).is_array()) {
            for (const auto& span_row : row.at(span_key)) {
                SpanAnnotation span;
                span.span_start = span_row.contains("span_start")
                                      ? span_row.at("span_start").get<std::size_t>()
                                      : span_row.value("start", static_cast<std::size_t>(0));
                span.span_end = span_row.contains("span_end")
                                    ? span_row.at("span_end").get<std::size_t>()
                                    : span_row.value("end", static_cast<std::size_t>(0));
                span.label = field_or(span_row, {"label", "type"});
                seed.annotations.push_back(std::move(span));
            }
        }
        if (seed.document.empty() || seed.summary.empty()) {
            throw MixhalError(ErrorKind::validation,
                              "seed " + seed.id + ": document and summary are required");
        }
        seeds.push_back(std::move(seed));
        ++index;
    }
    return seeds;
}

std::vector<SeedRecord> seeds_from_path(const std::filesystem::path& path, SeedSource format) {
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            auto ext = entry.path().extension();
            if (ext == ".jsonl" || ext == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::vector<SeedRecord> seeds;
        for (const auto& file : files) {
            auto chunk = seeds_from_jsonl(file, format);
            seeds.insert(seeds.end(), std::make_move_iterator(chunk.begin()),
                         std::make_move_iterator(chunk.end()));
        }
        return seeds;
    }
    return seeds_from_jsonl(path, format);
}

json to_json(const BuildStats& stats) {
    auto category_json = [](const CategoryStats& c) {
        json row{{"count", c.count},
                 {"mean_document_words", c.mean_document_words},
                 {"mean_summary_words", c.mean_summary_words}};
        if (c.mean_injected_words) row["mean_injected_words"] = *c.mean_injected_words;
        return row;
    };
    return json{
        {"factual_hallucination", category_json(stats.factual)},
        {"non_factual_hallucination", category_json(stats.nonfactual)},
        {"no_hallucination", category_json(stats.clean)},
        {"total", stats.total},
        {"seeds_skipped", stats.seeds_skipped},
        {"warnings", stats.warnings},
    };
}

}  // namespace mixhal
