// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anno/domainspec.hpp"
#include "anno/mapping.hpp"
#include "anno/repository.hpp"
#include "anno/source.hpp"
#include "anno/validator.hpp"
#include "anno/vocabulary.hpp"
#include "anno/xml.hpp"

namespace anno {

/// Locally maintained annotation files swept into the repository alongside
/// the mapped sources.
struct ManualSource {
    std::string dataset;
    std::string path;  // literal path or glob, like SourceConfig
};

/// Everything one pipeline run needs, loaded from a single JSON file. All
/// paths are resolved relative to the config file's directory, and every
/// referenced file must exist up front.
struct PipelineConfig {
    std::filesystem::path base;
    std::filesystem::path vocabulary;
    std::filesystem::path spec;
    std::filesystem::path repository;
    std::optional<std::filesystem::path> page_map;
    std::vector<SourceConfig> sources;
    std::vector<ManualSource> manual;

    static PipelineConfig load(const std::filesystem::path& config_path) {
        const std::string what = "pipeline config";
        PipelineConfig cfg;
        cfg.base = config_path.parent_path();
        Json j = parse_json(read_file(config_path), what);
        expect_object(j, what);
        reject_unknown_keys(
            j, {"vocabulary", "spec", "repository", "pageMap", "sources", "manual"}, what);

        auto resolve = [&](const std::string& rel) { return cfg.base / rel; };
        auto require_file = [&](const std::filesystem::path& p, const std::string& role) {
            if (!std::filesystem::is_regular_file(p))
                throw Error(ErrorKind::Config,
                            what + ": " + role + " file \"" + p.string() + "\" does not exist");
        };

        cfg.vocabulary = resolve(expect_string(j, "vocabulary", what));
        require_file(cfg.vocabulary, "vocabulary");
        cfg.spec = resolve(expect_string(j, "spec", what));
        require_file(cfg.spec, "spec");
        cfg.repository = resolve(expect_string(j, "repository", what));
        if (j.contains("pageMap")) cfg.page_map = resolve(expect_string(j, "pageMap", what));

        std::set<std::string> source_datasets;
        for (const Json& s : expect_array(j, "sources", what)) {
            SourceConfig sc = SourceConfig::parse(s);
            sc.mapping = resolve(sc.mapping).string();
            require_file(sc.mapping, "mapping");
            if (sc.kind == SourceKind::File) sc.path = resolve(sc.path).string();
            source_datasets.insert(sc.dataset);
            cfg.sources.push_back(std::move(sc));
        }
        if (j.contains("manual")) {
            for (const Json& m : expect_array(j, "manual", what)) {
                expect_object(m, what + " manual entry");
                reject_unknown_keys(m, {"dataset", "path"}, what + " manual entry");
                ManualSource ms;
                ms.dataset = expect_string(m, "dataset", what);
                ms.path = resolve(expect_string(m, "path", what)).string();
                if (source_datasets.count(ms.dataset))
                    throw Error(ErrorKind::Config, what + ": dataset \"" + ms.dataset +
                                                       "\" is declared both as a source and "
                                                       "as manual");
                cfg.manual.push_back(std::move(ms));
            }
        }
        return cfg;
    }
};

/// Outcome of one end-to-end run. Sync reports and mapping stats are keyed
/// by dataset; a run with errors or validation violations performs no sync
/// at all, leaving the repository untouched.
struct RunReport {
    std::map<std::string, SyncReport> datasets;
    std::map<std::string, MappingStats> stats;
    std::vector<std::pair<std::string, std::string>> errors;  // tag -> message
    std::vector<ViolationReport> violations;

    bool ok() const { return errors.empty() && violations.empty(); }
};

namespace detail {

inline FetchResult fetch_manual(const ManualSource& ms) {
    SourceConfig files;
    files.name = "manual:" + ms.dataset;
    files.kind = SourceKind::File;
    files.path = ms.path;
    return fetch(files);
}

}  // namespace detail

/// Fetch, map and validate every configured source, then sync dataset by
/// dataset. The produce phase runs to completion first: only when it ends
/// with zero errors and zero violations does any write happen.
inline RunReport run_pipeline(const PipelineConfig& cfg, SyncMode mode,
                              const std::optional<std::string>& dataset_filter = std::nullopt,
                              const std::map<std::string, std::string>& bindings = {},
                              Repository::Clock clock = Repository::system_date_utc) {
    Vocabulary vocab = Vocabulary::load_file(cfg.vocabulary);
    DomainSpecification spec = DomainSpecification::parse_file(cfg.spec, vocab);

    RunReport report;
    std::map<std::string, std::vector<AnnotationDocument>> batches;
    std::map<std::string, Origin> origins;

    auto validate_into = [&](const std::vector<AnnotationDocument>& docs) {
        for (const auto& doc : docs) {
            ViolationReport vr = validate_document(doc, spec, vocab);
            if (!vr.conformant()) report.violations.push_back(std::move(vr));
        }
    };

    for (const SourceConfig& source : cfg.sources) {
        if (dataset_filter && source.dataset != *dataset_filter) continue;
        MappingDocument mapping;
        try {
            mapping = MappingDocument::parse_file(source.mapping, spec, vocab);
        } catch (const Error& e) {
            report.errors.emplace_back(source.mapping, e.what());
            continue;
        }
        if (mapping.dataset() != source.dataset) {
            report.errors.emplace_back(source.mapping,
                                       "mapping is for dataset \"" + mapping.dataset() +
                                           "\" but source \"" + source.name +
                                           "\" declares \"" + source.dataset + "\"");
            continue;
        }
        FetchResult fetched = fetch(source, bindings);
        for (auto& [tag, message] : fetched.failures)
            report.errors.emplace_back(tag, message);
        for (auto& [tag, bytes] : fetched.payloads) {
            try {
                XmlNode xml = parse_xml(bytes);
                ExecutionResult r = mapping.execute(xml);
                validate_into(r.documents);
                auto& batch = batches[source.dataset];
                batch.insert(batch.end(), std::make_move_iterator(r.documents.begin()),
                             std::make_move_iterator(r.documents.end()));
                report.stats[source.dataset].merge(r.stats);
            } catch (const Error& e) {
                report.errors.emplace_back(tag, e.what());
            }
        }
        origins[source.dataset] = Origin::Automatic;
    }

    for (const ManualSource& ms : cfg.manual) {
        if (dataset_filter && ms.dataset != *dataset_filter) continue;
        FetchResult fetched = detail::fetch_manual(ms);
        for (auto& [tag, message] : fetched.failures)
            report.errors.emplace_back(tag, message);
        for (auto& [tag, bytes] : fetched.payloads) {
            try {
                AnnotationDocument doc = parse_annotation(bytes);
                if (!doc.id) throw Error(ErrorKind::Parse, "document has no \"@id\"");
                validate_into({doc});
                batches[ms.dataset].push_back(std::move(doc));
            } catch (const Error& e) {
                report.errors.emplace_back(tag, e.what());
            }
        }
        origins[ms.dataset] = Origin::Manual;
    }

    // pre-flight the id checks the repository would make, so a collision
    // cannot surface after some datasets were already written
    {
        Repository repo(cfg.repository, clock);
        std::map<std::string, std::string> claimed;
        for (const auto& [dataset, docs] : batches) {
            for (const auto& doc : docs) {
                if (!doc.id) continue;
                auto [it, fresh] = claimed.emplace(*doc.id, dataset);
                if (!fresh && it->second != dataset)
                    report.errors.emplace_back(
                        dataset, "\"" + *doc.id + "\" is produced by both \"" + it->second +
                                     "\" and \"" + dataset + "\"");
                else if (!fresh)
                    report.errors.emplace_back(dataset,
                                               "\"" + *doc.id + "\" is produced twice");
                if (const ManifestEntry* e = repo.find(*doc.id); e && e->dataset != dataset)
                    report.errors.emplace_back(
                        dataset, "\"" + *doc.id + "\" already belongs to dataset \"" +
                                     e->dataset + "\"");
            }
        }
    }

    if (!report.ok()) return report;

    Repository repo(cfg.repository, clock);
    for (auto& [dataset, docs] : batches)
        report.datasets[dataset] = repo.sync(docs, dataset, mode, origins.at(dataset));
    return report;
}

}  // namespace anno
