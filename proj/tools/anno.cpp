// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anno/embedder.hpp"
#include "anno/pipeline.hpp"
#include "anno/repository.hpp"
#include "anno/service.hpp"
#include "anno/validator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;
constexpr int kViolations = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    bool json = false;
    bool quiet = false;

    std::optional<anno::PipelineConfig> config;

    const anno::PipelineConfig& require_config() {
        if (!config) {
            if (config_path.empty())
                throw UsageError("this command needs --config");
            config = anno::PipelineConfig::load(config_path);
        }
        return *config;
    }

    std::filesystem::path resolve(const std::string& flag_value, const char* flag,
                                  std::optional<std::filesystem::path> from_config) {
        if (!flag_value.empty()) return flag_value;
        if (from_config) return *from_config;
        throw UsageError(std::string("missing ") + flag +
                         (config_path.empty() ? " (or provide --config)" : ""));
    }
};

void out(const Options& opt, const std::string& text) {
    if (!opt.quiet) std::cout << text;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (widths.size() <= c) widths.resize(c + 1);
            widths[c] = std::max(widths[c], row[c].size());
        }
    std::string text;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) text += "  ";
            text += c == 0 ? pad(row[c], widths[c]) : lpad(row[c], widths[c]);
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        text += "\n";
    }
    return text;
}

anno::Json to_json(const anno::SyncReport& r) {
    return anno::Json{{"added", r.added},
                      {"updated", r.updated},
                      {"unchanged", r.unchanged},
                      {"removed", r.removed}};
}

anno::Json to_json(const anno::MappingStats& s) {
    return anno::Json{{"sourceTypesSeen", s.source_types_seen.size()},
                      {"sourceTypesMapped", s.source_types_mapped.size()},
                      {"targetTypesUsed", s.target_types_used.size()},
                      {"entitiesEmitted", s.entities_emitted},
                      {"entitiesSkipped", s.entities_skipped}};
}

anno::Json to_json(const anno::Violation& v) {
    anno::Json j{{"code", std::string(anno::to_string(v.code))},
                 {"path", v.path},
                 {"message", v.message}};
    if (!v.expected.empty()) j["expected"] = v.expected;
    if (!v.found.empty()) j["found"] = v.found;
    return j;
}

anno::Json to_json(const anno::ViolationReport& r) {
    anno::Json vs = anno::Json::array();
    for (const auto& v : r.violations) vs.push_back(to_json(v));
    return anno::Json{{"documentId", r.document_id},
                      {"conformant", r.conformant()},
                      {"violations", std::move(vs)}};
}

anno::Json to_json(const anno::CorpusSummary& s) {
    anno::Json reports = anno::Json::array();
    for (const auto& r : s.reports)
        if (!r.conformant()) reports.push_back(to_json(r));
    return anno::Json{{"documentsChecked", s.documents_checked},
                      {"documentsValid", s.documents_valid},
                      {"unreadableFiles", s.unreadable_files},
                      {"violationsByCode", s.violations_by_code},
                      {"reports", std::move(reports)}};
}

std::string render_violations(const anno::ViolationReport& r) {
    std::string text;
    for (const auto& v : r.violations) {
        text += "  " + std::string(anno::to_string(v.code)) + " at " + v.path + ": " +
                v.message + "\n";
    }
    return text;
}

anno::Repository::Clock clock_from(const std::string& today) {
    if (today.empty()) return anno::Repository::system_date_utc;
    static const std::regex date_re(R"(\d{4}-\d{2}-\d{2})");
    if (!std::regex_match(today, date_re))
        throw UsageError("--today must be YYYY-MM-DD");
    return [today] { return today; };
}

// run: fetch, map, validate, sync

int cmd_run(Options& opt, const std::string& mode_name,
            const std::string& dataset, const std::vector<std::string>& params,
            const std::string& today) {
    const anno::PipelineConfig& cfg = opt.require_config();
    anno::SyncMode mode =
        mode_name == "full" ? anno::SyncMode::Full : anno::SyncMode::Incremental;
    std::map<std::string, std::string> bindings;
    for (const auto& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects KEY=VALUE");
        bindings[p.substr(0, eq)] = p.substr(eq + 1);
    }
    std::optional<std::string> filter;
    if (!dataset.empty()) filter = dataset;

    anno::RunReport report = anno::run_pipeline(cfg, mode, filter, bindings, clock_from(today));

    if (opt.json) {
        anno::Json datasets = anno::Json::object();
        for (const auto& [name, r] : report.datasets) datasets[name] = to_json(r);
        anno::Json stats = anno::Json::object();
        for (const auto& [name, s] : report.stats) stats[name] = to_json(s);
        anno::Json errors = anno::Json::array();
        for (const auto& [tag, message] : report.errors)
            errors.push_back({{"tag", tag}, {"message", message}});
        anno::Json violations = anno::Json::array();
        for (const auto& r : report.violations) violations.push_back(to_json(r));
        anno::Json j{{"ok", report.ok()},
                     {"datasets", std::move(datasets)},
                     {"mappingStats", std::move(stats)},
                     {"errors", std::move(errors)},
                     {"violations", std::move(violations)}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [tag, message] : report.errors)
            std::cerr << "error: " << tag << ": " << message << "\n";
        for (const auto& r : report.violations) {
            std::cerr << "invalid document \"" << r.document_id << "\":\n"
                      << render_violations(r);
        }
        if (report.ok()) {
            std::vector<std::vector<std::string>> sync_rows{
                {"dataset", "added", "updated", "unchanged", "removed"}};
            for (const auto& [name, r] : report.datasets)
                sync_rows.push_back({name, std::to_string(r.added.size()),
                                     std::to_string(r.updated.size()),
                                     std::to_string(r.unchanged.size()),
                                     std::to_string(r.removed.size())});
            std::vector<std::vector<std::string>> stat_rows{
                {"dataset", "source types", "mapped", "target types", "entities", "skipped"}};
            for (const auto& [name, s] : report.stats)
                stat_rows.push_back({name, std::to_string(s.source_types_seen.size()),
                                     std::to_string(s.source_types_mapped.size()),
                                     std::to_string(s.target_types_used.size()),
                                     std::to_string(s.entities_emitted),
                                     std::to_string(s.entities_skipped)});
            out(opt, render_table(sync_rows));
            if (stat_rows.size() > 1) {
                out(opt, "\n");
                out(opt, render_table(stat_rows));
            }
        }
    }
    if (!report.errors.empty()) return kRuntimeError;
    if (!report.violations.empty()) return kViolations;
    return kOk;
}

// validate: one file or a whole repository tree

int cmd_validate(Options& opt, const std::string& spec_flag, const std::string& vocab_flag,
                 const std::string& target) {
    std::filesystem::path vocab_path = opt.resolve(
        vocab_flag, "--vocab",
        opt.config_path.empty()
            ? std::nullopt
            : std::optional<std::filesystem::path>(opt.require_config().vocabulary));
    std::filesystem::path spec_path = opt.resolve(
        spec_flag, "--spec",
        opt.config_path.empty()
            ? std::nullopt
            : std::optional<std::filesystem::path>(opt.require_config().spec));

    anno::Vocabulary vocab = anno::Vocabulary::load_file(vocab_path);
    anno::DomainSpecification spec = anno::DomainSpecification::parse_file(spec_path, vocab);

    if (std::filesystem::is_directory(target)) {
        anno::CorpusSummary summary = anno::validate_corpus(target, spec, vocab);
        if (opt.json) {
            std::cout << to_json(summary).dump(2) << "\n";
        } else {
            std::vector<std::vector<std::string>> rows{
                {"documents checked", std::to_string(summary.documents_checked)},
                {"documents valid", std::to_string(summary.documents_valid)},
                {"unreadable files", std::to_string(summary.unreadable_files)}};
            for (const auto& [code, n] : summary.violations_by_code)
                rows.push_back({code, std::to_string(n)});
            out(opt, render_table(rows));
            for (const auto& r : summary.reports)
                if (!r.conformant()) {
                    out(opt, r.document_id + ":\n");
                    out(opt, render_violations(r));
                }
        }
        return summary.clean() ? kOk : kViolations;
    }

    anno::AnnotationDocument doc = anno::parse_annotation(anno::read_file(target));
    anno::ViolationReport report = anno::validate_document(doc, spec, vocab);
    if (opt.json) {
        std::cout << to_json(report).dump(2) << "\n";
    } else if (report.conformant()) {
        out(opt, target + ": conformant\n");
    } else {
        out(opt, target + ":\n" + render_violations(report));
    }
    return report.conformant() ? kOk : kViolations;
}

// stats: dataset totals and the cumulative snapshot log

int cmd_stats(Options& opt, const std::string& repo_flag, const std::string& csv_out) {
    std::filesystem::path repo_path = opt.resolve(
        repo_flag, "--repo",
        opt.config_path.empty()
            ? std::nullopt
            : std::optional<std::filesystem::path>(opt.require_config().repository));
    anno::Repository repo(repo_path);

    if (!csv_out.empty()) {
        std::string csv = repo.export_stats_csv();
        if (csv_out == "-") {
            std::cout << csv;
        } else {
            anno::write_file(csv_out, csv);
            out(opt, "wrote " + csv_out + "\n");
        }
        return kOk;
    }

    if (opt.json) {
        anno::Json datasets = anno::Json::object();
        for (const auto& name : repo.datasets()) {
            auto [documents, triples] = repo.dataset_totals(name);
            datasets[name] = {{"documents", documents}, {"triples", triples}};
        }
        anno::Json log = anno::Json::array();
        for (const auto& s : repo.stats_log())
            log.push_back({{"date", s.date},
                           {"dataset", s.dataset},
                           {"documents", s.documents},
                           {"triples", s.triples},
                           {"added", s.added},
                           {"updated", s.updated},
                           {"removed", s.removed}});
        std::cout << anno::Json{{"datasets", std::move(datasets)}, {"log", std::move(log)}}
                         .dump(2)
                  << "\n";
        return kOk;
    }

    std::vector<std::vector<std::string>> rows{{"dataset", "documents", "triples"}};
    std::int64_t total_docs = 0, total_triples = 0;
    for (const auto& name : repo.datasets()) {
        auto [documents, triples] = repo.dataset_totals(name);
        rows.push_back({name, std::to_string(documents), std::to_string(triples)});
        total_docs += documents;
        total_triples += triples;
    }
    rows.push_back({"total", std::to_string(total_docs), std::to_string(total_triples)});
    out(opt, render_table(rows));
    return kOk;
}

// ingest: validate and store manually authored annotation files

int cmd_ingest(Options& opt, const std::string& repo_flag, const std::string& spec_flag,
               const std::string& vocab_flag, const std::string& dataset,
               const std::string& today, const std::vector<std::string>& files) {
    auto from_config = [&](auto pick) -> std::optional<std::filesystem::path> {
        if (opt.config_path.empty()) return std::nullopt;
        return pick(opt.require_config());
    };
    std::filesystem::path repo_path = opt.resolve(
        repo_flag, "--repo", from_config([](const auto& c) { return c.repository; }));
    std::filesystem::path vocab_path = opt.resolve(
        vocab_flag, "--vocab", from_config([](const auto& c) { return c.vocabulary; }));
    std::filesystem::path spec_path =
        opt.resolve(spec_flag, "--spec", from_config([](const auto& c) { return c.spec; }));

    anno::Vocabulary vocab = anno::Vocabulary::load_file(vocab_path);
    anno::DomainSpecification spec = anno::DomainSpecification::parse_file(spec_path, vocab);

    std::vector<std::pair<std::string, std::string>> payloads;
    for (const auto& f : files) payloads.emplace_back(f, anno::read_file(f));

    anno::Repository repo(repo_path, clock_from(today));
    anno::IngestReport report = repo.ingest_manual(payloads, dataset, spec, vocab);

    if (opt.json) {
        anno::Json rejected = anno::Json::array();
        for (const auto& [file, r] : report.rejected)
            rejected.push_back({{"file", file}, {"report", to_json(r)}});
        anno::Json failures = anno::Json::array();
        for (const auto& [file, message] : report.parse_failures)
            failures.push_back({{"file", file}, {"message", message}});
        anno::Json j{{"sync", to_json(report.sync)},
                     {"rejected", std::move(rejected)},
                     {"parseFailures", std::move(failures)}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [file, message] : report.parse_failures)
            std::cerr << "error: " << file << ": " << message << "\n";
        for (const auto& [file, r] : report.rejected)
            std::cerr << "rejected " << file << ":\n" << render_violations(r);
        out(opt, "added " + std::to_string(report.sync.added.size()) + ", updated " +
                     std::to_string(report.sync.updated.size()) + ", unchanged " +
                     std::to_string(report.sync.unchanged.size()) + "\n");
    }
    if (!report.rejected.empty()) return kViolations;
    if (!report.parse_failures.empty()) return kRuntimeError;
    return kOk;
}

// embed: batch-inject into HTML files, or serve over HTTP

int cmd_embed(Options& opt, const std::string& repo_flag, const std::string& map_flag,
              bool serve, const std::string& bind, const std::string& key,
              const std::string& out_path, const std::vector<std::string>& files) {
    auto from_config = [&](auto pick) -> std::optional<std::filesystem::path> {
        if (opt.config_path.empty()) return std::nullopt;
        return pick(opt.require_config());
    };
    std::filesystem::path repo_path = opt.resolve(
        repo_flag, "--repo", from_config([](const auto& c) { return c.repository; }));
    std::optional<std::filesystem::path> map_from_config;
    if (!opt.config_path.empty()) map_from_config = opt.require_config().page_map;
    std::filesystem::path map_path = opt.resolve(map_flag, "--map", map_from_config);

    if (serve) {
        auto colon = bind.rfind(':');
        if (colon == std::string::npos) throw UsageError("--bind expects host:port");
        std::string host = bind.substr(0, colon);
        int port;
        try {
            port = std::stoi(bind.substr(colon + 1));
        } catch (const std::exception&) {
            throw UsageError("--bind expects host:port");
        }
        anno::EmbedService service(repo_path, map_path);
        for (const auto& w : service.snapshot()->page_map.warnings)
            std::cerr << "warning: " << w << "\n";
        out(opt, "listening on " + bind + "\n");
        if (!service.serve(host, port)) {
            std::cerr << "error: cannot bind to " << bind << "\n";
            return kRuntimeError;
        }
        return kOk;
    }

    if (key.empty() || files.empty())
        throw UsageError("batch mode needs --key and at least one HTML file");
    if (!out_path.empty() && files.size() != 1)
        throw UsageError("--out only works with a single input file");

    anno::Repository repo(repo_path);
    anno::PageMap pm = anno::PageMap::load_file(map_path, repo);
    for (const auto& w : pm.warnings) std::cerr << "warning: " << w << "\n";
    auto filename = pm.lookup(key);
    if (!filename) {
        std::cerr << "error: no annotation for key \"" << key << "\"\n";
        return kRuntimeError;
    }
    std::filesystem::path annotation_path;
    for (const auto& [id, e] : repo.entries()) {
        (void)id;
        if (e.filename == *filename) {
            annotation_path = repo.file_path(e);
            break;
        }
    }
    std::string annotation = anno::read_file(annotation_path);
    std::string annotation_id = std::filesystem::path(*filename).stem().string();

    for (const auto& f : files) {
        std::string html = anno::inject(anno::read_file(f), annotation, annotation_id);
        anno::write_file(out_path.empty() ? f : out_path, html);
        out(opt, (out_path.empty() ? f : out_path) + ": injected \"" + annotation_id + "\"\n");
    }
    return kOk;
}

// fsck: verify the manifest against the stored files

int cmd_fsck(Options& opt, const std::string& repo_flag) {
    std::filesystem::path repo_path = opt.resolve(
        repo_flag, "--repo",
        opt.config_path.empty()
            ? std::nullopt
            : std::optional<std::filesystem::path>(opt.require_config().repository));
    anno::Repository repo(repo_path);
    anno::FsckReport report = repo.fsck();

    if (opt.json) {
        std::cout << anno::Json{{"ok", report.ok()},
                                {"problems", report.problems},
                                {"warnings", report.warnings}}
                         .dump(2)
                  << "\n";
    } else {
        for (const auto& p : report.problems) std::cerr << "problem: " << p << "\n";
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        out(opt, report.ok() ? "ok\n" : "repository has problems\n");
    }
    return report.ok() ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"schema.org annotation pipeline for XML tourism data"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "pipeline config file");
    app.add_flag("--json", opt.json, "machine-readable output");
    app.add_flag("--quiet", opt.quiet, "suppress non-essential output");

    int rc = kOk;

    auto* run = app.add_subcommand("run", "fetch sources, map, validate and sync");
    auto run_mode = std::make_shared<std::string>("incremental");
    auto run_dataset = std::make_shared<std::string>();
    auto run_params = std::make_shared<std::vector<std::string>>();
    auto run_today = std::make_shared<std::string>();
    run->add_option("--mode", *run_mode, "sync mode")
        ->check(CLI::IsMember({"incremental", "full"}));
    run->add_option("--dataset", *run_dataset, "only process this dataset");
    run->add_option("--param", *run_params, "request body binding KEY=VALUE");
    run->add_option("--today", *run_today, "override the clock date (YYYY-MM-DD)");
    run->callback(
        [&, run_mode, run_dataset, run_params, run_today] {
            rc = cmd_run(opt, *run_mode, *run_dataset, *run_params, *run_today);
        });

    auto* validate = app.add_subcommand("validate", "check documents against the domain specification");
    auto val_spec = std::make_shared<std::string>();
    auto val_vocab = std::make_shared<std::string>();
    auto val_target = std::make_shared<std::string>();
    validate->add_option("--spec", *val_spec, "domain specification file");
    validate->add_option("--vocab", *val_vocab, "vocabulary file");
    validate->add_option("target", *val_target, "annotation file or repository directory")
        ->required();
    validate->callback([&, val_spec, val_vocab, val_target] {
        rc = cmd_validate(opt, *val_spec, *val_vocab, *val_target);
    });

    auto* stats = app.add_subcommand("stats", "report dataset totals and the snapshot log");
    auto stats_repo = std::make_shared<std::string>();
    auto stats_csv = std::make_shared<std::string>();
    stats->add_option("--repo", *stats_repo, "repository directory");
    stats->add_option("--csv", *stats_csv, "write the snapshot log as CSV (\"-\" for stdout)");
    stats->callback(
        [&, stats_repo, stats_csv] { rc = cmd_stats(opt, *stats_repo, *stats_csv); });

    auto* ingest = app.add_subcommand("ingest", "validate and store manual annotation files");
    auto ing_repo = std::make_shared<std::string>();
    auto ing_spec = std::make_shared<std::string>();
    auto ing_vocab = std::make_shared<std::string>();
    auto ing_dataset = std::make_shared<std::string>();
    auto ing_today = std::make_shared<std::string>();
    auto ing_files = std::make_shared<std::vector<std::string>>();
    ingest->add_option("--repo", *ing_repo, "repository directory");
    ingest->add_option("--spec", *ing_spec, "domain specification file");
    ingest->add_option("--vocab", *ing_vocab, "vocabulary file");
    ingest->add_option("--dataset", *ing_dataset, "target dataset")->required();
    ingest->add_option("--today", *ing_today, "override the clock date (YYYY-MM-DD)");
    ingest->add_option("files", *ing_files, "annotation files")->required();
    ingest->callback([&, ing_repo, ing_spec, ing_vocab, ing_dataset, ing_today, ing_files] {
        rc = cmd_ingest(opt, *ing_repo, *ing_spec, *ing_vocab, *ing_dataset, *ing_today,
                        *ing_files);
    });

    auto* embed = app.add_subcommand("embed", "inject annotations into HTML");
    auto emb_repo = std::make_shared<std::string>();
    auto emb_map = std::make_shared<std::string>();
    auto emb_serve = std::make_shared<bool>(false);
    auto emb_bind = std::make_shared<std::string>("127.0.0.1:8080");
    auto emb_key = std::make_shared<std::string>();
    auto emb_out = std::make_shared<std::string>();
    auto emb_files = std::make_shared<std::vector<std::string>>();
    embed->add_option("--repo", *emb_repo, "repository directory");
    embed->add_option("--map", *emb_map, "page map file");
    embed->add_flag("--serve", *emb_serve, "run the embedding service");
    embed->add_option("--bind", *emb_bind, "service address host:port");
    embed->add_option("--key", *emb_key, "page key for batch injection");
    embed->add_option("--out", *emb_out, "output file (single input only)");
    embed->add_option("files", *emb_files, "HTML files to transform in place");
    embed->callback([&, emb_repo, emb_map, emb_serve, emb_bind, emb_key, emb_out, emb_files] {
        rc = cmd_embed(opt, *emb_repo, *emb_map, *emb_serve, *emb_bind, *emb_key, *emb_out,
                       *emb_files);
    });

    auto* fsck = app.add_subcommand("fsck", "verify the repository manifest");
    auto fsck_repo = std::make_shared<std::string>();
    fsck->add_option("--repo", *fsck_repo, "repository directory");
    fsck->callback([&, fsck_repo] { rc = cmd_fsck(opt, *fsck_repo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const anno::Error& e) {
        std::cerr << "anno: " << e.what() << "\n";
        return kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "anno: " << e.what() << "\n";
        return kRuntimeError;
    }
    return rc;
}
