// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anno/annotation.hpp"
#include "anno/errors.hpp"
#include "anno/hash.hpp"
#include "anno/jsonutil.hpp"
#include "anno/validator.hpp"

namespace anno {

enum class SyncMode { Incremental, Full };
enum class Origin { Automatic, Manual };

inline std::string_view to_string(Origin o) {
    return o == Origin::Automatic ? "automatic" : "manual";
}

struct ManifestEntry {
    std::string filename;
    std::string dataset;
    std::string content_hash;  // sha-256 of the stored canonical bytes, hex
    std::int64_t triple_count = 0;
    Origin origin = Origin::Automatic;
    std::string first_seen;    // YYYY-MM-DD
    std::string last_updated;  // YYYY-MM-DD

    bool operator==(const ManifestEntry&) const = default;
};

struct StatsSnapshot {
    std::string date;
    std::string dataset;
    std::int64_t documents = 0;
    std::int64_t triples = 0;
    std::int64_t added = 0;
    std::int64_t updated = 0;
    std::int64_t removed = 0;

    bool operator==(const StatsSnapshot&) const = default;
};

struct SyncReport {
    std::vector<std::string> added;
    std::vector<std::string> updated;
    std::vector<std::string> unchanged;
    std::vector<std::string> removed;

    std::int64_t changes() const {
        return static_cast<std::int64_t>(added.size() + updated.size() + removed.size());
    }
};

/// Result of a manual-file ingest: the sync outcome of the accepted
/// documents plus per-file rejection details for the rest.
struct IngestReport {
    SyncReport sync;
    std::vector<std::pair<std::string, std::string>> parse_failures;  // name -> message
    std::vector<std::pair<std::string, ViolationReport>> rejected;

    bool all_accepted() const { return parse_failures.empty() && rejected.empty(); }
};

struct FsckReport {
    std::vector<std::string> problems;  // manifest or content breakage
    std::vector<std::string> warnings;  // orphan files

    bool ok() const { return problems.empty(); }
};

namespace detail {

/// Advisory single-writer lock: `<repo>/.lock` created O_EXCL, removed on
/// destruction. A pre-existing lock file fails fast with Locked.
class LockFile {
public:
    explicit LockFile(const std::filesystem::path& repo_root) : path_(repo_root / ".lock") {
        int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) {
            if (errno == EEXIST)
                throw Error(ErrorKind::Locked,
                            "repository is locked by another writer (" + path_.string() + ")");
            throw Error(ErrorKind::Io, "cannot create lock file " + path_.string() + ": " +
                                           std::strerror(errno));
        }
        ::close(fd);
    }
    ~LockFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    LockFile(const LockFile&) = delete;
    LockFile& operator=(const LockFile&) = delete;

private:
    std::filesystem::path path_;
};

}  // namespace detail

/// File-per-document annotation store with a JSON manifest and an
/// append-only stats log. Writes go through temp-file-then-rename; the
/// manifest write is the commit point, so interrupted runs leave at worst
/// orphaned files, never a manifest pointing at missing or stale content.
class Repository {
public:
    using Clock = std::function<std::string()>;

    static std::string system_date_utc() {
        std::time_t t = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[16];
        std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
        return buf;
    }

    explicit Repository(std::filesystem::path root, Clock clock = system_date_utc)
        : root_(std::move(root)), clock_(std::move(clock)) {
        std::filesystem::create_directories(root_);
        load_manifest();
    }

    const std::filesystem::path& root() const { return root_; }
    const std::map<std::string, ManifestEntry>& entries() const { return entries_; }
    const std::vector<StatsSnapshot>& stats_log() const { return stats_log_; }

    const ManifestEntry* find(const std::string& id) const {
        auto it = entries_.find(id);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::filesystem::path file_path(const ManifestEntry& e) const {
        return root_ / e.dataset / e.filename;
    }

    /// Store a batch for one dataset. Incremental mode upserts; full mode
    /// additionally drops dataset entries whose ids are absent from the
    /// batch. A stats snapshot is appended when the run changed anything,
    /// or when the (date, dataset) pair has never been logged; a no-change
    /// rerun on the same day therefore leaves the tree byte-identical.
    SyncReport sync(const std::vector<AnnotationDocument>& incoming, const std::string& dataset,
                    SyncMode mode, Origin origin = Origin::Automatic) {
        detail::LockFile lock(root_);
        return sync_locked(incoming, dataset, mode, origin);
    }

    /// Validate and store manually authored files. Files that do not parse
    /// or do not validate are reported and skipped; the rest are synced
    /// incrementally with origin=manual.
    IngestReport ingest_manual(const std::vector<std::pair<std::string, std::string>>& files,
                               const std::string& dataset, const DomainSpecification& spec,
                               const Vocabulary& v) {
        detail::LockFile lock(root_);
        IngestReport report;
        std::vector<AnnotationDocument> accepted;
        for (const auto& [name, bytes] : files) {
            AnnotationDocument doc;
            try {
                doc = parse_annotation(bytes);
            } catch (const Error& e) {
                report.parse_failures.emplace_back(name, e.what());
                continue;
            }
            if (!doc.id) {
                report.parse_failures.emplace_back(name, "document has no \"@id\"");
                continue;
            }
            ViolationReport vr = validate_document(doc, spec, v);
            if (!vr.conformant()) {
                report.rejected.emplace_back(name, std::move(vr));
                continue;
            }
            accepted.push_back(std::move(doc));
        }
        report.sync = sync_locked(accepted, dataset, SyncMode::Incremental, Origin::Manual);
        return report;
    }

    std::string export_stats_csv() const {
        std::vector<StatsSnapshot> rows = stats_log_;
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return std::tie(a.date, a.dataset) < std::tie(b.date, b.dataset);
        });
        std::string csv = "date,dataset,documents,triples,added,updated,removed\n";
        for (const auto& r : rows) {
            csv += r.date + "," + r.dataset + "," + std::to_string(r.documents) + "," +
                   std::to_string(r.triples) + "," + std::to_string(r.added) + "," +
                   std::to_string(r.updated) + "," + std::to_string(r.removed) + "\n";
        }
        return csv;
    }

    /// Re-derive everything the manifest claims: file presence, content
    /// hash, canonical form, triple count. Unreferenced json files under
    /// dataset directories are warnings, not errors.
    FsckReport fsck() const {
        FsckReport r;
        std::set<std::string> referenced;
        for (const auto& [id, e] : entries_) {
            std::filesystem::path p = file_path(e);
            referenced.insert(std::filesystem::weakly_canonical(p).string());
            if (!std::filesystem::exists(p)) {
                r.problems.push_back("missing file for \"" + id + "\": " + p.string());
                continue;
            }
            std::string bytes;
            try {
                bytes = read_file(p);
            } catch (const Error& e2) {
                r.problems.push_back(std::string(e2.what()));
                continue;
            }
            if (sha256_hex(bytes) != e.content_hash) {
                r.problems.push_back("content hash mismatch for \"" + id + "\" (" + p.string() +
                                     ")");
                continue;
            }
            AnnotationDocument doc;
            try {
                doc = parse_annotation(bytes);
            } catch (const Error& e2) {
                r.problems.push_back("unparsable document \"" + id + "\": " + e2.what());
                continue;
            }
            if (canonical_serialize(doc) != bytes)
                r.problems.push_back("file for \"" + id + "\" is not in canonical form");
            if (count_triples(doc) != e.triple_count)
                r.problems.push_back("triple count mismatch for \"" + id + "\": manifest says " +
                                     std::to_string(e.triple_count) + ", file has " +
                                     std::to_string(count_triples(doc)));
            if (doc.id != id)
                r.problems.push_back("file for \"" + id + "\" carries @id \"" +
                                     doc.id.value_or("<none>") + "\"");
        }
        if (std::filesystem::exists(root_)) {
            for (const auto& ent : std::filesystem::recursive_directory_iterator(root_)) {
                if (!ent.is_regular_file()) continue;
                const auto& p = ent.path();
                if (p.extension() != ".json") continue;
                if (p.filename() == "manifest.json" && p.parent_path() == root_) continue;
                if (!referenced.count(std::filesystem::weakly_canonical(p).string()))
                    r.warnings.push_back("orphan file: " + p.string());
            }
        }
        return r;
    }

    /// Dataset totals over live entries.
    std::pair<std::int64_t, std::int64_t> dataset_totals(const std::string& dataset) const {
        std::int64_t documents = 0, triples = 0;
        for (const auto& [id, e] : entries_) {
            (void)id;
            if (e.dataset == dataset) {
                ++documents;
                triples += e.triple_count;
            }
        }
        return {documents, triples};
    }

    std::vector<std::string> datasets() const {
        std::set<std::string> names;
        for (const auto& [id, e] : entries_) {
            (void)id;
            names.insert(e.dataset);
        }
        return {names.begin(), names.end()};
    }

private:
    std::filesystem::path root_;
    Clock clock_;
    std::map<std::string, ManifestEntry> entries_;
    std::vector<StatsSnapshot> stats_log_;

    std::filesystem::path manifest_path() const { return root_ / "manifest.json"; }

    SyncReport sync_locked(const std::vector<AnnotationDocument>& incoming,
                           const std::string& dataset, SyncMode mode, Origin origin) {
        const std::string today = clock_();
        SyncReport report;

        std::set<std::string> batch_ids;
        for (const auto& doc : incoming) {
            if (!doc.id || doc.id->empty())
                throw Error(ErrorKind::Parse, "cannot store a document without \"@id\"");
            if (!batch_ids.insert(*doc.id).second)
                throw Error(ErrorKind::IdCollision,
                            "batch contains \"" + *doc.id + "\" more than once");
            if (const ManifestEntry* e = find(*doc.id); e && e->dataset != dataset)
                throw Error(ErrorKind::IdCollision, "\"" + *doc.id +
                                                        "\" already belongs to dataset \"" +
                                                        e->dataset + "\"");
        }

        auto next = entries_;

        struct PendingWrite {
            std::filesystem::path path;
            std::string bytes;
        };
        std::vector<PendingWrite> writes;

        for (const auto& doc : incoming) {
            const std::string& id = *doc.id;
            std::string bytes = canonical_serialize(doc);
            std::string hash = sha256_hex(bytes);
            auto it = next.find(id);
            if (it != next.end() && it->second.content_hash == hash) {
                report.unchanged.push_back(id);
                continue;
            }
            ManifestEntry e;
            if (it != next.end()) {
                e = it->second;
                report.updated.push_back(id);
            } else {
                e.filename = annotation_filename(id);
                e.dataset = dataset;
                e.origin = origin;
                e.first_seen = today;
                report.added.push_back(id);
            }
            e.content_hash = std::move(hash);
            e.triple_count = count_triples(doc);
            e.last_updated = today;
            writes.push_back({root_ / dataset / e.filename, std::move(bytes)});
            next[id] = std::move(e);
        }

        std::vector<std::filesystem::path> removals;
        if (mode == SyncMode::Full) {
            for (auto it = next.begin(); it != next.end();) {
                if (it->second.dataset == dataset && !batch_ids.count(it->first)) {
                    report.removed.push_back(it->first);
                    removals.push_back(file_path(it->second));
                    it = next.erase(it);
                } else {
                    ++it;
                }
            }
        }

        std::set<std::string> unique_files;
        for (const auto& [id, e] : next)
            if (!unique_files.insert(e.dataset + "/" + e.filename).second)
                throw Error(ErrorKind::IdCollision, "sanitized filename collision on \"" +
                                                        e.dataset + "/" + e.filename +
                                                        "\" (id \"" + id + "\")");

        auto next_log = stats_log_;
        bool logged_today = std::any_of(
            stats_log_.begin(), stats_log_.end(),
            [&](const StatsSnapshot& s) { return s.date == today && s.dataset == dataset; });
        if (report.changes() > 0 || !logged_today) {
            StatsSnapshot snap;
            snap.date = today;
            snap.dataset = dataset;
            for (const auto& [id, e] : next) {
                (void)id;
                if (e.dataset == dataset) {
                    ++snap.documents;
                    snap.triples += e.triple_count;
                }
            }
            snap.added = static_cast<std::int64_t>(report.added.size());
            snap.updated = static_cast<std::int64_t>(report.updated.size());
            snap.removed = static_cast<std::int64_t>(report.removed.size());
            next_log.push_back(std::move(snap));
        }

        // commit: document files, then the manifest, then removals
        if (!writes.empty()) std::filesystem::create_directories(root_ / dataset);
        for (const auto& w : writes) write_file_atomic(w.path, w.bytes);
        bool manifest_dirty = next != entries_ || next_log.size() != stats_log_.size();
        if (manifest_dirty) {
            write_file_atomic(manifest_path(), serialize_manifest(next, next_log));
            entries_ = std::move(next);
            stats_log_ = std::move(next_log);
        }
        for (const auto& p : removals) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }

        std::sort(report.added.begin(), report.added.end());
        std::sort(report.updated.begin(), report.updated.end());
        std::sort(report.unchanged.begin(), report.unchanged.end());
        std::sort(report.removed.begin(), report.removed.end());
        return report;
    }

    static std::string serialize_manifest(const std::map<std::string, ManifestEntry>& entries,
                                          const std::vector<StatsSnapshot>& log) {
        Json e = Json::object();
        for (const auto& [id, m] : entries) {
            e[id] = Json{{"filename", m.filename},
                         {"dataset", m.dataset},
                         {"contentHash", m.content_hash},
                         {"tripleCount", m.triple_count},
                         {"origin", std::string(to_string(m.origin))},
                         {"firstSeen", m.first_seen},
                         {"lastUpdated", m.last_updated}};
        }
        Json l = Json::array();
        for (const auto& s : log) {
            l.push_back(Json{{"date", s.date},
                             {"dataset", s.dataset},
                             {"documents", s.documents},
                             {"triples", s.triples},
                             {"added", s.added},
                             {"updated", s.updated},
                             {"removed", s.removed}});
        }
        Json j{{"entries", std::move(e)}, {"statsLog", std::move(l)}};
        return j.dump(2) + "\n";
    }

    void load_manifest() {
        if (!std::filesystem::exists(manifest_path())) return;
        const std::string what = "manifest";
        Json j = parse_json(read_file(manifest_path()), what);
        expect_object(j, what);
        reject_unknown_keys(j, {"entries", "statsLog"}, what);
        const Json& es = expect_member(j, "entries", what);
        expect_object(es, what + " \"entries\"");
        std::set<std::string> filenames;
        for (auto it = es.begin(); it != es.end(); ++it) {
            const Json& m = *it;
            expect_object(m, what + " entry");
            reject_unknown_keys(m,
                                {"filename", "dataset", "contentHash", "tripleCount", "origin",
                                 "firstSeen", "lastUpdated"},
                                what + " entry");
            ManifestEntry e;
            e.filename = expect_string(m, "filename", what);
            e.dataset = expect_string(m, "dataset", what);
            e.content_hash = expect_string(m, "contentHash", what);
            e.triple_count = expect_member(m, "tripleCount", what).get<std::int64_t>();
            std::string origin = expect_string(m, "origin", what);
            if (origin == "automatic") {
                e.origin = Origin::Automatic;
            } else if (origin == "manual") {
                e.origin = Origin::Manual;
            } else {
                throw Error(ErrorKind::Parse, what + ": unknown origin \"" + origin + "\"");
            }
            e.first_seen = expect_string(m, "firstSeen", what);
            e.last_updated = expect_string(m, "lastUpdated", what);
            if (!filenames.insert(e.dataset + "/" + e.filename).second)
                throw Error(ErrorKind::Parse, what + ": duplicate filename \"" + e.dataset + "/" +
                                                  e.filename + "\"");
            entries_.emplace(it.key(), std::move(e));
        }
        for (const Json& s : expect_array(j, "statsLog", what)) {
            expect_object(s, what + " snapshot");
            reject_unknown_keys(
                s, {"date", "dataset", "documents", "triples", "added", "updated", "removed"},
                what + " snapshot");
            StatsSnapshot snap;
            snap.date = expect_string(s, "date", what);
            snap.dataset = expect_string(s, "dataset", what);
            snap.documents = expect_member(s, "documents", what).get<std::int64_t>();
            snap.triples = expect_member(s, "triples", what).get<std::int64_t>();
            snap.added = expect_member(s, "added", what).get<std::int64_t>();
            snap.updated = expect_member(s, "updated", what).get<std::int64_t>();
            snap.removed = expect_member(s, "removed", what).get<std::int64_t>();
            stats_log_.push_back(std::move(snap));
        }
    }
};

}  // namespace anno
