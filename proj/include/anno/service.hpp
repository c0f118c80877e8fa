// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include <httplib.h>

#include "anno/embedder.hpp"
#include "anno/repository.hpp"

namespace anno {

/// Immutable view the service answers requests from: the page map plus the
/// bytes of every mapped annotation file, read up front so a request never
/// touches disk or a half-reloaded state.
struct ServiceSnapshot {
    PageMap page_map;
    std::map<std::string, std::string> files;           // filename -> canonical bytes
    std::map<std::string, std::string> annotation_ids;  // filename -> id (filename stem)
};

/// Embedding service: serves annotation bytes by page key, injects them
/// into posted HTML, and swaps in a freshly loaded snapshot on demand. A
/// failed reload keeps the previous snapshot serving.
class EmbedService {
public:
    EmbedService(std::filesystem::path repo_root, std::filesystem::path page_map_path)
        : repo_root_(std::move(repo_root)), page_map_path_(std::move(page_map_path)) {
        snapshot_ = build_snapshot();
    }

    std::shared_ptr<const ServiceSnapshot> snapshot() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return snapshot_;
    }

    void reload() {
        auto fresh = build_snapshot();
        std::lock_guard<std::mutex> lock(mutex_);
        snapshot_ = std::move(fresh);
    }

    /// Register the HTTP endpoints on a caller-owned server.
    void attach(httplib::Server& server) {
        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok\n", "text/plain");
        });
        server.Get(R"(/annotation/(.*))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       auto snap = snapshot();
                       std::string rest = req.matches[1];
                       auto filename = snap->page_map.lookup(rest);
                       if (!filename) filename = snap->page_map.lookup("/" + rest);
                       if (!filename) {
                           res.status = 404;
                           res.set_content("no annotation for key\n", "text/plain");
                           return;
                       }
                       res.set_content(snap->files.at(*filename), "application/ld+json");
                   });
        server.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
            auto snap = snapshot();
            if (!req.has_param("key")) {
                res.status = 404;
                res.set_content("missing key parameter\n", "text/plain");
                return;
            }
            auto filename = snap->page_map.lookup(req.get_param_value("key"));
            if (!filename) {
                res.status = 404;
                res.set_content("no annotation for key\n", "text/plain");
                return;
            }
            try {
                std::string html = inject(req.body, snap->files.at(*filename),
                                          snap->annotation_ids.at(*filename));
                res.set_content(html, "text/html");
            } catch (const Error& e) {
                res.status = 422;
                res.set_content(std::string(e.what()) + "\n", "text/plain");
            }
        });
        server.Post("/reload", [this](const httplib::Request&, httplib::Response& res) {
            try {
                reload();
                res.set_content("reloaded\n", "text/plain");
            } catch (const std::exception& e) {
                res.status = 500;
                res.set_content(std::string(e.what()) + "\n", "text/plain");
            }
        });
    }

    /// Blocking listen loop. Returns false if the bind fails.
    bool serve(const std::string& host, int port) {
        attach(server_);
        return server_.listen(host, port);
    }

    void stop() { server_.stop(); }

private:
    std::filesystem::path repo_root_;
    std::filesystem::path page_map_path_;
    mutable std::mutex mutex_;
    std::shared_ptr<const ServiceSnapshot> snapshot_;
    httplib::Server server_;

    std::shared_ptr<const ServiceSnapshot> build_snapshot() const {
        Repository repo(repo_root_);
        auto snap = std::make_shared<ServiceSnapshot>();
        snap->page_map = PageMap::load_file(page_map_path_, repo);

        std::map<std::string, std::filesystem::path> paths;
        for (const auto& [id, e] : repo.entries()) {
            (void)id;
            paths.emplace(e.filename, repo.file_path(e));
        }
        for (const auto& [key, filename] : snap->page_map.entries) {
            (void)key;
            if (snap->files.count(filename)) continue;
            snap->files[filename] = read_file(paths.at(filename));
            snap->annotation_ids[filename] =
                std::filesystem::path(filename).stem().string();
        }
        return snap;
    }
};

}  // namespace anno
