// SPDX-License-Identifier: Apache-2.0
//
// Release gate: each criterion prints exactly one PASS/FAIL line. The
// suite drives the installed CLI binary where the contract is about
// end-to-end behavior, and the library directly where it is about
// module-level properties.

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "anno/embedder.hpp"
#include "anno/pipeline.hpp"
#include "anno/service.hpp"
#include "anno/validator.hpp"
#include "support/oracle.hpp"
#include "support/random_docs.hpp"
#include "support/random_xml.hpp"
#include "support/temp_dir.hpp"

namespace {

using OrderedJson = nlohmann::ordered_json;

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw CheckFailure(message);
}

template <typename A, typename B>
void require_eq(const A& a, const B& b, const std::string& message) {
    if (!(a == b)) {
        std::ostringstream os;
        os << message << " (got " << a << ", want " << b << ")";
        throw CheckFailure(os.str());
    }
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s)
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    return out + "'";
}

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::filesystem::path& cwd, const std::string& args) {
    static int counter = 0;
    std::filesystem::path capture =
        cwd / (".cli-output-" + std::to_string(counter++) + ".txt");
    std::string cmd = "cd " + shell_quote(cwd.string()) + " && " +
                      shell_quote(ANNO_CLI_PATH) + " " + args + " > " +
                      shell_quote(capture.string()) + " 2>&1";
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = anno::read_file(capture);
    std::filesystem::remove(capture);
    return r;
}

struct Workspace {
    testsupport::TempDir dir;

    Workspace() {
        std::filesystem::copy(FIXTURES_DIR, dir.path(),
                              std::filesystem::copy_options::recursive);
    }
};

std::string tree_digest(const std::filesystem::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root))
        if (e.is_regular_file())
            files[std::filesystem::relative(e.path(), root).string()] =
                anno::sha256_hex(anno::read_file(e.path()));
    std::string all;
    for (const auto& [rel, hash] : files) all += rel + ":" + hash + "\n";
    return anno::sha256_hex(all);
}

void require_all_unchanged(const anno::Json& run_json) {
    for (const auto& [dataset, sync] : run_json.at("datasets").items()) {
        require(sync.at("added").empty() && sync.at("updated").empty() &&
                    sync.at("removed").empty(),
                "dataset \"" + dataset + "\" reported changes on an identical rerun");
        require(!sync.at("unchanged").empty(),
                "dataset \"" + dataset + "\" reported no unchanged documents");
    }
}

struct LoadedFixture {
    anno::Vocabulary vocab;
    anno::DomainSpecification spec;

    LoadedFixture()
        : vocab(anno::Vocabulary::load_file(FIXTURES_DIR "/vocabulary.json")),
          spec(anno::DomainSpecification::parse_file(FIXTURES_DIR "/tourism.dspec.json",
                                                     vocab)) {}
};

const LoadedFixture& fixture() {
    static LoadedFixture f;
    return f;
}

void require_conformant(const std::vector<anno::AnnotationDocument>& docs,
                        const std::string& label) {
    for (const auto& doc : docs) {
        anno::ViolationReport r = anno::validate_document(doc, fixture().spec, fixture().vocab);
        if (!r.conformant()) {
            std::string detail;
            for (const auto& v : r.violations)
                detail += std::string(" [") + std::string(anno::to_string(v.code)) + " at " +
                          v.path + "]";
            throw CheckFailure(label + ": document \"" + r.document_id +
                               "\" has violations:" + detail);
        }
    }
}

// 1. Two identical CLI runs: byte-identical repository, all-unchanged report,
//    both runs together under five seconds.
void criterion_determinism() {
    Workspace ws;
    auto t0 = std::chrono::steady_clock::now();
    CliResult first = run_cli(ws.dir.path(), "--config pipeline.json --json run --today 2017-03-17");
    require_eq(first.exit_code, 0, "first run exit code");
    std::string digest1 = tree_digest(ws.dir / "repo");

    CliResult second =
        run_cli(ws.dir.path(), "--config pipeline.json --json run --today 2017-03-17");
    auto elapsed = std::chrono::steady_clock::now() - t0;
    require_eq(second.exit_code, 0, "second run exit code");
    require_all_unchanged(anno::parse_json(second.output, "run output"));
    require_eq(tree_digest(ws.dir / "repo"), digest1,
               "repository bytes changed between identical runs");
    require(elapsed < std::chrono::seconds(5), "two runs took five seconds or longer");
}

// 2. count_triples equals the brute-force flatten oracle on 1,000 random
//    documents, exactly.
void criterion_triple_oracle() {
    testsupport::DocGen gen(20170317);
    for (int i = 0; i < 1000; ++i) {
        anno::AnnotationDocument doc = gen.doc();
        std::int64_t counted = anno::count_triples(doc);
        std::int64_t oracle = testsupport::oracle_triple_count(doc);
        if (counted != oracle)
            throw CheckFailure("triple count " + std::to_string(counted) + " != oracle " +
                               std::to_string(oracle) + " on document " + std::to_string(i));
    }
}

// 3. Every document produced by the fixture mappings validates cleanly,
//    over the bundled feeds and 500 randomized source entities.
void criterion_closed_loop() {
    struct Feed {
        const char* mapping;
        const char* data;
    };
    for (const Feed& f : {Feed{"/accommodation.map.json", "/xml/accommodations.xml"},
                          Feed{"/event.map.json", "/xml/events.xml"},
                          Feed{"/infrastructure.map.json", "/xml/infrastructure.xml"}}) {
        anno::MappingDocument mapping = anno::MappingDocument::parse_file(
            std::string(FIXTURES_DIR) + f.mapping, fixture().spec, fixture().vocab);
        anno::XmlNode xml =
            anno::parse_xml(anno::read_file(std::string(FIXTURES_DIR) + f.data));
        require_conformant(mapping.execute(xml).documents, f.mapping);
    }

    anno::MappingDocument acc_map = anno::MappingDocument::parse_file(
        FIXTURES_DIR "/accommodation.map.json", fixture().spec, fixture().vocab);
    anno::MappingDocument ev_map = anno::MappingDocument::parse_file(
        FIXTURES_DIR "/event.map.json", fixture().spec, fixture().vocab);
    testsupport::XmlGen gen(42);
    int entities = 0;
    for (int batch = 0; batch < 10; ++batch) {
        anno::XmlNode acc = anno::parse_xml(gen.accommodations(25));
        require_conformant(acc_map.execute(acc).documents, "random accommodations");
        anno::XmlNode ev = anno::parse_xml(gen.events(25));
        require_conformant(ev_map.execute(ev).documents, "random events");
        entities += 50;
    }
    require_eq(entities, 500, "randomized source entity count");
}

// 4. Each of the six violation codes is raised by exactly its seeded
//    mutation, at the mutated path; the untouched corpus is clean.
void criterion_mutation_detection() {
    anno::Vocabulary vocab = anno::Vocabulary::load_file(FIXTURES_DIR "/vocabulary.json");
    anno::DomainSpecification spec =
        anno::DomainSpecification::parse_file(FIXTURES_DIR "/hotel.dspec.json", vocab);

    auto clean = [] {
        anno::AnnotationDocument address;
        address.types = {"PostalAddress"};
        address.add("addressLocality", anno::Literal(std::string("Mayrhofen")));
        address.add("postalCode", anno::Literal(std::string("6290")));
        anno::AnnotationDocument rating;
        rating.types = {"AggregateRating"};
        rating.add("ratingValue", anno::Literal(4.5));
        anno::AnnotationDocument hotel;
        hotel.id = "ACC-T";
        hotel.types = {"Hotel"};
        hotel.add("name", anno::Literal(std::string("Hotel Alpenhof")));
        hotel.add("address", anno::Entity(std::move(address)));
        hotel.add("aggregateRating", anno::Entity(std::move(rating)));
        return hotel;
    };
    require(anno::validate_document(clean(), spec, vocab).conformant(),
            "seed document is not conformant");

    auto expect = [&](const anno::AnnotationDocument& doc, anno::ViolationCode code,
                      const std::string& path) {
        anno::ViolationReport r = anno::validate_document(doc, spec, vocab);
        require_eq(r.violations.size(), std::size_t{1},
                   std::string("mutation for ") + std::string(anno::to_string(code)) +
                       " yielded a different violation count");
        require(r.violations[0].code == code,
                std::string("expected ") + std::string(anno::to_string(code)) + ", got " +
                    std::string(anno::to_string(r.violations[0].code)));
        require_eq(r.violations[0].path, path, "violation path");
    };

    {
        anno::AnnotationDocument d = clean();
        d.types = {"Castle"};
        expect(d, anno::ViolationCode::UnknownType, "/");
    }
    {
        anno::AnnotationDocument d = clean();
        d.add("performer", anno::Literal(std::string("Band")));
        expect(d, anno::ViolationCode::UnknownProperty, "/performer");
    }
    {
        anno::AnnotationDocument d = clean();
        d.properties.erase("name");
        expect(d, anno::ViolationCode::MissingRequired, "/name");
    }
    {
        anno::AnnotationDocument d = clean();
        d.properties["address"] = {anno::Literal(std::string("Hauptstrasse 1"))};
        expect(d, anno::ViolationCode::RangeViolation, "/address");
    }
    {
        anno::AnnotationDocument d = clean();
        d.add("name", anno::Literal(std::string("Zweitname")));
        expect(d, anno::ViolationCode::CardinalityViolation, "/name");
    }
    {
        anno::AnnotationDocument d = clean();
        auto& rating = std::get<anno::Entity>(d.properties["aggregateRating"][0]);
        rating.doc().properties["ratingValue"] = {anno::Literal(std::string("viele"))};
        expect(d, anno::ViolationCode::MalformedLiteral, "/aggregateRating/ratingValue");
    }

    Workspace ws;
    CliResult run = run_cli(ws.dir.path(), "--config pipeline.json run --today 2017-03-17");
    require_eq(run.exit_code, 0, "fixture run exit code");
    anno::CorpusSummary summary =
        anno::validate_corpus(ws.dir / "repo", fixture().spec, fixture().vocab);
    require(summary.clean(), "fixture corpus reported violations");
    require_eq(summary.documents_valid, summary.documents_checked,
               "fixture corpus valid-document count");
    require(summary.documents_checked >= 24, "fixture corpus is smaller than expected");
}

// 5. One mutated source literal → exactly one updated document; one deleted
//    source entity + full mode → exactly one removed document.
void criterion_incremental_precision() {
    Workspace ws;
    CliResult first = run_cli(ws.dir.path(), "--config pipeline.json run --today 2017-03-17");
    require_eq(first.exit_code, 0, "initial run exit code");

    auto xml_path = ws.dir / "xml/accommodations.xml";
    std::string xml = anno::read_file(xml_path);
    const std::string old_name = "<Name>Gasthof Brücke</Name>";
    auto pos = xml.find(old_name);
    require(pos != std::string::npos, "expected fixture name not found");
    xml.replace(pos, old_name.size(), "<Name>Gasthof Brücke am Ziller</Name>");
    anno::write_file(xml_path, xml);

    CliResult second =
        run_cli(ws.dir.path(), "--config pipeline.json --json run --today 2017-03-18");
    require_eq(second.exit_code, 0, "incremental run exit code");
    anno::Json sync =
        anno::parse_json(second.output, "run output").at("datasets").at("accommodation");
    require_eq(sync.at("updated").size(), std::size_t{1}, "updated count after one mutation");
    require_eq(sync.at("updated").at(0).get<std::string>(), std::string("ACC-0002"),
               "updated document id");
    require(sync.at("added").empty() && sync.at("removed").empty(),
            "unexpected adds or removals after one mutation");

    auto start = xml.find("<Accommodation Id=\"ACC-0005\"");
    require(start != std::string::npos, "ACC-0005 not found");
    auto end = xml.find("</Accommodation>", start);
    xml.erase(start, end + 16 - start);
    anno::write_file(xml_path, xml);

    CliResult third = run_cli(ws.dir.path(),
                              "--config pipeline.json --json run --mode full --today 2017-03-19");
    require_eq(third.exit_code, 0, "full run exit code");
    anno::Json full =
        anno::parse_json(third.output, "run output").at("datasets").at("accommodation");
    require_eq(full.at("removed").size(), std::size_t{1}, "removed count after one deletion");
    require_eq(full.at("removed").at(0).get<std::string>(), std::string("ACC-0005"),
               "removed document id");
    require(full.at("added").empty() && full.at("updated").empty(),
            "unexpected adds or updates after one deletion");
}

// 6. Mapping statistics reproduce the hand-counted fixture values and the
//    run report renders one row per dataset.
void criterion_stats_table() {
    Workspace ws;
    CliResult json_run =
        run_cli(ws.dir.path(), "--config pipeline.json --json run --today 2017-03-17");
    require_eq(json_run.exit_code, 0, "run exit code");
    anno::Json stats = anno::parse_json(json_run.output, "run output").at("mappingStats");
    require_eq(stats.at("infrastructure").at("sourceTypesSeen").get<int>(), 4,
               "infrastructure source types seen");
    require_eq(stats.at("infrastructure").at("sourceTypesMapped").get<int>(), 3,
               "infrastructure source types mapped");
    require_eq(stats.at("event").at("sourceTypesSeen").get<int>(), 6, "event source types seen");
    require_eq(stats.at("event").at("sourceTypesMapped").get<int>(), 5,
               "event source types mapped");

    CliResult table = run_cli(ws.dir.path(), "--config pipeline.json run --today 2017-03-17");
    require_eq(table.exit_code, 0, "table run exit code");
    require(table.output.find("source types") != std::string::npos,
            "stats table header missing");
    for (const char* dataset : {"accommodation", "event", "infrastructure"})
        require(table.output.find(dataset) != std::string::npos,
                std::string("stats table lacks a row for ") + dataset);
}

// 7. Embedder: idempotent injection, byte preservation, page-map lookups,
//    HTTP statuses, and torn-read-free reloads under concurrent load.
void criterion_embedder() {
    const std::string html =
        "<html><head><title>Seite</title></head><body><p>Inhalt</p></body></html>";
    const std::string annotation =
        R"({"@context":"http://schema.org","@id":"X","@type":"Thing"})";
    std::string once = anno::inject(html, annotation, "X");
    require_eq(anno::inject(once, annotation, "X"), once, "double injection differs");
    std::string block = "<script type=\"application/ld+json\" data-annotation-id=\"X\">" +
                        annotation + "</script>";
    auto pos = once.find(block);
    require(pos != std::string::npos, "injected block not found");
    std::string stripped = once;
    stripped.erase(pos, block.size());
    require_eq(stripped, html, "non-inserted bytes were not preserved");

    Workspace ws;
    anno::PipelineConfig cfg = anno::PipelineConfig::load(ws.dir / "pipeline.json");
    anno::RunReport run = anno::run_pipeline(cfg, anno::SyncMode::Incremental, std::nullopt,
                                             {}, [] { return std::string("2017-03-17"); });
    require(run.ok(), "fixture pipeline run failed");

    {
        anno::Repository repo(ws.dir / "repo");
        anno::PageMap pm = anno::PageMap::load_file(ws.dir / "pagemap.json", repo);
        require_eq(pm.lookup("/meta/impressum").value_or("<none>"),
                   std::string("impressum.json"), "impressum lookup");
        require_eq(pm.lookup("0000").value_or("<none>"), std::string("ACC-0001.json"),
                   "page id lookup");
        require(!pm.lookup("/unknown").has_value(), "unknown key resolved unexpectedly");
    }

    anno::EmbedService service(ws.dir / "repo", ws.dir / "pagemap.json");
    httplib::Server server;
    service.attach(server);
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    {
        httplib::Client client("127.0.0.1", port);
        auto ok = client.Get("/annotation/0000");
        require(ok && ok->status == 200, "GET /annotation/0000 is not 200");
        require_eq(ok->body, anno::read_file(ws.dir / "repo/accommodation/ACC-0001.json"),
                   "annotation body mismatch");
        auto missing = client.Get("/annotation/nope");
        require(missing && missing->status == 404, "GET /annotation/nope is not 404");
        auto embedded = client.Post("/embed?key=0000", html, "text/html");
        require(embedded && embedded->status == 200, "POST /embed is not 200");
        auto fragment = client.Post("/embed?key=0000", "<p>fragment</p>", "text/html");
        require(fragment && fragment->status == 422, "POST /embed fragment is not 422");
    }

    std::string v1 = anno::read_file(ws.dir / "repo/organization/impressum.json");
    {
        anno::Repository repo(ws.dir / "repo", [] { return std::string("2017-03-18"); });
        anno::AnnotationDocument d;
        d.id = "impressum";
        d.types = {"Organization"};
        d.add("name", anno::Literal(std::string("TVB Mayrhofen-Hippach (neu)")));
        repo.sync({d}, "organization", anno::SyncMode::Incremental, anno::Origin::Manual);
    }
    std::string v2 = anno::read_file(ws.dir / "repo/organization/impressum.json");
    require(v1 != v2, "second content version is not distinct");

    std::atomic<int> bad{0};
    std::atomic<int> requests{0};
    std::vector<std::thread> clients;
    for (int t = 0; t < 10; ++t)
        clients.emplace_back([&] {
            httplib::Client client("127.0.0.1", port);
            for (int i = 0; i < 10; ++i) {
                auto res = client.Get("/annotation/meta/impressum");
                ++requests;
                if (!res || res->status != 200 || (res->body != v1 && res->body != v2)) ++bad;
            }
        });
    for (int i = 0; i < 10; ++i) {
        service.reload();
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    for (auto& c : clients) c.join();
    server.stop();
    listener.join();
    require_eq(requests.load(), 100, "concurrent request count");
    require_eq(bad.load(), 0, "torn or failed responses during reloads");
    require_eq(service.snapshot()->files.at("impressum.json"), v2,
               "final snapshot is not the new version");
}

// The normative key order: "@context" first (top level only), then "@id",
// then "@type", then properties in lexicographic order.
void check_key_order(const OrderedJson& node, bool top) {
    if (node.is_array()) {
        for (const auto& item : node) check_key_order(item, false);
        return;
    }
    if (!node.is_object()) return;

    std::vector<std::string> keys;
    for (auto it = node.begin(); it != node.end(); ++it) keys.push_back(it.key());

    if (keys.size() == 2 && keys[0] == "@language" && keys[1] == "@value") return;

    std::size_t i = 0;
    if (top) {
        require(!keys.empty() && keys[0] == "@context", "\"@context\" is not the first key");
        ++i;
    }
    if (i < keys.size() && keys[i] == "@id") ++i;
    if (i < keys.size() && keys[i] == "@type") ++i;
    for (std::size_t k = i; k < keys.size(); ++k) {
        require(!keys[k].empty() && keys[k][0] != '@',
                "keyword \"" + keys[k] + "\" after the property section");
        if (k > i)
            require(keys[k - 1] < keys[k], "properties \"" + keys[k - 1] + "\" and \"" +
                                               keys[k] + "\" are out of order");
    }
    for (auto it = node.begin(); it != node.end(); ++it) check_key_order(it.value(), false);
}

// 8. parse ∘ serialize is the identity on fixtures and 1,000 random
//    documents, and serialized bytes follow the normative key order.
void criterion_round_trip() {
    Workspace ws;
    anno::PipelineConfig cfg = anno::PipelineConfig::load(ws.dir / "pipeline.json");
    anno::RunReport run = anno::run_pipeline(cfg, anno::SyncMode::Incremental, std::nullopt,
                                             {}, [] { return std::string("2017-03-17"); });
    require(run.ok(), "fixture pipeline run failed");
    int fixture_docs = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(ws.dir / "repo")) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        if (e.path().filename() == "manifest.json") continue;
        std::string bytes = anno::read_file(e.path());
        require_eq(anno::canonical_serialize(anno::parse_annotation(bytes)), bytes,
                   "fixture round trip failed for " + e.path().filename().string());
        check_key_order(OrderedJson::parse(bytes), true);
        ++fixture_docs;
    }
    require(fixture_docs >= 24, "fewer fixture documents than expected");

    testsupport::DocGen gen(424242);
    for (int i = 0; i < 1000; ++i) {
        anno::AnnotationDocument doc = gen.doc();
        std::string bytes = anno::canonical_serialize(doc);
        require_eq(anno::canonical_serialize(anno::parse_annotation(bytes)), bytes,
                   "random round trip failed on document " + std::to_string(i));
        check_key_order(OrderedJson::parse(bytes), true);
    }
}

// 9. The German/English fixture event becomes one document with two
//    language-tagged names and the hand-derived triple count.
void criterion_multilingual() {
    anno::MappingDocument mapping = anno::MappingDocument::parse_file(
        FIXTURES_DIR "/event.map.json", fixture().spec, fixture().vocab);
    anno::XmlNode xml = anno::parse_xml(anno::read_file(FIXTURES_DIR "/xml/events.xml"));
    anno::ExecutionResult r = mapping.execute(xml);

    const anno::AnnotationDocument* ev = nullptr;
    for (const auto& doc : r.documents)
        if (doc.id == "EV-0001") ev = &doc;
    require(ev != nullptr, "EV-0001 was not emitted");
    require(ev->types == std::vector<std::string>{"MusicEvent"}, "EV-0001 type");

    const auto& names = ev->properties.at("name");
    require_eq(names.size(), std::size_t{2}, "name value count");
    std::map<std::string, std::string> by_lang;
    for (const auto& v : names) {
        const auto* lang = std::get_if<anno::LangLiteral>(&v);
        require(lang != nullptr, "name value is not language-tagged");
        by_lang[lang->language] = lang->value;
    }
    require_eq(by_lang.at("de"), std::string("Zillertaler Sommerkonzert"), "German name");
    require_eq(by_lang.at("en"), std::string("Ziller Valley Summer Concert"), "English name");

    // 1 type + 2 names + description, startDate, endDate, isAccessibleForFree,
    // url, performer + two nested entities at 3 each (link + type + name)
    require_eq(anno::count_triples(*ev), std::int64_t{15}, "EV-0001 triple count");
}

// 10. fsck passes on a fresh run and pinpoints a flipped byte.
void criterion_fsck() {
    Workspace ws;
    CliResult run = run_cli(ws.dir.path(), "--config pipeline.json run --today 2017-03-17");
    require_eq(run.exit_code, 0, "run exit code");
    CliResult clean = run_cli(ws.dir.path(), "--config pipeline.json fsck");
    require_eq(clean.exit_code, 0, "fsck exit code on clean repository");

    auto victim = ws.dir / "repo/accommodation/ACC-0001.json";
    std::string bytes = anno::read_file(victim);
    bytes[bytes.size() / 2] ^= 0x01;
    anno::write_file(victim, bytes);

    CliResult broken = run_cli(ws.dir.path(), "--config pipeline.json fsck");
    require(broken.exit_code != 0, "fsck exit code after corruption");
    require(broken.output.find("ACC-0001") != std::string::npos,
            "fsck does not name the corrupted document");
}

struct Criterion {
    int number;
    const char* name;
    std::function<void()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "end-to-end determinism", criterion_determinism},
        {2, "triple-count oracle equivalence", criterion_triple_oracle},
        {3, "closed-loop validity", criterion_closed_loop},
        {4, "mutation detection", criterion_mutation_detection},
        {5, "incremental-update precision", criterion_incremental_precision},
        {6, "table-shaped mapping statistics", criterion_stats_table},
        {7, "embedder contract", criterion_embedder},
        {8, "canonicalization round trip", criterion_round_trip},
        {9, "multilingual annotation", criterion_multilingual},
        {10, "repository fsck", criterion_fsck},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            c.check();
            std::cout << "PASS criterion " << c.number << ": " << c.name << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL criterion " << c.number << ": " << c.name << " - " << e.what()
                      << "\n";
        }
    }
    if (failures) std::cout << failures << " of " << criteria.size() << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
