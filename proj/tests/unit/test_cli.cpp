#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catscore/report.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "support/generators.hpp"

namespace fs = std::filesystem;
using namespace catscore;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "catscore");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("catscore-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }

private:
    fs::path path_;
};

bool single_error_line(const std::string& err, const std::string& kind) {
    return err.rfind("error: " + kind + ": ", 0) == 0 && err.find('\n') == err.size() - 1;
}

const std::string kCatalogue = "<l1> introduction\n<l1> domain adaptation\n<l2> data centric\n<l1> conclusion\n";

}  // namespace

TEST_CASE("validate exit codes") {
    TempDir dir;
    auto clean = run({"validate", dir.write("clean.txt", kCatalogue)});
    CHECK(clean.code == 0);
    CHECK(clean.out == "ok\n");

    auto deep = run({"validate", dir.write("deep.txt", "<l2> model centric\n")});
    CHECK(deep.code == 1);
    CHECK(deep.out.find("LeadingDeepLevel") != std::string::npos);

    auto missing = run({"validate", "/nonexistent/file.txt"});
    CHECK(missing.code == 2);
    CHECK(single_error_line(missing.err, "IoError"));

    auto bad_json = run({"validate", dir.write("bad.jsonl", "{\"id\": \"a\"\n")});
    CHECK(bad_json.code == 2);
    CHECK(single_error_line(bad_json.err, "ParseError"));

    auto corpus = run({"validate", "--format", "json",
                       dir.write("c.jsonl", "{\"id\":\"a\",\"title\":\"t\",\"catalogue\":\"<l1> x\\n<l3> y\"}\n")});
    CHECK(corpus.code == 1);
    auto j = Json::parse(corpus.out);
    CHECK(j.at("issue_count") == 1);
    CHECK(j.at("records").at(0).at("issues").at(0).at("kind") == "LevelJump");
}

TEST_CASE("score identical files") {
    TempDir dir;
    auto f = dir.write("c.txt", kCatalogue);
    auto r = run({"score", "--system", f, "--reference", f});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("pairs").at(0).at("id") == "pair");
    CHECK(j.at("pairs").at(0).at("ceds").get<double>() == 100.0);
    CHECK(j.at("aggregate").at("ceds").get<double>() == 100.0);

    auto table = run({"score", "--system", f, "--reference", f, "--format", "table"});
    CHECK(table.code == 0);
    CHECK(table.out.rfind("id ", 0) == 0);
    CHECK(table.out.find("100.0/100.0/100.0") != std::string::npos);
}

TEST_CASE("score the nmt survey pair with injected costs") {
    auto r = run({"score", "--system", testing::data_path("nmt_survey_system.txt"), "--reference",
                  testing::data_path("nmt_survey_reference.txt"), "--cost-table", testing::data_path("nmt_survey_costs.txt")});
    REQUIRE(r.code == 0);
    auto pair = Json::parse(r.out).at("pairs").at(0);
    CHECK(pair.at("ced").get<double>() == doctest::Approx(12.99));
    CHECK(pair.at("ceds").get<double>() == doctest::Approx(38.14).epsilon(0.001));
}

TEST_CASE("cost table shape is checked") {
    TempDir dir;
    auto f = dir.write("c.txt", kCatalogue);
    auto r = run({"score", "--system", f, "--reference", f, "--cost-table", dir.write("costs.txt", "0 0\n")});
    CHECK(r.code == 2);
    CHECK(single_error_line(r.err, "CostTableShape"));
    auto bad = run({"align", "--system", f, "--reference", f, "--cost-table",
                    dir.write("nan.txt", "0 0 0 x\n0 0 0 0\n0 0 0 0\n0 0 0 0\n")});
    CHECK(bad.code == 2);
    CHECK(single_error_line(bad.err, "ParseError"));
}

TEST_CASE("missing embedding is a provider error") {
    TempDir dir;
    auto f = dir.write("c.txt", "<l1> introduction\n");
    auto g = dir.write("g.txt", "<l1> background\n");
    auto emb = dir.write("e.jsonl", "{\"text\": \"introduction\", \"vector\": [1, 0]}\n");
    auto r = run({"score", "--system", f, "--reference", g, "--sim", "cosine", "--embeddings", emb});
    CHECK(r.code == 3);
    CHECK(single_error_line(r.err, "MissingEmbedding"));
}

TEST_CASE("cosine provider from a file") {
    TempDir dir;
    auto f = dir.write("c.txt", "<l1> introduction\n");
    auto g = dir.write("g.txt", "<l1> background\n");
    auto emb = dir.write("e.jsonl",
                         "{\"text\": \"introduction\", \"vector\": [1, 0]}\n"
                         "{\"text\": \"background\", \"vector\": [0.6, 0.8]}\n");
    auto r = run({"score", "--system", f, "--reference", g, "--sim", "cosine", "--embeddings", emb});
    REQUIRE(r.code == 0);
    auto pair = Json::parse(r.out).at("pairs").at(0);
    // similarity 0.6, distance min(1, 1.2 * 0.4) = 0.48
    CHECK(pair.at("ced").get<double>() == doctest::Approx(0.48));
    CHECK(pair.at("similarity_total").get<double>() == doctest::Approx(60.0));
}

TEST_CASE("align output") {
    TempDir dir;
    auto f = dir.write("c.txt", kCatalogue);
    auto same = run({"align", "--system", f, "--reference", f});
    CHECK(same.code == 0);
    CHECK(same.out.find("| 0.00\n") != std::string::npos);
    CHECK(same.out.find("| 1.00") == std::string::npos);

    auto empty = run({"align", "--system", dir.write("empty.txt", ""), "--reference", f});
    CHECK(empty.code == 0);
    std::istringstream lines(empty.out);
    std::string line;
    std::getline(lines, line);  // header
    int rows = 0;
    while (std::getline(lines, line) && line.rfind("CED", 0) != 0) {
        CHECK(line.rfind("-", 0) == 0);
        CHECK(line.substr(line.size() - 4) == "1.00");
        ++rows;
    }
    CHECK(rows == 4);

    auto chain = dir.write("chain.txt", "<l1> a\n<l2> b\n");
    auto sib = dir.write("sib.txt", "<l1> a\n<l1> b\n");
    auto j = Json::parse(run({"align", "--system", chain, "--reference", sib, "--format", "json"}).out);
    REQUIRE(j.at("ops").size() == 3);
    int maps = 0, dashes = 0;
    for (const auto& op : j.at("ops")) {
        if (op.at("kind") == "map") ++maps;
        if (op.at("system").is_null() || op.at("reference").is_null()) ++dashes;
    }
    CHECK(maps == 1);
    CHECK(dashes == 2);
    CHECK(j.at("ceds").get<double>() == 0.0);
}

TEST_CASE("align selects a pair from JSONL inputs") {
    TempDir dir;
    auto sys = dir.write("s.jsonl", "{\"id\": \"a\", \"catalogue\": \"<l1> x\"}\n");
    auto ref = dir.write("r.jsonl", "{\"id\": \"a\", \"title\": \"t\", \"catalogue\": \"<l1> x\\n<l1> y\"}\n");
    auto r = run({"align", "--system", sys, "--reference", ref, "--id", "a"});
    CHECK(r.code == 0);
    CHECK(r.out.find("CEDS 50.00") != std::string::npos);
    CHECK(run({"align", "--system", sys, "--reference", ref}).code == 2);
    auto missing = run({"align", "--system", sys, "--reference", ref, "--id", "nope"});
    CHECK(missing.code == 2);
    CHECK(single_error_line(missing.err, "MissingId"));
}

TEST_CASE("score a corpus") {
    TempDir dir;
    auto sys = dir.write("s.jsonl",
                         "{\"id\": \"b\", \"catalogue\": \"<l1> introduction\\n<l1> results\"}\n"
                         "{\"id\": \"a\", \"catalogue\": \"<l1> x\"}\n");
    auto ref = dir.write("r.jsonl",
                         "{\"id\": \"a\", \"title\": \"t\", \"catalogue\": \"<l1> x\"}\n"
                         "{\"id\": \"b\", \"title\": \"t\", \"catalogue\": \"<l1> introduction\\n<l1> methods\"}\n");
    auto r = run({"score", "--system", sys, "--reference", ref, "--jobs", "2"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("pairs").at(0).at("id") == "a");
    CHECK(j.at("pairs").at(1).at("id") == "b");

    auto extra = dir.write("x.jsonl", "{\"id\": \"zz\", \"catalogue\": \"<l1> x\"}\n");
    auto missing = run({"score", "--system", extra, "--reference", ref});
    CHECK(missing.code == 2);
    CHECK(single_error_line(missing.err, "MissingId"));

    auto mixed = run({"score", "--system", dir.write("c.txt", kCatalogue), "--reference", ref});
    CHECK(mixed.code == 2);
}

TEST_CASE("flags, environment and usage errors") {
    TempDir dir;
    auto f = dir.write("c.txt", "<l1> neural machine translation\n");
    auto g = dir.write("g.txt", "<l1> machine translation\n");

    auto base = Json::parse(run({"score", "--system", f, "--reference", g}).out);
    CHECK(base.at("pairs").at(0).at("ced").get<double>() == doctest::Approx(0.24));

    ::setenv("CATSCORE_ALPHA", "2.0", 1);
    auto env = Json::parse(run({"score", "--system", f, "--reference", g}).out);
    auto flag = Json::parse(run({"score", "--system", f, "--reference", g, "--alpha", "1.0"}).out);
    ::unsetenv("CATSCORE_ALPHA");
    CHECK(env.at("pairs").at(0).at("ced").get<double>() == doctest::Approx(0.4));
    CHECK(flag.at("pairs").at(0).at("ced").get<double>() == doctest::Approx(0.2));

    auto bad_alpha = run({"score", "--system", f, "--reference", g, "--alpha", "-1"});
    CHECK(bad_alpha.code == 2);
    CHECK(single_error_line(bad_alpha.err, "BadConfig"));
    auto no_source = run({"score", "--system", f, "--reference", g, "--sim", "cosine"});
    CHECK(no_source.code == 2);
    auto unknown = run({"frobnicate"});
    CHECK(unknown.code == 2);
    CHECK(single_error_line(unknown.err, "UsageError"));
    CHECK(run({}).code == 2);
    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("score") != std::string::npos);
    CHECK(help.out.find("cost-table") == std::string::npos);
}

TEST_CASE("stats command") {
    TempDir dir;
    auto empty = run({"stats", dir.write("empty.jsonl", "")});
    CHECK(empty.code == 2);
    CHECK(single_error_line(empty.err, "EmptyCorpus"));

    auto corpus = dir.write("c.jsonl",
                            "{\"id\": \"a\", \"title\": \"t\", \"references\": [{\"title\": \"r\", \"abstract\": "
                            "\"one two\"}, {\"title\": \"s\", \"abstract\": \"three\"}], \"catalogue\": \"<l1> a\\n<l1> b\\n<l2> "
                            "c\\n<l2> d\\n<l1> e\"}\n");
    auto r = run({"stats", corpus});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("refs_mean").get<double>() == 2.0);
    CHECK(j.at("output_sentences_mean").get<double>() == 5.0);
    CHECK(j.at("level_rouge").at("l1").at("l1") == "/");

    auto filtered = run({"stats", "--filter", corpus});
    CHECK(filtered.code == 2);
    CHECK(single_error_line(filtered.err, "EmptyCorpus"));

    auto table = run({"stats", "--format", "table", corpus});
    CHECK(table.code == 0);
    CHECK(table.out.find("splitter-dependent") != std::string::npos);
}

TEST_CASE("corr command") {
    TempDir dir;
    auto same = run({"corr", dir.write("same.csv", "x,y\n1,1\n2,2\n3,3\n4,4\n")});
    REQUIRE(same.code == 0);
    auto j = Json::parse(same.out);
    CHECK(j.at("r").get<double>() == 1.0);
    CHECK(j.at("n") == 4);
    CHECK(j.at("x") == "x");

    auto fixture = Json::parse(run({"corr", dir.write("f.csv", "ceds,human\n1,1\n2,2\n3,4\n")}).out);
    CHECK(fixture.at("r").get<double>() == doctest::Approx(0.9820).epsilon(1e-3));

    auto flat = run({"corr", dir.write("flat.csv", "a,b\n1,5\n2,5\n3,5\n")});
    CHECK(flat.code == 2);
    CHECK(single_error_line(flat.err, "DegenerateInput"));
    auto bad = run({"corr", dir.write("bad.csv", "a,b\n1,x\n")});
    CHECK(bad.code == 2);
    CHECK(single_error_line(bad.err, "ParseError"));
}

TEST_CASE("score output is byte-identical across runs and job counts") {
    TempDir dir;
    std::mt19937_64 rng(41);
    std::string sys, ref;
    for (int i = 0; i < 25; ++i) {
        auto id = "p" + std::to_string(i);
        auto esc = [](std::string s) {
            std::string out;
            for (char c : s) out += c == '\n' ? std::string("\\n") : std::string(1, c);
            return out;
        };
        sys += "{\"id\": \"" + id + "\", \"catalogue\": \"" + esc(serialize(testing::random_catalogue(rng, 10))) + "\"}\n";
        ref += "{\"id\": \"" + id + "\", \"title\": \"t\", \"catalogue\": \"" +
               esc(serialize(testing::random_catalogue(rng, 10))) + "\"}\n";
    }
    auto s = dir.write("s.jsonl", sys), r = dir.write("r.jsonl", ref);
    auto a = run({"score", "--system", s, "--reference", r});
    auto b = run({"score", "--system", s, "--reference", r, "--jobs", "8"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}
