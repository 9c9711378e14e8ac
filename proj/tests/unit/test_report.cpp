#include "catscore/report.hpp"
#include "doctest.h"

using namespace catscore;

TEST_CASE("stable json: sorted keys, four decimals, trailing newline") {
    Json j{{"b", 1.0 / 3.0}, {"a", Json{{"z", -0.0}, {"y", 2}}}, {"c", Json::array({0.5, "s"})}, {"d", nullptr}};
    CHECK(dump_stable(j) ==
          "{\n"
          "  \"a\": {\n"
          "    \"y\": 2,\n"
          "    \"z\": 0.0000\n"
          "  },\n"
          "  \"b\": 0.3333,\n"
          "  \"c\": [\n"
          "    0.5000,\n"
          "    \"s\"\n"
          "  ],\n"
          "  \"d\": null\n"
          "}\n");
    CHECK(dump_stable(Json::object()) == "{}\n");
    CHECK(dump_stable(Json{{"tiny", -0.00001}}) == "{\n  \"tiny\": 0.0000\n}\n");
}

TEST_CASE("metric report json shape") {
    MetricReport r;
    r.id = "x";
    r.ceds = 38.142857;
    r.rouge[kTotal].r1 = 12.5;
    auto j = to_json(r);
    CHECK(j.at("id") == "x");
    CHECK(j.at("rouge").at("total").at("r1").get<double>() == 12.5);
    CHECK(j.at("rouge").size() == 4);
    CHECK(dump_stable(j).find("\"ceds\": 38.1429") != std::string::npos);
}

TEST_CASE("trace table marks unmatched rows with a dash") {
    Catalogue a{{{1, "a"}}}, b{{{1, "a"}, {1, "b"}}};
    AlignmentTrace t;
    t.ops = {{EditOp::Kind::Map, 0, 0, 0.0}, {EditOp::Kind::Insert, -1, 1, 1.0}};
    t.total = 1.0;
    auto table = format_trace_table(t, a, b);
    CHECK(table ==
          "Generated Result | Ground Truth | distance\n"
          "<l1> a [0]       | <l1> a [0]   | 0.00\n"
          "-                | <l1> b [1]   | 1.00\n");
    auto j = trace_to_json(t, a, b, 1.0, 50.0);
    CHECK(j.at("ops").at(1).at("system").is_null());
    CHECK(j.at("ops").at(1).at("kind") == "insert");
    CHECK(j.at("ceds").get<double>() == 50.0);
}

TEST_CASE("stats json marks the diagonal") {
    CorpusStats s;
    auto j = to_json(s);
    CHECK(j.at("level_rouge").at("l2").at("l2") == "/");
    CHECK(j.at("level_rouge").at("total").at("l2").is_object());
    CHECK(j.at("novel_ngrams").size() == 4);
}
