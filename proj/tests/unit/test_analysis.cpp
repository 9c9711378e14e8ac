#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>

#include "catscore/analysis.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace catscore;
using doctest::Approx;

namespace {

const LexicalProvider kLexical;

ScoringContext lexical_context() {
    ScoringContext ctx;
    ctx.provider = &kLexical;
    return ctx;
}

double boost_two_tailed(double r, std::size_t n) {
    const double df = static_cast<double>(n) - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

void check_same(const MetricReport& a, const MetricReport& b) {
    CHECK(a.ceds == Approx(b.ceds));
    CHECK(a.ced == Approx(b.ced));
    CHECK(a.cqe == Approx(b.cqe));
    CHECK(a.similarity_total == Approx(b.similarity_total));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.rouge[i].r1 == Approx(b.rouge[i].r1));
        CHECK(a.rouge[i].r2 == Approx(b.rouge[i].r2));
        CHECK(a.rouge[i].rl == Approx(b.rouge[i].rl));
    }
}

}  // namespace

TEST_CASE("score_pair on identical catalogues") {
    Catalogue c{{{1, "introduction"}, {1, "domain adaptation"}, {2, "data centric"}, {1, "conclusion"}}};
    auto r = score_pair(c, c, lexical_context(), "same");
    CHECK(r.id == "same");
    CHECK(r.ceds == 100.0);
    CHECK(r.ced == 0.0);
    CHECK(r.similarity_total == 100.0);
    for (const auto& cell : r.rouge) {
        CHECK(cell.r1 == 100.0);
        CHECK(cell.r2 == 100.0);
        CHECK(cell.rl == 100.0);
    }
    CHECK(r.cqe == cqe(c, TemplateLexicon::builtin()));
    CHECK(r.item_count_system == 4.0);
}

TEST_CASE("score_pair with an empty system") {
    Catalogue ref{{{1, "a"}, {2, "b"}, {1, "c"}}};
    auto r = score_pair(Catalogue{}, ref, lexical_context());
    CHECK(r.ceds == 0.0);
    CHECK(r.ced == 3.0);
    CHECK(r.rouge[kTotal].r1 == 0.0);
    CHECK(r.rouge[kTotal].rl == 0.0);
    CHECK(r.similarity_total == 0.0);
    CHECK(r.cqe == 0.0);
}

TEST_CASE("score_pair with one renamed heading") {
    Catalogue ref{{{1, "introduction"}, {1, "neural machine translation"}, {2, "data centric"}, {2, "model centric"},
                   {1, "conclusion"}}};
    auto sys = ref;
    sys.items[1].text = "machine translation";
    auto r = score_pair(sys, ref, lexical_context());
    CHECK(r.ced == Approx(0.24));
    CHECK(r.ceds == Approx(95.2));
}

TEST_CASE("score_pair returns the trace and honours an injected cost table") {
    Catalogue a{{{1, "x"}}}, b{{{1, "y"}}};
    CostMatrix costs(1, 1, 0.25);
    AlignmentTrace trace;
    auto r = score_pair(a, b, lexical_context(), "p", &costs, &trace);
    CHECK(r.ced == 0.25);
    CHECK(r.ceds == 75.0);
    REQUIRE(trace.ops.size() == 1);
    CHECK(trace.ops[0].cost == 0.25);
}

TEST_CASE("score_corpus joins, sorts and aggregates") {
    std::vector<ReviewRecord> refs(3);
    refs[0].id = "b";
    refs[0].catalogue = Catalogue{{{1, "introduction"}, {1, "results"}}};
    refs[1].id = "a";
    refs[1].catalogue = Catalogue{{{1, "neural translation"}}};
    refs[2].id = "c";
    refs[2].catalogue = Catalogue{{{1, "unused"}}};
    std::vector<SystemOutput> systems{{"b", refs[0].catalogue, {}}, {"a", refs[1].catalogue, {}}};

    auto report = score_corpus(systems, refs, lexical_context(), 4);
    REQUIRE(report.pairs.size() == 2);
    CHECK(report.pairs[0].id == "a");
    CHECK(report.pairs[1].id == "b");
    CHECK(report.aggregate.id == "mean");
    CHECK(report.aggregate.ceds == 100.0);

    SUBCASE("one pair aggregates to itself") {
        auto single = score_corpus({systems[0]}, refs, lexical_context());
        check_same(single.aggregate, single.pairs[0]);
    }
    SUBCASE("missing and duplicate ids") {
        std::vector<SystemOutput> bad{{"zz", {}, {}}, {"a", {}, {}}, {"yy", {}, {}}};
        try {
            score_corpus(bad, refs, lexical_context());
            FAIL("expected MissingId");
        } catch (const MissingId& e) {
            CHECK(e.ids() == std::vector<std::string>{"yy", "zz"});
        }
        auto dup = systems;
        dup.push_back(systems[0]);
        CHECK_THROWS_AS(score_corpus(dup, refs, lexical_context()), DuplicateId);
        auto dup_refs = refs;
        dup_refs.push_back(refs[0]);
        CHECK_THROWS_AS(score_corpus(systems, dup_refs, lexical_context()), DuplicateId);
    }
}

TEST_CASE("parallel scoring matches sequential scoring") {
    std::mt19937_64 rng(17);
    std::vector<ReviewRecord> refs;
    std::vector<SystemOutput> systems;
    for (int i = 0; i < 40; ++i) {
        ReviewRecord r;
        r.id = "id" + std::to_string(i);
        r.catalogue = testing::random_catalogue(rng, 12);
        refs.push_back(r);
        systems.push_back({r.id, testing::random_catalogue(rng, 12), {}});
    }
    auto seq = score_corpus(systems, refs, lexical_context(), 1);
    auto par = score_corpus(systems, refs, lexical_context(), 8);
    REQUIRE(seq.pairs.size() == par.pairs.size());
    for (std::size_t i = 0; i < seq.pairs.size(); ++i) {
        CHECK(seq.pairs[i].id == par.pairs[i].id);
        CHECK(seq.pairs[i].ceds == par.pairs[i].ceds);
    }
    CHECK(seq.aggregate.ceds == par.aggregate.ceds);
}

TEST_CASE("aggregate of copies equals the single report") {
    Catalogue a{{{1, "introduction"}, {2, "data"}}}, b{{{1, "introduction"}, {1, "model"}}};
    auto r = score_pair(a, b, lexical_context(), "x");
    std::vector<MetricReport> copies(5, r);
    check_same(aggregate(copies), r);
}

TEST_CASE("pearson fixtures") {
    std::vector<double> xs{1, 2, 3}, ys{1, 2, 4};
    auto r = pearson(xs, ys);
    CHECK(r.r == Approx(0.9820).epsilon(1e-3));
    CHECK(r.n == 3);
    CHECK(pearson(xs, xs).r == 1.0);
    CHECK(pearson(xs, xs).p == 0.0);
    std::vector<double> neg{-1, -2, -3};
    CHECK(pearson(xs, neg).r == -1.0);

    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DegenerateInput);
    CHECK_THROWS_AS(pearson(xs, std::vector<double>{5, 5, 5}), DegenerateInput);
    CHECK_THROWS_AS(pearson(xs, std::vector<double>{1, 2}), DegenerateInput);
}

TEST_CASE("pearson is invariant under affine transforms") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> norm;
    for (int round = 0; round < 100; ++round) {
        std::vector<double> xs(12), ys(12);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i] = norm(rng);
            ys[i] = xs[i] + norm(rng);
        }
        auto base = pearson(xs, ys);
        auto scaled = xs;
        for (auto& v : scaled) v = 3.0 * v + 7.0;
        CHECK(pearson(scaled, ys).r == Approx(base.r).epsilon(1e-12));
        for (auto& v : scaled) v = -v;
        CHECK(pearson(scaled, ys).r == Approx(-base.r).epsilon(1e-12));
    }
}

TEST_CASE("p-values agree with a reference t distribution") {
    for (std::size_t n : {3u, 4u, 5u, 9u, 12u, 30u, 200u}) {
        for (double r : {-0.99, -0.7, -0.3, -0.05, 0.0, 0.1, 0.409, 0.634, 0.889, 0.999}) {
            CAPTURE(n);
            CAPTURE(r);
            const double expected = boost_two_tailed(r, n);
            CHECK(pearson_p_value(r, n) == Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("p-values of correlations rounded to three decimals") {
    // r and p are both rounded, so the p-value of some r within half a unit
    // of the printed r must round to the printed p.
    auto consistent = [](double r, std::size_t n, double printed) {
        const double lo = pearson_p_value(std::fabs(r) + 0.0005, n);
        const double hi = pearson_p_value(std::fabs(r) - 0.0005, n);
        return printed >= lo - 0.0005 && printed <= hi + 0.0005;
    };
    // n = 9
    CHECK(consistent(0.889, 9, 0.001));
    CHECK(consistent(0.511, 9, 0.160));
    CHECK(consistent(0.707, 9, 0.033));
    CHECK(consistent(-0.082, 9, 0.834));
    CHECK(consistent(0.409, 9, 0.275));
    // n = 12
    CHECK(consistent(0.634, 12, 0.027));
    CHECK_FALSE(consistent(0.634, 12, 0.05));
    CHECK(pearson_p_value(1.0 - 1e-9, 9) < 0.001);
}

TEST_CASE("incomplete beta edge cases") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.3) == Approx(0.3).epsilon(1e-12));
    CHECK(incomplete_beta(2.5, 1.5, 0.4) + incomplete_beta(1.5, 2.5, 0.6) == Approx(1.0).epsilon(1e-12));
    CHECK(student_t_two_tailed(0.0, 5.0) == Approx(1.0));
    CHECK_THROWS(incomplete_beta(0.0, 1.0, 0.5));
}
