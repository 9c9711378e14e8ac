#include "catscore/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <unordered_map>

namespace catscore {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    return out;
}

RougeTriple rouge_cell(const Tokens& system, const Tokens& reference, bool stem) {
    return {100.0 * rouge_n(system, reference, 1, stem).f1, 100.0 * rouge_n(system, reference, 2, stem).f1,
            100.0 * rouge_l(system, reference, stem).f1};
}

}  // namespace

MissingId::MissingId(std::vector<std::string> ids)
    : InputError("MissingId", "system ids not in the reference corpus: " + join_ids(ids)), ids_(std::move(ids)) {}

MetricReport score_pair(const Catalogue& system, const Catalogue& reference, const ScoringContext& ctx,
                        std::string id, const CostMatrix* costs, AlignmentTrace* trace) {
    if (ctx.provider == nullptr) throw std::invalid_argument("scoring context has no similarity provider");
    ctx.cost.check();

    MetricReport report;
    report.id = std::move(id);
    report.item_count_system = static_cast<double>(system.size());
    report.item_count_reference = static_cast<double>(reference.size());

    auto system_tokens = strip_level_marks(system);
    auto reference_tokens = strip_level_marks(reference);
    const auto system_text = join(system_tokens);
    const auto reference_text = join(reference_tokens);

    CedResult ced;
    if (costs != nullptr) {
        ced = catalogue_edit_distance(build_tree(system), build_tree(reference), *costs);
    } else {
        std::vector<std::string> texts;
        for (const auto& it : system.items) texts.push_back(it.text);
        for (const auto& it : reference.items) texts.push_back(it.text);
        if (!system_text.empty() && !reference_text.empty()) {
            texts.push_back(system_text);
            texts.push_back(reference_text);
        }
        ctx.provider->prepare(texts);
        ced = catalogue_edit_distance(build_tree(system), build_tree(reference),
                                      substitution_costs(system, reference, *ctx.provider, ctx.cost));
    }
    report.ced = ced.distance;
    report.ceds = ceds_from_distance(ced.distance, system.size(), reference.size());
    if (trace != nullptr) *trace = std::move(ced.trace);

    report.cqe = cqe(system, ctx.lexicon, ctx.cqe_mode);

    if (system_text.empty() || reference_text.empty()) {
        report.similarity_total = system_text.empty() && reference_text.empty() ? 100.0 : 0.0;
    } else {
        report.similarity_total = 100.0 * ctx.provider->score(system_text, reference_text);
    }

    for (int level = 1; level <= 3; ++level) {
        report.rouge[static_cast<std::size_t>(level - 1)] =
            rouge_cell(strip_level_marks(slice_level(system, level)),
                       strip_level_marks(slice_level(reference, level)), ctx.stem);
    }
    report.rouge[kTotal] = rouge_cell(system_tokens, reference_tokens, ctx.stem);
    return report;
}

MetricReport aggregate(std::span<const MetricReport> reports) {
    MetricReport mean;
    mean.id = "mean";
    if (reports.empty()) return mean;
    for (const auto& r : reports) {
        mean.ceds += r.ceds;
        mean.ced += r.ced;
        mean.cqe += r.cqe;
        mean.similarity_total += r.similarity_total;
        mean.item_count_system += r.item_count_system;
        mean.item_count_reference += r.item_count_reference;
        for (std::size_t i = 0; i < mean.rouge.size(); ++i) {
            mean.rouge[i].r1 += r.rouge[i].r1;
            mean.rouge[i].r2 += r.rouge[i].r2;
            mean.rouge[i].rl += r.rouge[i].rl;
        }
    }
    const auto n = static_cast<double>(reports.size());
    mean.ceds /= n;
    mean.ced /= n;
    mean.cqe /= n;
    mean.similarity_total /= n;
    mean.item_count_system /= n;
    mean.item_count_reference /= n;
    for (auto& cell : mean.rouge) {
        cell.r1 /= n;
        cell.r2 /= n;
        cell.rl /= n;
    }
    return mean;
}

CorpusReport score_corpus(const std::vector<SystemOutput>& systems, const std::vector<ReviewRecord>& references,
                          const ScoringContext& ctx, unsigned jobs) {
    std::unordered_map<std::string_view, const ReviewRecord*> by_id;
    for (const auto& r : references) {
        if (!by_id.emplace(r.id, &r).second) throw DuplicateId(r.id);
    }

    std::vector<const SystemOutput*> order;
    order.reserve(systems.size());
    for (const auto& s : systems) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

    std::vector<std::string> missing;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && order[i]->id == order[i - 1]->id) throw DuplicateId(order[i]->id);
        if (!by_id.count(order[i]->id)) missing.push_back(order[i]->id);
    }
    if (!missing.empty()) throw MissingId(std::move(missing));

    CorpusReport out;
    out.pairs.resize(order.size());
    std::vector<std::exception_ptr> errors(order.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < order.size(); i = next++) {
            try {
                const auto& sys = *order[i];
                out.pairs[i] = score_pair(sys.catalogue, by_id.at(sys.id)->catalogue, ctx, sys.id);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const unsigned threads = std::clamp<unsigned>(jobs, 1, std::max<std::size_t>(1, order.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    out.aggregate = aggregate(out.pairs);
    return out;
}

// ------------------------------------------------------------ correlation

double incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete_beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // The continued fraction converges fast for x < (a + 1) / (a + b + 2);
    // use the reflection I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;

        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) break;
    }
    return std::exp(log_front) * h / a;
}

double student_t_two_tailed(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double pearson_p_value(double r, std::size_t n) {
    if (n < 3) throw DegenerateInput("p-value needs at least 3 samples");
    if (std::fabs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n) - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return student_t_two_tailed(t, df);
}

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw DegenerateInput("series lengths differ: " + std::to_string(xs.size()) + " vs " +
                              std::to_string(ys.size()));
    }
    const std::size_t n = xs.size();
    if (n < 3) throw DegenerateInput("pearson needs at least 3 samples, got " + std::to_string(n));

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("series has zero variance");

    CorrelationResult out;
    out.n = n;
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    out.p = pearson_p_value(out.r, n);
    return out;
}

}  // namespace catscore
