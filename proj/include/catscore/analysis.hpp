#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catscore/ced.hpp"
#include "catscore/corpus.hpp"
#include "catscore/similarity.hpp"
#include "catscore/textmetrics.hpp"

namespace catscore {

/// Everything score_pair needs besides the two catalogues.
struct ScoringContext {
    const SimilarityProvider* provider = nullptr;  // required
    CostConfig cost;
    TemplateLexicon lexicon = TemplateLexicon::builtin();
    CqeMode cqe_mode = CqeMode::Tokens;
    bool stem = false;
};

enum RougeRow : std::size_t { kL1 = 0, kL2 = 1, kL3 = 2, kTotal = 3 };

struct MetricReport {
    std::string id;
    double ceds = 0.0;
    double ced = 0.0;
    double cqe = 0.0;                 // of the system catalogue
    double similarity_total = 0.0;    // provider score of the flattened texts, x100
    std::array<RougeTriple, 4> rouge{};  // L1, L2, L3, Total
    double item_count_system = 0.0;
    double item_count_reference = 0.0;
};

/// Scores a system catalogue against its reference. When `costs` is
/// given it replaces the provider for the edit distance (rows are system
/// items). `trace`, if non-null, receives the alignment.
MetricReport score_pair(const Catalogue& system, const Catalogue& reference, const ScoringContext& ctx,
                        std::string id = {}, const CostMatrix* costs = nullptr, AlignmentTrace* trace = nullptr);

class MissingId : public InputError {
public:
    explicit MissingId(std::vector<std::string> ids);

    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

struct CorpusReport {
    std::vector<MetricReport> pairs;  // sorted by id
    MetricReport aggregate;           // unweighted means, id "mean"
};

/// Unweighted mean of every numeric field.
MetricReport aggregate(std::span<const MetricReport> reports);

/// Joins system outputs to references by id and scores each pair using up
/// to `jobs` threads. Output order and values do not depend on `jobs`.
CorpusReport score_corpus(const std::vector<SystemOutput>& systems, const std::vector<ReviewRecord>& references,
                          const ScoringContext& ctx, unsigned jobs = 1);

struct CorrelationResult {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

class DegenerateInput : public InputError {
public:
    explicit DegenerateInput(const std::string& message) : InputError("DegenerateInput", message) {}
};

/// Sample Pearson correlation with a two-tailed p-value from Student's t
/// with n - 2 degrees of freedom. Needs n >= 3, equal lengths and
/// non-constant series.
CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys);

/// Two-tailed p of a correlation r over n samples.
double pearson_p_value(double r, std::size_t n);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

}  // namespace catscore
