#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "catscore/embedding.hpp"
#include "catscore/text.hpp"

namespace catscore {

/// Substitution-cost parameters. Insert and delete are fixed at one.
struct CostConfig {
    double alpha = 1.2;

    static constexpr double insert_cost = 1.0;
    static constexpr double delete_cost = 1.0;

    /// Throws std::invalid_argument unless alpha is finite and positive.
    void check() const;
};

enum class ProviderKind { Lexical, CosineItem, GreedyTokenMatch };

std::string_view to_string(ProviderKind kind);

/// Similarity between two headings, in [0, 1], symmetric, and exactly 1
/// for headings with equal normalized text. Implementations are safe to
/// share between threads.
class SimilarityProvider {
public:
    virtual ~SimilarityProvider() = default;

    virtual ProviderKind kind() const noexcept = 0;
    virtual double score(std::string_view x, std::string_view y) const = 0;

    /// Hint listing every heading about to be scored, so remote backends
    /// can batch their lookups.
    virtual void prepare(std::span<const std::string> /*texts*/) const {}
};

/// Token-overlap F1 (multiset). Default backend, no external data.
class LexicalProvider final : public SimilarityProvider {
public:
    ProviderKind kind() const noexcept override { return ProviderKind::Lexical; }
    double score(std::string_view x, std::string_view y) const override;
};

/// Clamped cosine between whole-heading embeddings.
class CosineItemProvider final : public SimilarityProvider {
public:
    explicit CosineItemProvider(std::shared_ptr<const EmbeddingSource> source);

    ProviderKind kind() const noexcept override { return ProviderKind::CosineItem; }
    double score(std::string_view x, std::string_view y) const override;
    void prepare(std::span<const std::string> texts) const override;

private:
    std::shared_ptr<const EmbeddingSource> source_;
};

/// BERTScore-style F1 from greedy max-cosine matching of token vectors.
class GreedyTokenMatchProvider final : public SimilarityProvider {
public:
    explicit GreedyTokenMatchProvider(std::shared_ptr<const TokenEmbeddingSource> source);

    ProviderKind kind() const noexcept override { return ProviderKind::GreedyTokenMatch; }
    double score(std::string_view x, std::string_view y) const override;
    void prepare(std::span<const std::string> texts) const override;

private:
    std::shared_ptr<const TokenEmbeddingSource> source_;
};

/// 2 * |multiset overlap| / (|x| + |y|); 1 when both are empty.
double lexical_f1(const Tokens& x, const Tokens& y);
double lexical_f1(std::string_view x, std::string_view y);

/// Raw cosine; 0 when either vector has zero norm. Throws
/// std::invalid_argument on a dimension mismatch.
double cosine(std::span<const float> a, std::span<const float> b);

/// cosine clamped into [0, 1].
double embed_cosine(std::span<const float> a, std::span<const float> b);
double embed_cosine(std::string_view x, std::string_view y, const EmbeddingSource& source);

/// Precision = mean over x of the best clamped cosine into y, recall the
/// mirror image, combined as F1. Throws EmptyText if either side is empty.
double greedy_match_f1(std::span<const Vector> x, std::span<const Vector> y);

/// min(1, alpha * (1 - score)).
double distance_from_score(double score, const CostConfig& cfg);

/// Substitution cost between two headings. Only heading text is compared.
double node_distance(std::string_view x, std::string_view y, const SimilarityProvider& provider,
                     const CostConfig& cfg);

}  // namespace catscore
