#include "catscore/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "catscore/errors.hpp"

namespace catscore {

void CostConfig::check() const {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw std::invalid_argument("alpha must be a positive finite number");
    }
}

std::string_view to_string(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::Lexical: return "lexical";
        case ProviderKind::CosineItem: return "cosine";
        case ProviderKind::GreedyTokenMatch: return "greedy";
    }
    return "unknown";
}

double lexical_f1(const Tokens& x, const Tokens& y) {
    if (x.empty() && y.empty()) return 1.0;
    if (x.empty() || y.empty()) return 0.0;
    std::unordered_map<std::string_view, int> counts;
    for (const auto& t : x) ++counts[t];
    std::size_t overlap = 0;
    for (const auto& t : y) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return 2.0 * static_cast<double>(overlap) / static_cast<double>(x.size() + y.size());
}

double lexical_f1(std::string_view x, std::string_view y) {
    return lexical_f1(tokenize(x), tokenize(y));
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vector dimensions differ: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double embed_cosine(std::span<const float> a, std::span<const float> b) {
    return std::clamp(cosine(a, b), 0.0, 1.0);
}

double embed_cosine(std::string_view x, std::string_view y, const EmbeddingSource& source) {
    auto kx = normalize(x);
    auto ky = normalize(y);
    if (kx == ky) return 1.0;
    auto vx = source.embed(kx);
    auto vy = source.embed(ky);
    return embed_cosine(vx, vy);
}

double greedy_match_f1(std::span<const Vector> x, std::span<const Vector> y) {
    if (x.empty() || y.empty()) throw EmptyText();
    // sim[i][j] computed once, then row and column maxima
    std::vector<double> best_x(x.size(), 0.0), best_y(y.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            double s = embed_cosine(x[i], y[j]);
            best_x[i] = std::max(best_x[i], s);
            best_y[j] = std::max(best_y[j], s);
        }
    }
    double precision = 0.0, recall = 0.0;
    for (double s : best_x) precision += s;
    for (double s : best_y) recall += s;
    precision /= static_cast<double>(x.size());
    recall /= static_cast<double>(y.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double distance_from_score(double score, const CostConfig& cfg) {
    return std::min(1.0, cfg.alpha * (1.0 - score));
}

double node_distance(std::string_view x, std::string_view y, const SimilarityProvider& provider,
                     const CostConfig& cfg) {
    return distance_from_score(provider.score(x, y), cfg);
}

// -------------------------------------------------------------- providers

double LexicalProvider::score(std::string_view x, std::string_view y) const {
    return lexical_f1(x, y);
}

CosineItemProvider::CosineItemProvider(std::shared_ptr<const EmbeddingSource> source)
    : source_(std::move(source)) {
    if (!source_) throw std::invalid_argument("cosine provider needs an embedding source");
}

double CosineItemProvider::score(std::string_view x, std::string_view y) const {
    return embed_cosine(x, y, *source_);
}

void CosineItemProvider::prepare(std::span<const std::string> texts) const {
    std::vector<std::string> keys;
    keys.reserve(texts.size());
    for (const auto& t : texts) keys.push_back(normalize(t));
    source_->prefetch(keys);
}

GreedyTokenMatchProvider::GreedyTokenMatchProvider(std::shared_ptr<const TokenEmbeddingSource> source)
    : source_(std::move(source)) {
    if (!source_) throw std::invalid_argument("greedy provider needs a token embedding source");
}

double GreedyTokenMatchProvider::score(std::string_view x, std::string_view y) const {
    auto kx = normalize(x);
    auto ky = normalize(y);
    if (kx.empty() || ky.empty()) throw EmptyText();
    if (kx == ky) return 1.0;
    auto vx = source_->embed_tokens(kx);
    auto vy = source_->embed_tokens(ky);
    return greedy_match_f1(vx, vy);
}

void GreedyTokenMatchProvider::prepare(std::span<const std::string> texts) const {
    std::vector<std::string> keys;
    keys.reserve(texts.size());
    for (const auto& t : texts) keys.push_back(normalize(t));
    source_->prefetch_tokens(keys);
}

}  // namespace catscore
