#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace catscore {

using Vector = std::vector<float>;

/// Resolves a normalized heading to one vector.
class EmbeddingSource {
public:
    virtual ~EmbeddingSource() = default;
    virtual Vector embed(const std::string& key) const = 0;
    /// Batch warm-up hint; sources without batching ignore it.
    virtual void prefetch(std::span<const std::string> /*keys*/) const {}
};

/// Resolves a normalized heading to one vector per token.
class TokenEmbeddingSource {
public:
    virtual ~TokenEmbeddingSource() = default;
    virtual std::vector<Vector> embed_tokens(const std::string& key) const = 0;
    virtual void prefetch_tokens(std::span<const std::string> /*keys*/) const {}
};

/// Thread-safe text -> value memo.
template <typename Value>
class MemoCache {
public:
    std::optional<Value> get(const std::string& key) const {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& key) const {
        std::shared_lock lock(mutex_);
        return map_.count(key) != 0;
    }

    void put(const std::string& key, Value value) {
        std::unique_lock lock(mutex_);
        map_.insert_or_assign(key, std::move(value));
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return map_.size();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, Value> map_;
};

/// JSON-lines embedding table: {"text": "...", "vector": [...]} per line.
/// Texts are normalized on load; duplicates are rejected. As a token
/// source, each token of a heading is looked up as its own entry.
class EmbeddingFile final : public EmbeddingSource, public TokenEmbeddingSource {
public:
    static EmbeddingFile load(const std::filesystem::path& path);
    static EmbeddingFile parse(std::istream& in);

    Vector embed(const std::string& key) const override;
    std::vector<Vector> embed_tokens(const std::string& key) const override;

    std::size_t size() const noexcept { return table_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }

private:
    std::unordered_map<std::string, Vector> table_;
    std::size_t dimension_ = 0;
};

struct ServiceOptions {
    std::string url;                 // e.g. http://127.0.0.1:8000
    int max_in_flight = 4;           // concurrent HTTP requests
    int retries = 3;                 // extra attempts on 5xx / transport failure
    std::size_t batch_size = 64;     // texts per request
    std::chrono::milliseconds timeout{30000};
    std::chrono::milliseconds backoff{50};
    bool use_cache = true;
};

/// HTTP embedding backend.
///   POST /embed         {"texts": [...]} -> {"vectors": [[...]]}
///   POST /embed_tokens  {"texts": [...]} -> {"tokens": [[...]], "vectors": [[[...]]]}
/// Results are memoized per normalized text. Any non-200 response is a
/// ServiceError once retries are exhausted (4xx are not retried).
class EmbeddingService final : public EmbeddingSource, public TokenEmbeddingSource {
public:
    explicit EmbeddingService(ServiceOptions options);
    ~EmbeddingService() override;

    Vector embed(const std::string& key) const override;
    void prefetch(std::span<const std::string> keys) const override;

    std::vector<Vector> embed_tokens(const std::string& key) const override;
    void prefetch_tokens(std::span<const std::string> keys) const override;

    /// HTTP requests issued so far, including retries.
    std::size_t request_count() const noexcept { return requests_.load(); }

private:
    struct Endpoint;

    std::string post(const std::string& path, const std::string& body) const;
    std::vector<std::vector<std::string>> batches(std::span<const std::string> keys, bool tokens) const;
    void fetch_vectors(const std::vector<std::string>& batch) const;
    void fetch_token_vectors(const std::vector<std::string>& batch) const;

    ServiceOptions options_;
    std::unique_ptr<Endpoint> endpoint_;
    mutable std::counting_semaphore<1024> in_flight_;
    mutable std::atomic<std::size_t> requests_{0};
    mutable MemoCache<Vector> vectors_;
    mutable MemoCache<std::vector<Vector>> token_vectors_;
};

}  // namespace catscore
