#include "catscore/embedding.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "catscore/errors.hpp"
#include "catscore/text.hpp"
#include "httplib.h"
#include "json.hpp"

namespace catscore {

using nlohmann::json;

namespace {

Vector to_vector(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("vector is not an array");
    Vector v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw std::invalid_argument("vector element is not a number");
        v.push_back(x.get<float>());
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------- file

EmbeddingFile EmbeddingFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("IoError", "cannot open embedding file " + path.string());
    return parse(in);
}

EmbeddingFile EmbeddingFile::parse(std::istream& in) {
    EmbeddingFile file;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (split_words(line).empty()) continue;
        std::string key;
        Vector vec;
        try {
            auto j = json::parse(line);
            key = normalize(j.at("text").get<std::string>());
            vec = to_vector(j.at("vector"));
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad embedding record: ") + e.what(), line_no);
        }
        if (vec.empty()) throw ParseError("empty vector", line_no);
        if (file.dimension_ == 0) {
            file.dimension_ = vec.size();
        } else if (vec.size() != file.dimension_) {
            throw ParseError("vector dimension " + std::to_string(vec.size()) + " differs from " +
                                 std::to_string(file.dimension_),
                             line_no);
        }
        if (!file.table_.emplace(key, std::move(vec)).second) {
            throw ParseError("duplicate text '" + key + "'", line_no);
        }
    }
    return file;
}

Vector EmbeddingFile::embed(const std::string& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) throw MissingEmbedding(key);
    return it->second;
}

std::vector<Vector> EmbeddingFile::embed_tokens(const std::string& key) const {
    std::vector<Vector> out;
    for (const auto& token : tokenize(key)) out.push_back(embed(token));
    return out;
}

// ------------------------------------------------------------- service

struct EmbeddingService::Endpoint {
    std::string host;    // scheme://host:port
    std::string prefix;  // path prefix without trailing slash
};

EmbeddingService::EmbeddingService(ServiceOptions options)
    : options_(std::move(options)),
      endpoint_(std::make_unique<Endpoint>()),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {
    const auto& url = options_.url;
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw InputError("BadUrl", "embedding url needs a scheme: " + url);
    auto slash = url.find('/', scheme + 3);
    endpoint_->host = url.substr(0, slash);
    if (slash != std::string::npos) {
        endpoint_->prefix = url.substr(slash);
        while (!endpoint_->prefix.empty() && endpoint_->prefix.back() == '/') endpoint_->prefix.pop_back();
    }
    if (options_.batch_size == 0) options_.batch_size = 1;
}

EmbeddingService::~EmbeddingService() = default;

std::string EmbeddingService::post(const std::string& path, const std::string& body) const {
    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
    } release{in_flight_};

    std::string last_error;
    for (int attempt = 0; attempt <= std::max(0, options_.retries); ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(options_.backoff * attempt);
        ++requests_;
        httplib::Client client(endpoint_->host);
        auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
        auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        auto res = client.Post(endpoint_->prefix + path, body, "application/json");
        if (!res) {
            last_error = "request to " + endpoint_->host + endpoint_->prefix + path + " failed: " +
                         httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return res->body;
        last_error = "HTTP " + std::to_string(res->status) + " from " + endpoint_->prefix + path;
        if (res->status < 500) break;
    }
    throw ServiceError(last_error);
}

std::vector<std::vector<std::string>> EmbeddingService::batches(std::span<const std::string> keys,
                                                                bool tokens) const {
    std::vector<std::vector<std::string>> out;
    std::unordered_set<std::string> seen;
    for (const auto& key : keys) {
        bool cached = tokens ? token_vectors_.contains(key) : vectors_.contains(key);
        if (cached || !seen.insert(key).second) continue;
        if (out.empty() || out.back().size() >= options_.batch_size) out.emplace_back();
        out.back().push_back(key);
    }
    return out;
}

void EmbeddingService::fetch_vectors(const std::vector<std::string>& batch) const {
    auto body = post("/embed", json{{"texts", batch}}.dump());
    try {
        auto j = json::parse(body);
        const auto& vectors = j.at("vectors");
        if (!vectors.is_array() || vectors.size() != batch.size()) {
            throw std::invalid_argument("expected " + std::to_string(batch.size()) + " vectors");
        }
        for (std::size_t i = 0; i < batch.size(); ++i) vectors_.put(batch[i], to_vector(vectors[i]));
    } catch (const ServiceError&) {
        throw;
    } catch (const std::exception& e) {
        throw ServiceError(std::string("malformed /embed response: ") + e.what());
    }
}

void EmbeddingService::fetch_token_vectors(const std::vector<std::string>& batch) const {
    auto body = post("/embed_tokens", json{{"texts", batch}}.dump());
    try {
        auto j = json::parse(body);
        const auto& tokens = j.at("tokens");
        const auto& vectors = j.at("vectors");
        if (!tokens.is_array() || !vectors.is_array() || tokens.size() != batch.size() ||
            vectors.size() != batch.size()) {
            throw std::invalid_argument("expected " + std::to_string(batch.size()) + " entries");
        }
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (!vectors[i].is_array() || tokens[i].size() != vectors[i].size()) {
                throw std::invalid_argument("token/vector count mismatch for '" + batch[i] + "'");
            }
            std::vector<Vector> per_token;
            for (const auto& v : vectors[i]) per_token.push_back(to_vector(v));
            token_vectors_.put(batch[i], std::move(per_token));
        }
    } catch (const ServiceError&) {
        throw;
    } catch (const std::exception& e) {
        throw ServiceError(std::string("malformed /embed_tokens response: ") + e.what());
    }
}

namespace {

template <typename Fn>
void run_batches(const std::vector<std::vector<std::string>>& work, Fn&& fn) {
    if (work.size() == 1) {
        fn(work.front());
        return;
    }
    std::vector<std::future<void>> pending;
    pending.reserve(work.size());
    for (const auto& batch : work) pending.push_back(std::async(std::launch::async, [&] { fn(batch); }));
    std::exception_ptr first;
    for (auto& f : pending) {
        try {
            f.get();
        } catch (...) {
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace

void EmbeddingService::prefetch(std::span<const std::string> keys) const {
    if (!options_.use_cache) return;
    run_batches(batches(keys, false), [this](const auto& b) { fetch_vectors(b); });
}

void EmbeddingService::prefetch_tokens(std::span<const std::string> keys) const {
    if (!options_.use_cache) return;
    run_batches(batches(keys, true), [this](const auto& b) { fetch_token_vectors(b); });
}

Vector EmbeddingService::embed(const std::string& key) const {
    if (options_.use_cache) {
        if (auto hit = vectors_.get(key)) return *hit;
        fetch_vectors({key});
        return *vectors_.get(key);
    }
    auto body = post("/embed", json{{"texts", json::array({key})}}.dump());
    try {
        return to_vector(json::parse(body).at("vectors").at(0));
    } catch (const std::exception& e) {
        throw ServiceError(std::string("malformed /embed response: ") + e.what());
    }
}

std::vector<Vector> EmbeddingService::embed_tokens(const std::string& key) const {
    if (options_.use_cache) {
        if (auto hit = token_vectors_.get(key)) return *hit;
        fetch_token_vectors({key});
        return *token_vectors_.get(key);
    }
    auto body = post("/embed_tokens", json{{"texts", json::array({key})}}.dump());
    try {
        std::vector<Vector> out;
        for (const auto& v : json::parse(body).at("vectors").at(0)) out.push_back(to_vector(v));
        return out;
    } catch (const std::exception& e) {
        throw ServiceError(std::string("malformed /embed_tokens response: ") + e.what());
    }
}

}  // namespace catscore
