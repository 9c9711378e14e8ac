#include "catscore/corpus.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <unordered_set>

#include "json.hpp"

namespace catscore {

using nlohmann::json;

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("IoError", "cannot open " + path.string());
    return in;
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (split_words(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!j.is_object()) throw ParseError("record is not a JSON object", line_no);
        try {
            fn(j, line_no);
        } catch (const json::exception& e) {
            throw ParseError(e.what(), line_no);
        }
    }
}

std::string required_string(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return j.at(key).get<std::string>();
}

}  // namespace

bool Reference::valid() const {
    return !split_words(title).empty() && !split_words(abstract).empty();
}

std::vector<ReviewRecord> parse_corpus(std::istream& in) {
    std::vector<ReviewRecord> records;
    std::unordered_set<std::string> ids;
    for_each_json_line(in, [&](const json& j, std::size_t line_no) {
        ReviewRecord r;
        try {
            r.id = required_string(j, "id");
            r.title = to_lower(required_string(j, "title"));
            if (j.contains("domain") && !j.at("domain").is_null()) r.domain = j.at("domain").get<std::string>();
            if (j.contains("references")) {
                for (const auto& ref : j.at("references")) {
                    Reference out;
                    if (ref.contains("title") && !ref.at("title").is_null()) out.title = to_lower(ref.at("title").get<std::string>());
                    if (ref.contains("abstract") && !ref.at("abstract").is_null()) {
                        out.abstract = to_lower(ref.at("abstract").get<std::string>());
                    }
                    r.references.push_back(std::move(out));
                }
            }
            auto parsed = parse_catalogue(required_string(j, "catalogue"));
            r.catalogue = std::move(parsed.catalogue);
            r.catalogue_issues = std::move(parsed.issues);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!ids.insert(r.id).second) throw DuplicateId(r.id);
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<ReviewRecord> load_corpus(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_corpus(in);
}

std::vector<SystemOutput> parse_system_outputs(std::istream& in) {
    std::vector<SystemOutput> outputs;
    std::unordered_set<std::string> ids;
    for_each_json_line(in, [&](const json& j, std::size_t line_no) {
        SystemOutput s;
        try {
            s.id = required_string(j, "id");
            auto parsed = parse_catalogue(required_string(j, "catalogue"));
            s.catalogue = std::move(parsed.catalogue);
            s.catalogue_issues = std::move(parsed.issues);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!ids.insert(s.id).second) throw DuplicateId(s.id);
        outputs.push_back(std::move(s));
    });
    return outputs;
}

std::vector<SystemOutput> load_system_outputs(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_system_outputs(in);
}

std::string truncate_abstract(std::string_view text, std::size_t limit) {
    if (limit == 0) throw std::invalid_argument("abstract word limit must be at least 1");
    auto words = split_words(text);
    if (words.size() <= limit) return std::string(text);
    std::string out;
    for (std::size_t i = 0; i < limit; ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

std::string_view to_string(DropReason reason) {
    switch (reason) {
        case DropReason::TooFewItems: return "TooFewItems";
        case DropReason::TooFewRefs: return "TooFewRefs";
    }
    return "Unknown";
}

FilterResult apply_filters(const ReviewRecord& record) {
    FilterResult result;
    if (record.catalogue.size() < kMinCatalogueItems) {
        result.dropped = DropReason::TooFewItems;
        return result;
    }
    ReviewRecord kept = record;
    kept.references.clear();
    for (const auto& ref : record.references) {
        if (ref.valid()) kept.references.push_back({ref.title, truncate_abstract(ref.abstract)});
    }
    if (kept.references.size() < kMinValidReferences) {
        result.dropped = DropReason::TooFewRefs;
        return result;
    }
    result.kept = std::move(kept);
    return result;
}

std::size_t count_sentences(std::string_view text) {
    std::size_t count = 0;
    bool open = false;  // saw content since the last terminator
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            const bool closes = i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
            if (closes && open) {
                ++count;
                open = false;
                continue;
            }
        }
        if (!std::isspace(static_cast<unsigned char>(c))) open = true;
    }
    return count + (open ? 1 : 0);
}

std::string_view split_of(std::string_view id) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    const auto bucket = h % 10;
    if (bucket < 8) return "train";
    return bucket == 8 ? "val" : "test";
}

// ------------------------------------------------------------------ stats

namespace {

Tokens input_tokens(const ReviewRecord& r) {
    Tokens out = tokenize(r.title);
    for (const auto& ref : r.references) {
        auto t = tokenize(truncate_abstract(ref.abstract));
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

RougeTriple rouge_triple(const Tokens& a, const Tokens& b, bool stem) {
    return {100.0 * rouge_n(a, b, 1, stem).f1, 100.0 * rouge_n(a, b, 2, stem).f1, 100.0 * rouge_l(a, b, stem).f1};
}

}  // namespace

LevelRougeMatrix level_rouge_matrix(const std::vector<ReviewRecord>& records, bool stem) {
    if (records.empty()) throw EmptyCorpus();
    LevelRougeMatrix m;
    for (const auto& r : records) {
        std::array<Tokens, 4> rows;
        for (int level = 1; level <= 3; ++level) {
            rows[static_cast<std::size_t>(level - 1)] = strip_level_marks(slice_level(r.catalogue, level));
        }
        rows[3] = strip_level_marks(r.catalogue);
        for (std::size_t row = 0; row < 4; ++row) {
            for (std::size_t col = 0; col < 3; ++col) {
                if (LevelRougeMatrix::is_diagonal(row, col)) continue;
                auto t = rouge_triple(rows[row], rows[col], stem);
                auto& cell = m.cells[row][col];
                cell.r1 += t.r1;
                cell.r2 += t.r2;
                cell.rl += t.rl;
            }
        }
    }
    const auto n = static_cast<double>(records.size());
    for (auto& row : m.cells) {
        for (auto& cell : row) {
            cell.r1 /= n;
            cell.r2 /= n;
            cell.rl /= n;
        }
    }
    return m;
}

CorpusStats corpus_stats(const std::vector<ReviewRecord>& records, const TemplateLexicon& lexicon, bool stem) {
    if (records.empty()) throw EmptyCorpus();
    CorpusStats s;
    s.pairs = records.size();
    std::array<double, 3> level_word_sums{};
    std::array<std::size_t, 3> level_word_records{};

    for (const auto& r : records) {
        s.refs_mean += static_cast<double>(r.references.size());

        std::size_t sentences = count_sentences(r.title);
        for (const auto& ref : r.references) sentences += count_sentences(truncate_abstract(ref.abstract));
        s.input_sentences_mean += static_cast<double>(sentences);

        auto source = input_tokens(r);
        auto target = strip_level_marks(r.catalogue);
        s.input_words_mean += static_cast<double>(source.size());
        s.output_sentences_mean += static_cast<double>(r.catalogue.size());
        s.output_words_mean += static_cast<double>(target.size());

        for (int level = 1; level <= 3; ++level) {
            const auto idx = static_cast<std::size_t>(level - 1);
            auto slice = slice_level(r.catalogue, level);
            s.level_items_mean[idx] += static_cast<double>(slice.size());
            if (!slice.empty()) {
                level_word_sums[idx] += static_cast<double>(strip_level_marks(slice).size()) /
                                        static_cast<double>(slice.size());
                ++level_word_records[idx];
            }
        }
        for (int n = 1; n <= 4; ++n) {
            s.novel_ngrams[static_cast<std::size_t>(n - 1)] += novel_ngram_ratio(source, target, n);
        }
        s.oracle_cqe_mean += cqe(r.catalogue, lexicon);
    }

    const auto n = static_cast<double>(records.size());
    s.refs_mean /= n;
    s.input_sentences_mean /= n;
    s.input_words_mean /= n;
    s.output_sentences_mean /= n;
    s.output_words_mean /= n;
    s.oracle_cqe_mean /= n;
    for (auto& v : s.level_items_mean) v /= n;
    for (auto& v : s.novel_ngrams) v /= n;
    for (std::size_t i = 0; i < 3; ++i) {
        s.level_words_mean[i] = level_word_records[i] ? level_word_sums[i] / static_cast<double>(level_word_records[i]) : 0.0;
    }
    s.level_rouge = level_rouge_matrix(records, stem);
    return s;
}

}  // namespace catscore
