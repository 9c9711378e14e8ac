#include "catscore/textmetrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "catscore/errors.hpp"
#include "catscore/porter.hpp"

namespace catscore {

namespace {

constexpr std::string_view kBuiltinLexicon = R"(# Template words for the Catalogue Quality Estimate.
introduction
preliminaries
preliminary
background
overview
definition(s)
methodology
method(s)
sources
purpose
related work
data
dataset(s)
outlook
eassy
essay
benefit(s)
advantage(s)
disadvantage(s)
challenge(s)
application(s)
future
summary
notation(s)
result(s)
discussion
analysis
observation(s)
conclusion(s)
references
)";

Tokens stemmed(const Tokens& tokens) {
    Tokens out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(porter_stem(t));
    return out;
}

std::string ngram_key(const Tokens& tokens, std::size_t pos, int n) {
    std::string key = tokens[pos];
    for (int k = 1; k < n; ++k) {
        key += '\x1f';
        key += tokens[pos + static_cast<std::size_t>(k)];
    }
    return key;
}

std::unordered_map<std::string, int> ngram_counts(const Tokens& tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (tokens.size() < static_cast<std::size_t>(n)) return counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) ++counts[ngram_key(tokens, i, n)];
    return counts;
}

std::size_t ngram_total(const Tokens& tokens, int n) {
    return tokens.size() < static_cast<std::size_t>(n) ? 0 : tokens.size() - static_cast<std::size_t>(n) + 1;
}

RougeScore from_counts(std::size_t overlap, std::size_t cand_total, std::size_t ref_total) {
    if (cand_total == 0 && ref_total == 0) return {1.0, 1.0, 1.0};
    if (cand_total == 0 || ref_total == 0) return {0.0, 0.0, 0.0};
    RougeScore s;
    s.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    s.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
    s.f1 = f_measure(s.precision, s.recall);
    return s;
}

}  // namespace

double f_measure(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, int n, bool stem) {
    if (n < 1) throw std::invalid_argument("rouge_n needs n >= 1");
    if (stem) return rouge_n(stemmed(candidate), stemmed(reference), n, false);
    auto cand = ngram_counts(candidate, n);
    auto ref = ngram_counts(reference, n);
    std::size_t overlap = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) overlap += static_cast<std::size_t>(std::min(count, it->second));
    }
    return from_counts(overlap, ngram_total(candidate, n), ngram_total(reference, n));
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge_l(const Tokens& candidate, const Tokens& reference, bool stem) {
    if (stem) return rouge_l(stemmed(candidate), stemmed(reference), false);
    return from_counts(lcs_length(candidate, reference), candidate.size(), reference.size());
}

// ---------------------------------------------------------------- lexicon

TemplateLexicon::TemplateLexicon(std::vector<Tokens> entries) : entries_(std::move(entries)) {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [](const Tokens& t) { return t.empty(); }),
                   entries_.end());
    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
    for (const auto& e : entries_) longest_ = std::max(longest_, e.size());
}

TemplateLexicon TemplateLexicon::builtin() {
    return parse(kBuiltinLexicon);
}

TemplateLexicon TemplateLexicon::parse(std::string_view text) {
    std::vector<Tokens> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (split_words(line).empty()) continue;
        auto lower = to_lower(line);
        if (auto pos = lower.find("(s)"); pos != std::string::npos) {
            std::string singular = lower, plural = lower;
            singular.erase(pos, 3);
            plural.replace(pos, 3, "s");
            entries.push_back(tokenize(singular));
            entries.push_back(tokenize(plural));
        } else {
            entries.push_back(tokenize(lower));
        }
    }
    return TemplateLexicon(std::move(entries));
}

TemplateLexicon TemplateLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("IoError", "cannot open lexicon " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string TemplateLexicon::to_text() const {
    std::string out;
    for (const auto& e : entries_) {
        out += join(e);
        out += '\n';
    }
    return out;
}

std::size_t TemplateLexicon::match_at(const Tokens& tokens, std::size_t pos) const {
    for (std::size_t len = std::min(longest_, tokens.size() - std::min(pos, tokens.size())); len > 0; --len) {
        Tokens probe(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                     tokens.begin() + static_cast<std::ptrdiff_t>(pos + len));
        if (std::binary_search(entries_.begin(), entries_.end(), probe)) return len;
    }
    return 0;
}

namespace {

std::size_t covered_tokens(const Tokens& tokens, const TemplateLexicon& lexicon) {
    std::size_t covered = 0;
    for (std::size_t pos = 0; pos < tokens.size();) {
        auto len = lexicon.match_at(tokens, pos);
        if (len == 0) {
            ++pos;
        } else {
            covered += len;
            pos += len;
        }
    }
    return covered;
}

}  // namespace

double cqe(const Catalogue& catalogue, const TemplateLexicon& lexicon, CqeMode mode) {
    if (mode == CqeMode::Items) {
        if (catalogue.empty()) return 0.0;
        std::size_t hits = 0;
        for (const auto& item : catalogue.items) {
            if (covered_tokens(item.tokens(), lexicon) > 0) ++hits;
        }
        return 100.0 * static_cast<double>(hits) / static_cast<double>(catalogue.size());
    }
    auto tokens = strip_level_marks(catalogue);
    if (tokens.empty()) return 0.0;
    return 100.0 * static_cast<double>(covered_tokens(tokens, lexicon)) / static_cast<double>(tokens.size());
}

double novel_ngram_ratio(const Tokens& source, const Tokens& target, int n) {
    if (n < 1) throw std::invalid_argument("novel_ngram_ratio needs n >= 1");
    if (target.size() < static_cast<std::size_t>(n)) return 0.0;
    std::unordered_set<std::string> source_grams;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= source.size(); ++i) {
        source_grams.insert(ngram_key(source, i, n));
    }
    std::unordered_set<std::string> target_grams;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= target.size(); ++i) {
        target_grams.insert(ngram_key(target, i, n));
    }
    std::size_t novel = 0;
    for (const auto& g : target_grams) novel += source_grams.count(g) == 0 ? 1 : 0;
    return 100.0 * static_cast<double>(novel) / static_cast<double>(target_grams.size());
}

}  // namespace catscore
