#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "catscore/catalogue.hpp"
#include "catscore/text.hpp"

namespace catscore {

/// Precision, recall and F1, each in [0, 1].
struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Harmonic mean, 0 when both inputs are 0.
double f_measure(double precision, double recall);

/// Clipped n-gram overlap. Both sides empty scores 1, one side empty 0.
/// With `stem`, Porter stemming is applied to both sides first.
RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, int n, bool stem = false);

/// Longest-common-subsequence ROUGE over the flat token sequences.
RougeScore rouge_l(const Tokens& candidate, const Tokens& reference, bool stem = false);

/// Length of the longest common subsequence, O(|a| * |b|) time, O(|b|) space.
std::size_t lcs_length(const Tokens& a, const Tokens& b);

/// Generic heading vocabulary (introduction, conclusion, related work, ...).
class TemplateLexicon {
public:
    /// Built-in lexicon: singular and plural for every "(s)" entry, plus
    /// "essay" next to the misspelt "eassy" which is kept as is.
    static TemplateLexicon builtin();

    /// One entry per line, `#` starts a comment, "word(s)" expands to both
    /// forms. Entries are normalized with the shared tokenizer; duplicates
    /// are collapsed.
    static TemplateLexicon parse(std::string_view text);
    static TemplateLexicon load(const std::filesystem::path& path);

    explicit TemplateLexicon(std::vector<Tokens> entries = {});

    /// One entry per line, in file syntax.
    std::string to_text() const;

    const std::vector<Tokens>& entries() const noexcept { return entries_; }
    std::size_t longest() const noexcept { return longest_; }

    /// Length of the longest entry matching `tokens` at `pos`, or 0.
    std::size_t match_at(const Tokens& tokens, std::size_t pos) const;

    friend bool operator==(const TemplateLexicon& a, const TemplateLexicon& b) { return a.entries_ == b.entries_; }

private:
    std::vector<Tokens> entries_;  // sorted, unique
    std::size_t longest_ = 0;
};

enum class CqeMode {
    Tokens,  // share of tokens covered by template matches
    Items,   // share of items containing at least one template match
};

/// Catalogue Quality Estimate: percentage of template material. Matching
/// runs greedily longest-first, left to right, without overlap, over the
/// flattened token stream. Empty catalogue scores 0.
double cqe(const Catalogue& catalogue, const TemplateLexicon& lexicon, CqeMode mode = CqeMode::Tokens);

/// Percentage of distinct target n-grams that never occur in the source.
/// A target shorter than n scores 0.
double novel_ngram_ratio(const Tokens& source, const Tokens& target, int n);

}  // namespace catscore
