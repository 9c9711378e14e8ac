#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catscore/catalogue.hpp"
#include "catscore/errors.hpp"
#include "catscore/textmetrics.hpp"

namespace catscore {

struct Reference {
    std::string title;
    std::string abstract;

    /// Title and abstract both present.
    bool valid() const;
};

/// One survey: title, cited papers, and its ground-truth catalogue.
struct ReviewRecord {
    std::string id;
    std::string title;
    std::optional<std::string> domain;
    std::vector<Reference> references;
    Catalogue catalogue;
    std::vector<ValidationIssue> catalogue_issues;
};

/// A system catalogue to be scored against the record with the same id.
struct SystemOutput {
    std::string id;
    Catalogue catalogue;
    std::vector<ValidationIssue> catalogue_issues;
};

/// Corpus JSONL: {"id", "title", "domain"?, "references": [{"title",
/// "abstract"}], "catalogue": "<l1> ..."} per line. Text is lowercased.
/// Throws ParseError (with the line number) or DuplicateId.
std::vector<ReviewRecord> parse_corpus(std::istream& in);
std::vector<ReviewRecord> load_corpus(const std::filesystem::path& path);

/// System JSONL: {"id", "catalogue"} per line.
std::vector<SystemOutput> parse_system_outputs(std::istream& in);
std::vector<SystemOutput> load_system_outputs(const std::filesystem::path& path);

class DuplicateId : public InputError {
public:
    explicit DuplicateId(const std::string& id) : InputError("DuplicateId", "duplicate id '" + id + "'") {}
};

class EmptyCorpus : public InputError {
public:
    EmptyCorpus() : InputError("EmptyCorpus", "corpus has no records") {}
};

inline constexpr std::size_t kAbstractWordLimit = 256;

/// First `limit` whitespace-separated words, rejoined with single spaces.
/// Texts within the limit come back unchanged.
std::string truncate_abstract(std::string_view text, std::size_t limit = kAbstractWordLimit);

inline constexpr std::size_t kMinCatalogueItems = 5;
inline constexpr std::size_t kMinValidReferences = 10;

enum class DropReason { TooFewItems, TooFewRefs };

std::string_view to_string(DropReason reason);

/// Either the cleaned record (invalid references removed, abstracts
/// truncated) or the reason it was dropped.
struct FilterResult {
    std::optional<ReviewRecord> kept;
    std::optional<DropReason> dropped;

    bool keep() const noexcept { return kept.has_value(); }
};

FilterResult apply_filters(const ReviewRecord& record);

/// Sentence count with a terminator splitter: '.', '!' or '?' followed by
/// whitespace or end of text closes a sentence.
std::size_t count_sentences(std::string_view text);

/// Deterministic 80/10/10 split by FNV-1a hash of the id.
std::string_view split_of(std::string_view id);

/// R-1 / R-2 / R-L F1 (x100) of one cell.
struct RougeTriple {
    double r1 = 0.0;
    double r2 = 0.0;
    double rl = 0.0;
};

/// Rows L1, L2, L3, Total against columns L1, L2, L3. Diagonal cells of
/// the level block are not meaningful and are reported as "/".
struct LevelRougeMatrix {
    std::array<std::array<RougeTriple, 3>, 4> cells{};

    static bool is_diagonal(std::size_t row, std::size_t col) { return row == col; }
};

LevelRougeMatrix level_rouge_matrix(const std::vector<ReviewRecord>& records, bool stem = false);

struct CorpusStats {
    std::size_t pairs = 0;
    double refs_mean = 0.0;
    double input_sentences_mean = 0.0;
    double input_words_mean = 0.0;
    double output_sentences_mean = 0.0;  // catalogue items
    double output_words_mean = 0.0;
    std::array<double, 3> level_items_mean{};
    std::array<double, 3> level_words_mean{};  // words per item at that level
    std::array<double, 4> novel_ngrams{};      // n = 1..4, percent
    LevelRougeMatrix level_rouge;
    double oracle_cqe_mean = 0.0;
};

/// Unweighted per-record means. Input text is the survey title plus the
/// truncated reference abstracts. Throws EmptyCorpus.
CorpusStats corpus_stats(const std::vector<ReviewRecord>& records, const TemplateLexicon& lexicon,
                         bool stem = false);

}  // namespace catscore
