#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "catscore/text.hpp"

namespace catscore {

inline constexpr int kMaxLevel = 3;

/// One heading of a catalogue: its level mark (1..3) and lowercase text.
struct CatalogueItem {
    int level = 1;
    std::string text;

    Tokens tokens() const { return tokenize(text); }

    friend bool operator==(const CatalogueItem&, const CatalogueItem&) = default;
};

/// A literature-review catalogue in document order.
struct Catalogue {
    std::vector<CatalogueItem> items;

    std::size_t size() const noexcept { return items.size(); }
    bool empty() const noexcept { return items.empty(); }

    friend bool operator==(const Catalogue&, const Catalogue&) = default;
};

enum class IssueKind { LevelJump, LeadingDeepLevel, EmptyHeading, UnknownMark };

std::string_view to_string(IssueKind kind);

/// A non-fatal problem found while parsing or validating. `index` is the
/// item position the issue refers to (for dropped input, the position the
/// item would have taken); `line` is the 1-based source line, or 0 when
/// the issue did not come from parsing.
struct ValidationIssue {
    std::size_t index = 0;
    IssueKind kind = IssueKind::LevelJump;
    std::string message;
    std::size_t line = 0;
};

struct ParsedCatalogue {
    Catalogue catalogue;
    std::vector<ValidationIssue> issues;
};

/// Parses level-marked text, one `<lK> heading` per line. Marks are
/// case-insensitive; several marks on one line start several items.
/// Headings are lowercased and whitespace-collapsed. Lines with marks
/// deeper than level 3, without any mark, or with no heading text are
/// dropped and reported. Structural issues from validate() are appended.
ParsedCatalogue parse_catalogue(std::string_view text);

/// Inverse of parse_catalogue for issue-free catalogues.
std::string serialize(const Catalogue& catalogue);

std::vector<ValidationIssue> validate(const Catalogue& catalogue);

/// Heading tokens of every item concatenated in order, marks removed.
Tokens strip_level_marks(const Catalogue& catalogue);

/// Items of exactly `level`, order preserved.
Catalogue slice_level(const Catalogue& catalogue, int level);

/// Ordered labeled tree over a catalogue. Node 0 is a virtual root; node
/// i + 1 is item i, so node ids are a preorder numbering.
class CatalogueTree {
public:
    struct Node {
        int parent = -1;
        int depth = 0;
        std::vector<int> children;
        std::string label;
    };

    static constexpr int kRoot = 0;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }

    /// Number of non-root nodes.
    std::size_t size() const noexcept { return nodes_.size() - 1; }

    /// Effective level of item i after level-jump repair.
    int level_of_item(std::size_t item) const { return nodes_.at(item + 1).depth; }

    bool is_ancestor(int ancestor, int node) const;

    friend CatalogueTree build_tree(const Catalogue& catalogue);

private:
    std::vector<Node> nodes_{Node{}};
};

/// Each item becomes a child of the nearest preceding node that is
/// shallower than its level. An item whose level jumps past its parent is
/// placed at parent depth + 1 (validate() reports the jump).
CatalogueTree build_tree(const Catalogue& catalogue);

/// Renders an item the way it appears in a catalogue file.
std::string format_item(const CatalogueItem& item);

}  // namespace catscore
