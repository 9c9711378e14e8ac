#include "catscore/catalogue.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace catscore {

namespace {

struct Mark {
    std::size_t begin = 0;  // position of '<'
    std::size_t end = 0;    // one past '>'
    long level = 0;
};

// Recognizes "<lN>" / "<LN>" starting at pos.
std::optional<Mark> mark_at(std::string_view line, std::size_t pos) {
    if (pos + 3 >= line.size() || line[pos] != '<' || (line[pos + 1] != 'l' && line[pos + 1] != 'L')) {
        return std::nullopt;
    }
    std::size_t i = pos + 2;
    long level = 0;
    std::size_t digits = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])) && digits < 6) {
        level = level * 10 + (line[i] - '0');
        ++i;
        ++digits;
    }
    if (digits == 0 || i >= line.size() || line[i] != '>') return std::nullopt;
    return Mark{pos, i + 1, level};
}

std::vector<Mark> find_marks(std::string_view line) {
    std::vector<Mark> marks;
    for (std::size_t pos = line.find('<'); pos != std::string_view::npos; pos = line.find('<', pos + 1)) {
        if (auto m = mark_at(line, pos)) {
            marks.push_back(*m);
            pos = m->end - 1;
        }
    }
    return marks;
}

std::string collapse(std::string_view text) {
    std::string out;
    for (auto word : split_words(text)) {
        if (!out.empty()) out += ' ';
        out += word;
    }
    return to_lower(out);
}

}  // namespace

std::string_view to_string(IssueKind kind) {
    switch (kind) {
        case IssueKind::LevelJump: return "LevelJump";
        case IssueKind::LeadingDeepLevel: return "LeadingDeepLevel";
        case IssueKind::EmptyHeading: return "EmptyHeading";
        case IssueKind::UnknownMark: return "UnknownMark";
    }
    return "Unknown";
}

std::string format_item(const CatalogueItem& item) {
    return "<l" + std::to_string(item.level) + "> " + item.text;
}

ParsedCatalogue parse_catalogue(std::string_view text) {
    ParsedCatalogue out;
    auto& items = out.catalogue.items;
    std::vector<ValidationIssue> dropped;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        ++line_no;
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (split_words(line).empty()) continue;

        auto marks = find_marks(line);
        std::size_t head_end = marks.empty() ? line.size() : marks.front().begin;
        if (!split_words(line.substr(0, head_end)).empty()) {
            dropped.push_back({items.size(), IssueKind::UnknownMark,
                               "text without a level mark: '" + collapse(line.substr(0, head_end)) + "'", line_no});
        }
        for (std::size_t m = 0; m < marks.size(); ++m) {
            std::size_t seg_end = m + 1 < marks.size() ? marks[m + 1].begin : line.size();
            auto heading = collapse(line.substr(marks[m].end, seg_end - marks[m].end));
            if (marks[m].level < 1 || marks[m].level > kMaxLevel) {
                dropped.push_back({items.size(), IssueKind::UnknownMark,
                                   "unsupported level mark <l" + std::to_string(marks[m].level) + ">", line_no});
                continue;
            }
            if (tokenize(heading).empty()) {
                dropped.push_back({items.size(), IssueKind::EmptyHeading, "empty heading", line_no});
                continue;
            }
            items.push_back({static_cast<int>(marks[m].level), std::move(heading)});
        }
    }

    out.issues = std::move(dropped);
    for (auto& issue : validate(out.catalogue)) out.issues.push_back(std::move(issue));
    std::stable_sort(out.issues.begin(), out.issues.end(),
                     [](const ValidationIssue& a, const ValidationIssue& b) { return a.index < b.index; });
    return out;
}

std::string serialize(const Catalogue& catalogue) {
    std::string out;
    for (std::size_t i = 0; i < catalogue.items.size(); ++i) {
        if (i) out += '\n';
        out += format_item(catalogue.items[i]);
    }
    return out;
}

std::vector<ValidationIssue> validate(const Catalogue& catalogue) {
    std::vector<ValidationIssue> issues;
    const auto& items = catalogue.items;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        if (item.level < 1 || item.level > kMaxLevel) {
            issues.push_back({i, IssueKind::UnknownMark, "level " + std::to_string(item.level) + " is out of range"});
        }
        if (tokenize(item.text).empty()) {
            issues.push_back({i, IssueKind::EmptyHeading, "empty heading"});
        }
        if (i == 0 && item.level > 1) {
            issues.push_back({i, IssueKind::LeadingDeepLevel,
                              "catalogue starts at level " + std::to_string(item.level)});
        } else if (i > 0 && item.level > items[i - 1].level + 1) {
            issues.push_back({i, IssueKind::LevelJump,
                              "level jumps from " + std::to_string(items[i - 1].level) + " to " +
                                  std::to_string(item.level)});
        }
    }
    return issues;
}

Tokens strip_level_marks(const Catalogue& catalogue) {
    Tokens out;
    for (const auto& item : catalogue.items) {
        auto toks = tokenize(item.text);
        out.insert(out.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
    }
    return out;
}

Catalogue slice_level(const Catalogue& catalogue, int level) {
    Catalogue out;
    for (const auto& item : catalogue.items) {
        if (item.level == level) out.items.push_back(item);
    }
    return out;
}

bool CatalogueTree::is_ancestor(int ancestor, int node) const {
    for (int p = nodes_.at(static_cast<std::size_t>(node)).parent; p >= 0; p = nodes_[static_cast<std::size_t>(p)].parent) {
        if (p == ancestor) return true;
    }
    return false;
}

CatalogueTree build_tree(const Catalogue& catalogue) {
    CatalogueTree tree;
    auto& nodes = tree.nodes_;
    nodes.reserve(catalogue.items.size() + 1);
    std::vector<int> open{CatalogueTree::kRoot};  // rightmost path, root first

    for (const auto& item : catalogue.items) {
        int wanted = std::clamp(item.level, 1, kMaxLevel);
        while (nodes[static_cast<std::size_t>(open.back())].depth >= wanted) open.pop_back();
        int parent = open.back();
        int id = static_cast<int>(nodes.size());
        nodes.push_back({parent, nodes[static_cast<std::size_t>(parent)].depth + 1, {}, item.text});
        nodes[static_cast<std::size_t>(parent)].children.push_back(id);
        open.push_back(id);
    }
    return tree;
}

}  // namespace catscore
