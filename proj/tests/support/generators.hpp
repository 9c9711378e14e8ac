#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catscore/catalogue.hpp"
#include "catscore/ced.hpp"

namespace catscore::testing {

inline const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> words{
        "introduction", "conclusion", "neural", "machine", "translation", "domain", "adaptation", "data",
        "model",        "centric",    "survey", "related", "work",        "future", "directions", "corpora",
        "parallel",     "synthetic",  "method", "results"};
    return words;
}

inline std::string random_heading(std::mt19937_64& rng, int max_words = 4) {
    std::uniform_int_distribution<int> len(1, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
    std::string out;
    for (int i = len(rng); i > 0; --i) {
        if (!out.empty()) out += ' ';
        out += vocabulary()[pick(rng)];
    }
    return out;
}

/// Well-formed catalogue: starts at level 1, never jumps more than one level.
inline Catalogue random_catalogue(std::mt19937_64& rng, std::size_t max_items, int max_words = 4,
                                  std::size_t min_items = 0) {
    std::uniform_int_distribution<std::size_t> count(min_items, max_items);
    Catalogue c;
    int prev = 0;
    for (std::size_t i = count(rng); i > 0; --i) {
        std::uniform_int_distribution<int> level(1, std::min(prev + 1, kMaxLevel));
        prev = level(rng);
        c.items.push_back({prev, random_heading(rng, max_words)});
    }
    return c;
}

/// Random substitution table with a bias towards the boundary values 0 and 1.
inline CostMatrix random_costs(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> shape(0, 9);
    CostMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            int s = shape(rng);
            m.at(i, j) = s == 0 ? 0.0 : s == 1 ? 1.0 : unit(rng);
        }
    }
    return m;
}

inline Tokens random_tokens(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> sym(0, alphabet - 1);
    Tokens t;
    for (std::size_t i = len(rng); i > 0; --i) t.push_back(std::string(1, static_cast<char>('a' + sym(rng))));
    return t;
}

inline std::string data_path(const std::string& name) { return std::string(CATSCORE_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline CostMatrix load_matrix(const std::string& path, std::size_t rows, std::size_t cols) {
    std::istringstream in(slurp(path));
    CostMatrix m(rows, cols);
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        for (std::size_t j = 0; j < cols; ++j) fields >> m.at(i, j);
        ++i;
    }
    return m;
}

/// Checks that mapped pairs form a valid ordered tree mapping and that every
/// item of both catalogues appears in exactly one op. Returns an empty string
/// on success, otherwise a description of the first violation.
inline std::string check_trace(const AlignmentTrace& trace, const CatalogueTree& a, const CatalogueTree& b,
                               const CostMatrix& costs) {
    std::vector<int> seen_a(a.size(), 0), seen_b(b.size(), 0);
    std::vector<std::pair<int, int>> maps;
    double total = 0.0;
    for (const auto& op : trace.ops) {
        total += op.cost;
        switch (op.kind) {
            case EditOp::Kind::Map:
                if (op.a < 0 || op.b < 0) return "map with missing side";
                ++seen_a[static_cast<std::size_t>(op.a)];
                ++seen_b[static_cast<std::size_t>(op.b)];
                if (std::abs(op.cost - costs.at(static_cast<std::size_t>(op.a), static_cast<std::size_t>(op.b))) > 1e-12)
                    return "map cost differs from table";
                maps.emplace_back(op.a, op.b);
                break;
            case EditOp::Kind::Delete:
                if (op.a < 0 || op.b != -1 || op.cost != 1.0) return "bad delete";
                ++seen_a[static_cast<std::size_t>(op.a)];
                break;
            case EditOp::Kind::Insert:
                if (op.b < 0 || op.a != -1 || op.cost != 1.0) return "bad insert";
                ++seen_b[static_cast<std::size_t>(op.b)];
                break;
        }
    }
    for (int s : seen_a) {
        if (s != 1) return "system item covered " + std::to_string(s) + " times";
    }
    for (int s : seen_b) {
        if (s != 1) return "reference item covered " + std::to_string(s) + " times";
    }
    if (std::abs(total - trace.total) > 1e-9) return "trace total differs from op sum";
    for (const auto& [p, q] : maps) {
        for (const auto& [r, s] : maps) {
            if (p == r) continue;
            if ((p < r) != (q < s)) return "order violated";
            if (a.is_ancestor(p + 1, r + 1) != b.is_ancestor(q + 1, s + 1)) return "ancestry violated";
        }
    }
    return {};
}

}  // namespace catscore::testing
