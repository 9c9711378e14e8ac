#include "catscore/ced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace catscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-9;

bool near(double a, double b) {
    return a == b || std::fabs(a - b) <= kTieTolerance * std::max(1.0, std::fabs(a));
}

// Postorder view of a CatalogueTree, 1-based as in the classic
// keyroot formulation. Index n is the virtual root.
struct PostorderTree {
    int n = 0;
    std::vector<int> lml;      // leftmost leaf descendant, postorder index
    std::vector<int> item;     // catalogue item index, -1 for the root
    std::vector<int> keyroots; // ascending

    explicit PostorderTree(const CatalogueTree& tree) {
        const auto& nodes = tree.nodes();
        n = static_cast<int>(nodes.size());
        lml.assign(static_cast<std::size_t>(n) + 1, 0);
        item.assign(static_cast<std::size_t>(n) + 1, -1);

        // iterative postorder over preorder ids
        std::vector<int> post_of(nodes.size(), 0);
        std::vector<std::pair<int, std::size_t>> stack{{CatalogueTree::kRoot, 0}};
        int counter = 0;
        while (!stack.empty()) {
            auto& [node, next_child] = stack.back();
            const auto& children = nodes[static_cast<std::size_t>(node)].children;
            if (next_child < children.size()) {
                int child = children[next_child++];
                stack.emplace_back(child, 0);
                continue;
            }
            int k = ++counter;
            post_of[static_cast<std::size_t>(node)] = k;
            item[static_cast<std::size_t>(k)] = node - 1;
            lml[static_cast<std::size_t>(k)] =
                children.empty() ? k : lml[static_cast<std::size_t>(post_of[static_cast<std::size_t>(children.front())])];
            stack.pop_back();
        }

        std::vector<int> highest(static_cast<std::size_t>(n) + 1, 0);
        for (int k = 1; k <= n; ++k) highest[static_cast<std::size_t>(lml[static_cast<std::size_t>(k)])] = k;
        for (int k = 1; k <= n; ++k) {
            if (highest[static_cast<std::size_t>(lml[static_cast<std::size_t>(k)])] == k) keyroots.push_back(k);
        }
    }

    int l(int k) const { return lml[static_cast<std::size_t>(k)]; }
    bool is_root(int k) const { return k == n; }
};

class TreeEditDistance {
public:
    TreeEditDistance(const CatalogueTree& a, const CatalogueTree& b, const CostMatrix& costs)
        : a_(a), b_(b), costs_(costs), width_(static_cast<std::size_t>(b_.n) + 1) {
        fd_.assign((static_cast<std::size_t>(a_.n) + 1) * width_, 0.0);
        td_.assign(fd_.size(), 0.0);
        for (int i : a_.keyroots) {
            for (int j : b_.keyroots) forest_distance(i, j);
        }
    }

    double distance() const { return td(a_.n, b_.n); }

    AlignmentTrace trace() {
        std::vector<std::pair<int, int>> maps;  // item indices
        std::vector<bool> a_mapped(static_cast<std::size_t>(a_.n), false);
        std::vector<bool> b_mapped(static_cast<std::size_t>(b_.n), false);

        std::vector<std::pair<int, int>> pending{{a_.n, b_.n}};
        while (!pending.empty()) {
            auto [i, j] = pending.back();
            pending.pop_back();
            forest_distance(i, j);
            const int li = a_.l(i), lj = b_.l(j);
            int x = i, y = j;
            while (x >= li || y >= lj) {
                if (x >= li && y >= lj) {
                    const double cur = fd(x, y);
                    if (a_.l(x) == li && b_.l(y) == lj) {
                        if (near(cur, fd(x - 1, y - 1) + rename(x, y))) {
                            if (!a_.is_root(x)) {
                                maps.emplace_back(a_.item[static_cast<std::size_t>(x)], b_.item[static_cast<std::size_t>(y)]);
                            }
                            --x;
                            --y;
                            continue;
                        }
                    } else if (near(cur, fd(a_.l(x) - 1, b_.l(y) - 1) + td(x, y))) {
                        pending.emplace_back(x, y);
                        x = a_.l(x) - 1;
                        y = b_.l(y) - 1;
                        continue;
                    }
                    if (near(cur, fd(x - 1, y) + remove(x))) {
                        --x;
                    } else {
                        --y;
                    }
                } else if (x >= li) {
                    --x;
                } else {
                    --y;
                }
            }
        }

        std::sort(maps.begin(), maps.end());
        for (auto [ia, ib] : maps) {
            a_mapped[static_cast<std::size_t>(ia)] = true;
            b_mapped[static_cast<std::size_t>(ib)] = true;
        }

        AlignmentTrace out;
        const int size_a = a_.n - 1, size_b = b_.n - 1;
        int ia = 0, ib = 0;
        auto flush = [&](int until_a, int until_b) {
            for (; ia < until_a; ++ia) {
                if (!a_mapped[static_cast<std::size_t>(ia)]) out.ops.push_back({EditOp::Kind::Delete, ia, -1, CostConfig::delete_cost});
            }
            for (; ib < until_b; ++ib) {
                if (!b_mapped[static_cast<std::size_t>(ib)]) out.ops.push_back({EditOp::Kind::Insert, -1, ib, CostConfig::insert_cost});
            }
        };
        for (auto [pa, pb] : maps) {
            flush(pa, pb);
            out.ops.push_back({EditOp::Kind::Map, pa, pb, costs_.at(static_cast<std::size_t>(pa), static_cast<std::size_t>(pb))});
            ia = pa + 1;
            ib = pb + 1;
        }
        flush(size_a, size_b);
        for (const auto& op : out.ops) out.total += op.cost;
        return out;
    }

private:
    double& fd(int x, int y) { return fd_[static_cast<std::size_t>(x) * width_ + static_cast<std::size_t>(y)]; }
    double& td(int x, int y) { return td_[static_cast<std::size_t>(x) * width_ + static_cast<std::size_t>(y)]; }
    double td(int x, int y) const { return td_[static_cast<std::size_t>(x) * width_ + static_cast<std::size_t>(y)]; }

    double remove(int x) const { return a_.is_root(x) ? kInf : CostConfig::delete_cost; }
    double insert(int y) const { return b_.is_root(y) ? kInf : CostConfig::insert_cost; }
    double rename(int x, int y) const {
        const bool ra = a_.is_root(x), rb = b_.is_root(y);
        if (ra || rb) return ra && rb ? 0.0 : kInf;
        return costs_.at(static_cast<std::size_t>(a_.item[static_cast<std::size_t>(x)]),
                         static_cast<std::size_t>(b_.item[static_cast<std::size_t>(y)]));
    }

    // Forest distances between prefixes of the subtrees rooted at i and j.
    // Row li-1 / column lj-1 hold the empty forest.
    void forest_distance(int i, int j) {
        const int li = a_.l(i), lj = b_.l(j);
        fd(li - 1, lj - 1) = 0.0;
        for (int x = li; x <= i; ++x) fd(x, lj - 1) = fd(x - 1, lj - 1) + remove(x);
        for (int y = lj; y <= j; ++y) fd(li - 1, y) = fd(li - 1, y - 1) + insert(y);
        for (int x = li; x <= i; ++x) {
            for (int y = lj; y <= j; ++y) {
                const double del = fd(x - 1, y) + remove(x);
                const double ins = fd(x, y - 1) + insert(y);
                if (a_.l(x) == li && b_.l(y) == lj) {
                    const double best = std::min({fd(x - 1, y - 1) + rename(x, y), del, ins});
                    fd(x, y) = best;
                    td(x, y) = best;
                } else {
                    fd(x, y) = std::min({fd(a_.l(x) - 1, b_.l(y) - 1) + td(x, y), del, ins});
                }
            }
        }
    }

    PostorderTree a_;
    PostorderTree b_;
    const CostMatrix& costs_;
    std::size_t width_;
    std::vector<double> fd_;
    std::vector<double> td_;
};

void check_shape(const CatalogueTree& a, const CatalogueTree& b, const CostMatrix& costs) {
    if (costs.rows() != a.size() || costs.cols() != b.size()) {
        throw std::invalid_argument("cost matrix is " + std::to_string(costs.rows()) + "x" +
                                    std::to_string(costs.cols()) + ", trees have " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()) + " items");
    }
}

}  // namespace

std::string_view to_string(EditOp::Kind kind) {
    switch (kind) {
        case EditOp::Kind::Map: return "map";
        case EditOp::Kind::Delete: return "delete";
        case EditOp::Kind::Insert: return "insert";
    }
    return "unknown";
}

std::size_t AlignmentTrace::count(EditOp::Kind kind) const {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [kind](const EditOp& op) { return op.kind == kind; }));
}

CostMatrix substitution_costs(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider,
                              const CostConfig& cfg) {
    cfg.check();
    std::vector<std::string> texts;
    texts.reserve(a.size() + b.size());
    for (const auto& it : a.items) texts.push_back(it.text);
    for (const auto& it : b.items) texts.push_back(it.text);
    provider.prepare(texts);

    CostMatrix costs(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            costs.at(i, j) = node_distance(a.items[i].text, b.items[j].text, provider, cfg);
        }
    }
    return costs;
}

CedResult catalogue_edit_distance(const CatalogueTree& a, const CatalogueTree& b, const CostMatrix& costs) {
    check_shape(a, b, costs);
    TreeEditDistance ted(a, b, costs);
    CedResult result;
    result.distance = ted.distance();
    result.trace = ted.trace();
    return result;
}

CedResult catalogue_edit_distance(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider,
                                  const CostConfig& cfg) {
    return catalogue_edit_distance(build_tree(a), build_tree(b), substitution_costs(a, b, provider, cfg));
}

double ceds_from_distance(double ced, std::size_t size_a, std::size_t size_b) {
    const auto denom = std::max(size_a, size_b);
    if (denom == 0) return 100.0;
    return 100.0 * (1.0 - ced / static_cast<double>(denom));
}

double ceds(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider, const CostConfig& cfg) {
    auto result = catalogue_edit_distance(a, b, provider, cfg);
    return ceds_from_distance(result.distance, a.size(), b.size());
}

// ------------------------------------------------------------ brute force

namespace {

struct BruteForce {
    const CatalogueTree& a;
    const CatalogueTree& b;
    const CostMatrix& costs;
    std::vector<int> assigned;  // b item per a item, -1 when unmatched
    double best = kInf;

    void search(std::size_t i, double map_cost, std::size_t matched) {
        const std::size_t na = a.size(), nb = b.size();
        if (i == na) {
            const double total = map_cost + static_cast<double>(na - matched) * CostConfig::delete_cost +
                                 static_cast<double>(nb - matched) * CostConfig::insert_cost;
            best = std::min(best, total);
            return;
        }
        assigned[i] = -1;
        search(i + 1, map_cost, matched);
        for (std::size_t j = 0; j < nb; ++j) {
            if (!compatible(i, j)) continue;
            assigned[i] = static_cast<int>(j);
            search(i + 1, map_cost + costs.at(i, j), matched + 1);
        }
        assigned[i] = -1;
    }

    // (i, j) against every earlier pair: preorder must agree, and so must
    // ancestry. Node id = item + 1.
    bool compatible(std::size_t i, std::size_t j) const {
        for (std::size_t p = 0; p < i; ++p) {
            const int q = assigned[p];
            if (q < 0) continue;
            if (static_cast<std::size_t>(q) >= j) return false;
            const bool anc_a = a.is_ancestor(static_cast<int>(p) + 1, static_cast<int>(i) + 1);
            const bool anc_b = b.is_ancestor(q + 1, static_cast<int>(j) + 1);
            if (anc_a != anc_b) return false;
        }
        return true;
    }
};

}  // namespace

double brute_force_ced(const CatalogueTree& a, const CatalogueTree& b, const CostMatrix& costs) {
    check_shape(a, b, costs);
    if (a.size() + b.size() > SizeLimit::kLimit) throw SizeLimit(a.size() + b.size());
    BruteForce search{a, b, costs, std::vector<int>(a.size(), -1)};
    search.search(0, 0.0, 0);
    return search.best;
}

double brute_force_ced(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider,
                       const CostConfig& cfg) {
    return brute_force_ced(build_tree(a), build_tree(b), substitution_costs(a, b, provider, cfg));
}

}  // namespace catscore
