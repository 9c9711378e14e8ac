#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "catscore/catalogue.hpp"
#include "catscore/errors.hpp"
#include "catscore/similarity.hpp"

namespace catscore {

/// Dense |a| x |b| table of substitution costs between catalogue items.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 1.0)
        : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& at(std::size_t i, std::size_t j) { return cells_.at(i * cols_ + j); }
    double at(std::size_t i, std::size_t j) const { return cells_.at(i * cols_ + j); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> cells_;
};

/// node_distance for every item pair. Calls provider.prepare() once with
/// all headings of both catalogues.
CostMatrix substitution_costs(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider,
                              const CostConfig& cfg);

struct EditOp {
    enum class Kind { Map, Delete, Insert };

    Kind kind = Kind::Map;
    int a = -1;  // item index in the first catalogue, -1 for Insert
    int b = -1;  // item index in the second catalogue, -1 for Delete
    double cost = 0.0;

    friend bool operator==(const EditOp&, const EditOp&) = default;
};

std::string_view to_string(EditOp::Kind kind);

/// Optimal edit script. Ops follow document order of both catalogues:
/// each mapped pair is preceded by the deletions and insertions that sit
/// before it in their respective catalogues.
struct AlignmentTrace {
    std::vector<EditOp> ops;
    double total = 0.0;

    std::size_t count(EditOp::Kind kind) const;
};

struct CedResult {
    double distance = 0.0;
    AlignmentTrace trace;
};

/// Ordered tree edit distance between two catalogue trees (virtual roots
/// always matched to each other at zero cost), with insert = delete = 1
/// and substitution taken from `costs` (rows index items of `a`).
/// Ties in the backtrace prefer Map, then Delete, then Insert.
CedResult catalogue_edit_distance(const CatalogueTree& a, const CatalogueTree& b, const CostMatrix& costs);

CedResult catalogue_edit_distance(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider,
                                  const CostConfig& cfg);

/// 100 * (1 - ced / max(|a|, |b|)); 100 when both are empty. Not clamped.
double ceds_from_distance(double ced, std::size_t size_a, std::size_t size_b);

double ceds(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider, const CostConfig& cfg);

class SizeLimit : public InputError {
public:
    explicit SizeLimit(std::size_t nodes)
        : InputError("SizeLimit", "brute force needs at most " + std::to_string(kLimit) + " nodes, got " +
                                      std::to_string(nodes)) {}

    static constexpr std::size_t kLimit = 10;
};

/// Exhaustive minimum over every ancestry- and order-preserving partial
/// matching. Exponential; throws SizeLimit above 10 combined items.
double brute_force_ced(const CatalogueTree& a, const CatalogueTree& b, const CostMatrix& costs);

double brute_force_ced(const Catalogue& a, const Catalogue& b, const SimilarityProvider& provider,
                       const CostConfig& cfg);

}  // namespace catscore
