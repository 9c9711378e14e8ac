#pragma once

#include <string>
#include <vector>

#include "catscore/analysis.hpp"
#include "catscore/ced.hpp"
#include "catscore/corpus.hpp"
#include "json.hpp"

namespace catscore {

using Json = nlohmann::json;

/// Pretty JSON with sorted keys and every float printed with exactly four
/// decimals, so equal inputs give byte-identical output.
std::string dump_stable(const Json& value);

Json to_json(const MetricReport& report);
Json to_json(const CorpusReport& report);
Json to_json(const CorrelationResult& result);
Json to_json(const CorpusStats& stats);
Json to_json(const std::vector<ValidationIssue>& issues);

/// {"ops": [...], "ced": x, "ceds": y} with item text alongside indices.
Json trace_to_json(const AlignmentTrace& trace, const Catalogue& system, const Catalogue& reference, double ced,
                   double ceds);

/// Three columns: generated item, ground-truth item, distance. Unmatched
/// items pair with "-".
std::string format_trace_table(const AlignmentTrace& trace, const Catalogue& system, const Catalogue& reference);

/// One row per report in the column order L1, L2, L3, Total (R-1/R-2/R-L),
/// similarity, CEDS, CQE.
std::string format_report_table(const std::vector<MetricReport>& rows);

std::string format_stats_table(const CorpusStats& stats);

}  // namespace catscore
