#include "catscore/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace catscore {

namespace {

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    // "-0.0000" and friends
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

void write(const Json& v, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {  // std::map: keys sorted
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(it.key()).dump() + ": ";
                write(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                write(v[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += fixed(v.get<double>(), 4);
            return;
        default:
            out += v.dump();
            return;
    }
}

Json rouge_json(const RougeTriple& t) {
    return Json{{"r1", t.r1}, {"r2", t.r2}, {"rl", t.rl}};
}

std::string item_cell(const Catalogue& c, int index) {
    if (index < 0) return "-";
    return format_item(c.items.at(static_cast<std::size_t>(index))) + " [" + std::to_string(index) + "]";
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

std::string rouge_cell(const RougeTriple& t) {
    return fixed(t.r1, 1) + "/" + fixed(t.r2, 1) + "/" + fixed(t.rl, 1);
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += " | ";
            line += c + 1 == row.size() ? row[c] : pad_right(row[c], widths[c]);
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace

std::string dump_stable(const Json& value) {
    std::string out;
    write(value, out, 0);
    out += '\n';
    return out;
}

Json to_json(const MetricReport& r) {
    return Json{
        {"id", r.id},
        {"ceds", r.ceds},
        {"ced", r.ced},
        {"cqe", r.cqe},
        {"similarity_total", r.similarity_total},
        {"item_count_system", r.item_count_system},
        {"item_count_reference", r.item_count_reference},
        {"rouge",
         {{"l1", rouge_json(r.rouge[kL1])},
          {"l2", rouge_json(r.rouge[kL2])},
          {"l3", rouge_json(r.rouge[kL3])},
          {"total", rouge_json(r.rouge[kTotal])}}},
    };
}

Json to_json(const CorpusReport& report) {
    Json pairs = Json::array();
    for (const auto& p : report.pairs) pairs.push_back(to_json(p));
    return Json{{"pairs", pairs}, {"aggregate", to_json(report.aggregate)}};
}

Json to_json(const CorrelationResult& result) {
    return Json{{"r", result.r}, {"p", result.p}, {"n", result.n}};
}

Json to_json(const CorpusStats& s) {
    static constexpr const char* kRows[] = {"l1", "l2", "l3", "total"};
    static constexpr const char* kCols[] = {"l1", "l2", "l3"};
    Json matrix = Json::object();
    for (std::size_t row = 0; row < 4; ++row) {
        Json cols = Json::object();
        for (std::size_t col = 0; col < 3; ++col) {
            cols[kCols[col]] = LevelRougeMatrix::is_diagonal(row, col) ? Json("/") : rouge_json(s.level_rouge.cells[row][col]);
        }
        matrix[kRows[row]] = cols;
    }
    Json novel = Json::object();
    for (int n = 1; n <= 4; ++n) novel[std::to_string(n)] = s.novel_ngrams[static_cast<std::size_t>(n - 1)];
    return Json{
        {"pairs", s.pairs},
        {"refs_mean", s.refs_mean},
        {"input_sentences_mean", s.input_sentences_mean},
        {"input_words_mean", s.input_words_mean},
        {"output_sentences_mean", s.output_sentences_mean},
        {"output_words_mean", s.output_words_mean},
        {"level_items_mean", {{"l1", s.level_items_mean[0]}, {"l2", s.level_items_mean[1]}, {"l3", s.level_items_mean[2]}}},
        {"level_words_mean", {{"l1", s.level_words_mean[0]}, {"l2", s.level_words_mean[1]}, {"l3", s.level_words_mean[2]}}},
        {"novel_ngrams", novel},
        {"level_rouge", matrix},
        {"oracle_cqe_mean", s.oracle_cqe_mean},
        {"sentence_counts", "splitter-dependent"},
    };
}

Json to_json(const std::vector<ValidationIssue>& issues) {
    Json out = Json::array();
    for (const auto& issue : issues) {
        Json j{{"index", issue.index}, {"kind", std::string(to_string(issue.kind))}, {"message", issue.message}};
        if (issue.line) j["line"] = issue.line;
        out.push_back(std::move(j));
    }
    return out;
}

Json trace_to_json(const AlignmentTrace& trace, const Catalogue& system, const Catalogue& reference, double ced,
                   double ceds) {
    Json ops = Json::array();
    for (const auto& op : trace.ops) {
        Json j{{"kind", std::string(to_string(op.kind))}, {"cost", op.cost}};
        j["system"] = op.a >= 0 ? Json(op.a) : Json(nullptr);
        j["reference"] = op.b >= 0 ? Json(op.b) : Json(nullptr);
        if (op.a >= 0) j["system_item"] = format_item(system.items.at(static_cast<std::size_t>(op.a)));
        if (op.b >= 0) j["reference_item"] = format_item(reference.items.at(static_cast<std::size_t>(op.b)));
        ops.push_back(std::move(j));
    }
    return Json{{"ops", ops}, {"ced", ced}, {"ceds", ceds}, {"total", trace.total}};
}

std::string format_trace_table(const AlignmentTrace& trace, const Catalogue& system, const Catalogue& reference) {
    std::vector<std::vector<std::string>> rows{{"Generated Result", "Ground Truth", "distance"}};
    for (const auto& op : trace.ops) {
        rows.push_back({item_cell(system, op.a), item_cell(reference, op.b), fixed(op.cost, 2)});
    }
    return render(rows);
}

std::string format_report_table(const std::vector<MetricReport>& reports) {
    std::vector<std::vector<std::string>> rows{{"id", "L1", "L2", "L3", "Total", "Similarity", "CEDS", "CQE"}};
    for (const auto& r : reports) {
        rows.push_back({r.id, rouge_cell(r.rouge[kL1]), rouge_cell(r.rouge[kL2]), rouge_cell(r.rouge[kL3]),
                        rouge_cell(r.rouge[kTotal]), fixed(r.similarity_total, 1), fixed(r.ceds, 1),
                        fixed(r.cqe, 1)});
    }
    return render(rows);
}

std::string format_stats_table(const CorpusStats& s) {
    std::ostringstream out;
    out << "pairs                 " << s.pairs << "\n"
        << "refs                  " << fixed(s.refs_mean, 1) << "\n"
        << "input sentences       " << fixed(s.input_sentences_mean, 1) << " (splitter-dependent)\n"
        << "input words           " << fixed(s.input_words_mean, 1) << "\n"
        << "output items          " << fixed(s.output_sentences_mean, 1) << "\n"
        << "output words          " << fixed(s.output_words_mean, 1) << "\n"
        << "items per level       " << fixed(s.level_items_mean[0], 2) << " / " << fixed(s.level_items_mean[1], 2)
        << " / " << fixed(s.level_items_mean[2], 2) << "\n"
        << "words per item        " << fixed(s.level_words_mean[0], 2) << " / " << fixed(s.level_words_mean[1], 2)
        << " / " << fixed(s.level_words_mean[2], 2) << "\n"
        << "novel n-grams (1..4)  " << fixed(s.novel_ngrams[0], 2) << " / " << fixed(s.novel_ngrams[1], 2) << " / "
        << fixed(s.novel_ngrams[2], 2) << " / " << fixed(s.novel_ngrams[3], 2) << "\n"
        << "oracle CQE            " << fixed(s.oracle_cqe_mean, 1) << "\n\n";

    static constexpr const char* kNames[] = {"L1", "L2", "L3", "Total"};
    std::vector<std::vector<std::string>> rows{{"", "L1", "L2", "L3"}};
    for (std::size_t row = 0; row < 4; ++row) {
        std::vector<std::string> cells{kNames[row]};
        for (std::size_t col = 0; col < 3; ++col) {
            cells.push_back(LevelRougeMatrix::is_diagonal(row, col) ? "/" : rouge_cell(s.level_rouge.cells[row][col]));
        }
        rows.push_back(std::move(cells));
    }
    out << render(rows);
    return out.str();
}

}  // namespace catscore
