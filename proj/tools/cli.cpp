#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "catscore/analysis.hpp"
#include "catscore/catalogue.hpp"
#include "catscore/ced.hpp"
#include "catscore/corpus.hpp"
#include "catscore/embedding.hpp"
#include "catscore/errors.hpp"
#include "catscore/report.hpp"
#include "catscore/similarity.hpp"
#include "catscore/textmetrics.hpp"

namespace catscore::cli {

namespace {

struct RunConfig {
    double alpha = 1.2;
    std::string sim = "lexical";
    std::string embeddings;
    std::string embed_url;
    int max_in_flight = 4;
    bool stem = false;
    unsigned jobs = 1;
    std::string format;
    std::string lexicon;
    std::string cqe_mode = "tokens";
    std::string cost_table;

    void validate() const {
        if (!std::isfinite(alpha) || alpha <= 0.0) throw InputError("BadConfig", "--alpha must be positive");
        if (jobs == 0) throw InputError("BadConfig", "--jobs must be at least 1");
        if (max_in_flight < 1) throw InputError("BadConfig", "--max-in-flight must be at least 1");
        if (sim != "lexical" && sim != "cosine" && sim != "greedy") {
            throw InputError("BadConfig", "--sim must be lexical, cosine or greedy");
        }
        if (sim != "lexical" && embeddings.empty() && embed_url.empty()) {
            throw InputError("BadConfig", "--sim " + sim + " needs --embeddings or --embed-url");
        }
        if (!embeddings.empty() && !embed_url.empty()) {
            throw InputError("BadConfig", "--embeddings and --embed-url are mutually exclusive");
        }
        if (cqe_mode != "tokens" && cqe_mode != "items") throw InputError("BadConfig", "--cqe-mode must be tokens or items");
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("IoError", "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw InputError("IoError", "cannot read " + path);
    return buf.str();
}

bool looks_like_jsonl(std::string_view content) {
    auto pos = content.find_first_not_of(" \t\r\n");
    return pos != std::string_view::npos && content[pos] == '{';
}

std::unique_ptr<SimilarityProvider> make_provider(const RunConfig& cfg) {
    if (cfg.sim == "lexical") return std::make_unique<LexicalProvider>();

    std::shared_ptr<EmbeddingFile> file;
    std::shared_ptr<EmbeddingService> service;
    if (!cfg.embeddings.empty()) {
        file = std::make_shared<EmbeddingFile>(EmbeddingFile::load(cfg.embeddings));
    } else {
        ServiceOptions opts;
        opts.url = cfg.embed_url;
        opts.max_in_flight = cfg.max_in_flight;
        service = std::make_shared<EmbeddingService>(opts);
    }
    if (cfg.sim == "cosine") {
        std::shared_ptr<const EmbeddingSource> src = file ? std::shared_ptr<const EmbeddingSource>(file) : service;
        return std::make_unique<CosineItemProvider>(src);
    }
    std::shared_ptr<const TokenEmbeddingSource> src =
        file ? std::shared_ptr<const TokenEmbeddingSource>(file) : service;
    return std::make_unique<GreedyTokenMatchProvider>(src);
}

ScoringContext make_context(const RunConfig& cfg, const SimilarityProvider& provider) {
    ScoringContext ctx;
    ctx.provider = &provider;
    ctx.cost.alpha = cfg.alpha;
    ctx.stem = cfg.stem;
    ctx.cqe_mode = cfg.cqe_mode == "items" ? CqeMode::Items : CqeMode::Tokens;
    if (!cfg.lexicon.empty()) ctx.lexicon = TemplateLexicon::load(cfg.lexicon);
    return ctx;
}

/// Rows are system items, columns reference items; commas or whitespace
/// separate values, '#' starts a comment.
CostMatrix load_cost_table(const std::string& path, std::size_t rows, std::size_t cols) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<double>> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& c : line) {
            if (c == ',') c = ' ';
        }
        std::istringstream fields(line);
        std::vector<double> row;
        std::string field;
        while (fields >> field) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(field, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != field.size() || !std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw ParseError("cost '" + field + "' is not a number in [0, 1]", line_no);
            }
            row.push_back(v);
        }
        if (!row.empty()) values.push_back(std::move(row));
    }
    if (values.size() != rows) {
        throw InputError("CostTableShape", "cost table has " + std::to_string(values.size()) + " rows, system has " +
                                               std::to_string(rows) + " items");
    }
    CostMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (values[i].size() != cols) {
            throw InputError("CostTableShape", "cost table row " + std::to_string(i) + " has " +
                                                   std::to_string(values[i].size()) + " values, reference has " +
                                                   std::to_string(cols) + " items");
        }
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = values[i][j];
    }
    return m;
}

struct Pair {
    std::string id;
    Catalogue system;
    Catalogue reference;
};

struct Inputs {
    bool corpus_mode = false;
    std::vector<SystemOutput> systems;
    std::vector<ReviewRecord> references;
    std::optional<Pair> pair;
};

Inputs load_inputs(const std::string& system_path, const std::string& reference_path) {
    auto system_text = read_file(system_path);
    auto reference_text = read_file(reference_path);
    const bool sys_jsonl = looks_like_jsonl(system_text);
    const bool ref_jsonl = looks_like_jsonl(reference_text);
    Inputs in;
    if (sys_jsonl != ref_jsonl) {
        throw InputError("FormatMismatch", "--system and --reference must both be catalogues or both be JSONL");
    }
    if (sys_jsonl) {
        in.corpus_mode = true;
        std::istringstream s(system_text), r(reference_text);
        in.systems = parse_system_outputs(s);
        in.references = parse_corpus(r);
    } else {
        in.pair = Pair{"pair", parse_catalogue(system_text).catalogue, parse_catalogue(reference_text).catalogue};
    }
    return in;
}

Pair select_pair(Inputs& in, const std::string& id) {
    if (in.pair) return *in.pair;
    if (id.empty()) throw InputError("MissingId", "JSONL inputs need --id to select one pair");
    Pair p;
    p.id = id;
    bool found_sys = false, found_ref = false;
    for (const auto& s : in.systems) {
        if (s.id == id) {
            p.system = s.catalogue;
            found_sys = true;
        }
    }
    for (const auto& r : in.references) {
        if (r.id == id) {
            p.reference = r.catalogue;
            found_ref = true;
        }
    }
    if (!found_sys || !found_ref) throw MissingId({id});
    return p;
}

void add_scoring_options(CLI::App* cmd, RunConfig& cfg, std::string& system, std::string& reference) {
    cmd->add_option("--system", system, "System catalogue (text) or system outputs (JSONL)")
        ->required()
        ->envname("CATSCORE_SYSTEM");
    cmd->add_option("--reference", reference, "Reference catalogue (text) or corpus (JSONL)")
        ->required()
        ->envname("CATSCORE_REFERENCE");
    cmd->add_option("--alpha", cfg.alpha, "Substitution cost scale")->envname("CATSCORE_ALPHA");
    cmd->add_option("--sim", cfg.sim, "Similarity backend: lexical, cosine, greedy")->envname("CATSCORE_SIM");
    cmd->add_option("--embeddings", cfg.embeddings, "Embedding JSONL file")->envname("CATSCORE_EMBEDDINGS");
    cmd->add_option("--embed-url", cfg.embed_url, "Embedding service base URL")->envname("CATSCORE_EMBED_URL");
    cmd->add_option("--max-in-flight", cfg.max_in_flight, "Concurrent embedding requests")
        ->envname("CATSCORE_MAX_IN_FLIGHT");
    cmd->add_flag("--stem", cfg.stem, "Porter-stem tokens before ROUGE")->envname("CATSCORE_STEM");
    cmd->add_option("--jobs", cfg.jobs, "Worker threads for corpus scoring")->envname("CATSCORE_JOBS");
    cmd->add_option("--lexicon", cfg.lexicon, "Template lexicon file")->envname("CATSCORE_LEXICON");
    cmd->add_option("--cqe-mode", cfg.cqe_mode, "CQE denominator: tokens or items")->envname("CATSCORE_CQE_MODE");
    cmd->add_option("--cost-table", cfg.cost_table)->envname("CATSCORE_COST_TABLE")->group("");
}

int cmd_validate(const std::string& path, const std::string& format, std::ostream& out) {
    auto content = read_file(path);
    Json report = Json::object();
    std::size_t issue_count = 0;
    std::ostringstream text;

    auto emit = [&](const std::string& prefix, const std::vector<ValidationIssue>& issues) {
        issue_count += issues.size();
        for (const auto& issue : issues) {
            text << prefix << to_string(issue.kind) << "@" << issue.index;
            if (issue.line) text << " (line " << issue.line << ")";
            text << ": " << issue.message << "\n";
        }
    };

    if (looks_like_jsonl(content)) {
        std::istringstream probe(content);
        std::string first;
        while (std::getline(probe, first) && split_words(first).empty()) {
        }
        bool is_corpus = false;
        try {
            auto j = Json::parse(first);
            is_corpus = j.is_object() && (j.contains("references") || j.contains("title"));
        } catch (const Json::exception& e) {
            throw ParseError(e.what(), 1);
        }
        std::istringstream in(content);
        Json records = Json::array();
        if (is_corpus) {
            for (const auto& r : parse_corpus(in)) {
                emit(r.id + ": ", r.catalogue_issues);
                records.push_back(Json{{"id", r.id}, {"items", r.catalogue.size()}, {"issues", to_json(r.catalogue_issues)}});
            }
        } else {
            for (const auto& s : parse_system_outputs(in)) {
                emit(s.id + ": ", s.catalogue_issues);
                records.push_back(Json{{"id", s.id}, {"items", s.catalogue.size()}, {"issues", to_json(s.catalogue_issues)}});
            }
        }
        report["records"] = records;
    } else {
        auto parsed = parse_catalogue(content);
        emit("", parsed.issues);
        report["items"] = parsed.catalogue.size();
        report["issues"] = to_json(parsed.issues);
    }
    report["issue_count"] = issue_count;

    if (format == "json") {
        out << dump_stable(report);
    } else {
        out << text.str();
        out << (issue_count == 0 ? "ok" : std::to_string(issue_count) + " issue(s)") << "\n";
    }
    return issue_count == 0 ? kOk : kWarnings;
}

int cmd_score(const RunConfig& cfg, const std::string& system_path, const std::string& reference_path,
              std::ostream& out) {
    cfg.validate();
    auto inputs = load_inputs(system_path, reference_path);
    auto provider = make_provider(cfg);
    auto ctx = make_context(cfg, *provider);

    CorpusReport report;
    if (inputs.corpus_mode) {
        if (!cfg.cost_table.empty()) throw InputError("BadConfig", "--cost-table needs a single catalogue pair");
        report = score_corpus(inputs.systems, inputs.references, ctx, cfg.jobs);
    } else {
        const auto& p = *inputs.pair;
        std::optional<CostMatrix> costs;
        if (!cfg.cost_table.empty()) costs = load_cost_table(cfg.cost_table, p.system.size(), p.reference.size());
        report.pairs.push_back(score_pair(p.system, p.reference, ctx, p.id, costs ? &*costs : nullptr));
        report.aggregate = aggregate(report.pairs);
    }

    if (cfg.format == "table") {
        auto rows = report.pairs;
        rows.push_back(report.aggregate);
        out << format_report_table(rows);
    } else {
        out << dump_stable(to_json(report));
    }
    return kOk;
}

int cmd_align(const RunConfig& cfg, const std::string& system_path, const std::string& reference_path,
              const std::string& id, std::ostream& out) {
    cfg.validate();
    auto inputs = load_inputs(system_path, reference_path);
    auto p = select_pair(inputs, id);

    std::optional<CostMatrix> costs;
    if (!cfg.cost_table.empty()) {
        costs = load_cost_table(cfg.cost_table, p.system.size(), p.reference.size());
    } else {
        auto provider = make_provider(cfg);
        CostConfig cost{cfg.alpha};
        costs = substitution_costs(p.system, p.reference, *provider, cost);
    }
    auto result = catalogue_edit_distance(build_tree(p.system), build_tree(p.reference), *costs);
    const double score = ceds_from_distance(result.distance, p.system.size(), p.reference.size());

    if (cfg.format == "json") {
        out << dump_stable(trace_to_json(result.trace, p.system, p.reference, result.distance, score));
    } else {
        out << format_trace_table(result.trace, p.system, p.reference);
        char buf[128];
        std::snprintf(buf, sizeof buf, "CED %.2f  CEDS %.2f\n", result.distance, score);
        out << buf;
    }
    return kOk;
}

int cmd_stats(const std::string& path, bool filter, bool stem, const std::string& lexicon_path,
              const std::string& format, std::ostream& out) {
    auto records = load_corpus(path);
    std::size_t dropped = 0;
    if (filter) {
        std::vector<ReviewRecord> kept;
        for (const auto& r : records) {
            auto res = apply_filters(r);
            if (res.keep()) {
                kept.push_back(std::move(*res.kept));
            } else {
                ++dropped;
            }
        }
        records = std::move(kept);
    }
    auto lexicon = lexicon_path.empty() ? TemplateLexicon::builtin() : TemplateLexicon::load(lexicon_path);
    auto stats = corpus_stats(records, lexicon, stem);
    if (format == "table") {
        out << format_stats_table(stats);
        if (filter) out << "dropped by filters: " << dropped << "\n";
    } else {
        auto j = to_json(stats);
        if (filter) j["dropped"] = dropped;
        out << dump_stable(j);
    }
    return kOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return fields;
}

int cmd_corr(const std::string& path, const std::string& format, std::ostream& out) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
        ++line_no;
        if (split_words(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw ParseError("expected 2 columns, got " + std::to_string(fields.size()), line_no);
        if (header.empty()) {
            header = fields;
            continue;
        }
        double v[2];
        for (int k = 0; k < 2; ++k) {
            std::size_t used = 0;
            try {
                v[k] = std::stod(fields[static_cast<std::size_t>(k)], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != fields[static_cast<std::size_t>(k)].size()) {
                throw ParseError("'" + fields[static_cast<std::size_t>(k)] + "' is not a number", line_no);
            }
        }
        xs.push_back(v[0]);
        ys.push_back(v[1]);
    }
    if (header.empty()) throw InputError("EmptyInput", "no header row in " + path);
    auto result = pearson(xs, ys);
    if (format == "table") {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s ~ %s: r = %.4f  p = %.4f  n = %zu\n", header[0].c_str(), header[1].c_str(),
                      result.r, result.p, result.n);
        out << buf;
    } else {
        auto j = to_json(result);
        j["x"] = header[0];
        j["y"] = header[1];
        out << dump_stable(j);
    }
    return kOk;
}

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical catalogue evaluation: CEDS, CQE, ROUGE, corpus statistics", "catscore"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string system, reference, align_id;

    std::string validate_path, validate_format = "table";
    auto* validate = app.add_subcommand("validate", "Check a catalogue or corpus file for structural issues");
    validate->add_option("file", validate_path, "Catalogue text or JSONL file")->required();
    validate->add_option("--format", validate_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->envname("CATSCORE_FORMAT");

    auto* score = app.add_subcommand("score", "Score system catalogues against references");
    add_scoring_options(score, cfg, system, reference);
    std::string score_format = "json";
    score->add_option("--format", score_format, "json or table")
        ->check(CLI::IsMember({"table", "json"}))
        ->envname("CATSCORE_FORMAT");

    auto* align = app.add_subcommand("align", "Print the optimal item alignment behind CED");
    add_scoring_options(align, cfg, system, reference);
    std::string align_format = "table";
    align->add_option("--format", align_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->envname("CATSCORE_FORMAT");
    align->add_option("--id", align_id, "Pair id when the inputs are JSONL")->envname("CATSCORE_ID");

    std::string stats_path, stats_format = "json", stats_lexicon;
    bool stats_filter = false, stats_stem = false;
    auto* stats = app.add_subcommand("stats", "Corpus statistics");
    stats->add_option("corpus", stats_path, "Corpus JSONL")->required();
    stats->add_flag("--filter", stats_filter, "Apply the item/reference filters first")->envname("CATSCORE_FILTER");
    stats->add_flag("--stem", stats_stem, "Porter-stem tokens before ROUGE")->envname("CATSCORE_STEM");
    stats->add_option("--lexicon", stats_lexicon, "Template lexicon file")->envname("CATSCORE_LEXICON");
    stats->add_option("--format", stats_format, "json or table")
        ->check(CLI::IsMember({"table", "json"}))
        ->envname("CATSCORE_FORMAT");

    std::string corr_path, corr_format = "json";
    auto* corr = app.add_subcommand("corr", "Pearson correlation of a two-column CSV");
    corr->add_option("csv", corr_path, "CSV with a header row")->required();
    corr->add_option("--format", corr_format, "json or table")
        ->check(CLI::IsMember({"table", "json"}))
        ->envname("CATSCORE_FORMAT");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: UsageError: " << one_line(e.what()) << "\n";
        return kInputError;
    }

    try {
        if (*validate) return cmd_validate(validate_path, validate_format, out);
        if (*score) {
            cfg.format = score_format;
            return cmd_score(cfg, system, reference, out);
        }
        if (*align) {
            cfg.format = align_format;
            return cmd_align(cfg, system, reference, align_id, out);
        }
        if (*stats) return cmd_stats(stats_path, stats_filter, stats_stem, stats_lexicon, stats_format, out);
        if (*corr) return cmd_corr(corr_path, corr_format, out);
    } catch (const ProviderError& e) {
        err << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
        return kProviderError;
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << one_line(e.what()) << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: InputError: " << one_line(e.what()) << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace catscore::cli
