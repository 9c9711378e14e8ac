#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "catscore/analysis.hpp"
#include "catscore/catalogue.hpp"
#include "catscore/ced.hpp"
#include "catscore/errors.hpp"
#include "catscore/porter.hpp"
#include "catscore/similarity.hpp"
#include "catscore/textmetrics.hpp"

namespace py = pybind11;
using namespace catscore;

namespace {

using ItemList = std::vector<std::pair<int, std::string>>;

Catalogue to_catalogue(const ItemList& items) {
    Catalogue c;
    for (const auto& [level, text] : items) c.items.push_back({level, normalize(text)});
    return c;
}

ItemList to_items(const Catalogue& c) {
    ItemList out;
    for (const auto& it : c.items) out.emplace_back(it.level, it.text);
    return out;
}

py::list issues_to_py(const std::vector<ValidationIssue>& issues) {
    py::list out;
    for (const auto& i : issues) {
        py::dict d;
        d["index"] = i.index;
        d["kind"] = std::string(to_string(i.kind));
        d["message"] = i.message;
        d["line"] = i.line;
        out.append(d);
    }
    return out;
}

py::tuple rouge_to_py(const RougeScore& s) { return py::make_tuple(s.precision, s.recall, s.f1); }

py::dict triple_to_py(const RougeTriple& t) {
    py::dict d;
    d["r1"] = t.r1;
    d["r2"] = t.r2;
    d["rl"] = t.rl;
    return d;
}

CostMatrix to_costs(const std::vector<std::vector<double>>& rows, std::size_t n, std::size_t m) {
    if (rows.size() != n) throw py::value_error("cost table needs one row per system item");
    CostMatrix costs(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m) throw py::value_error("cost table needs one column per reference item");
        for (std::size_t j = 0; j < m; ++j) costs.at(i, j) = rows[i][j];
    }
    return costs;
}

CqeMode to_mode(const std::string& mode) {
    if (mode == "tokens") return CqeMode::Tokens;
    if (mode == "items") return CqeMode::Items;
    throw py::value_error("mode must be 'tokens' or 'items'");
}

}  // namespace

PYBIND11_MODULE(_catscore, m) {
    m.doc() = "Hierarchical catalogue evaluation";

    static py::exception<Error> error(m, "Error");
    static py::exception<InputError> input_error(m, "InputError", error.ptr());
    static py::exception<ProviderError> provider_error(m, "ProviderError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            py::set_error(input_error, (e.kind() + ": " + e.what()).c_str());
        } catch (const ProviderError& e) {
            py::set_error(provider_error, (e.kind() + ": " + e.what()).c_str());
        } catch (const Error& e) {
            py::set_error(error, (e.kind() + ": " + e.what()).c_str());
        }
    });

    m.def("tokenize", &tokenize, py::arg("text"));
    m.def("porter_stem", &porter_stem, py::arg("word"));

    m.def(
        "parse_catalogue",
        [](const std::string& text) {
            auto parsed = parse_catalogue(text);
            return py::make_tuple(to_items(parsed.catalogue), issues_to_py(parsed.issues));
        },
        py::arg("text"), "Parse level-marked lines into ([(level, text)], issues).");
    m.def(
        "serialize", [](const ItemList& items) { return serialize(to_catalogue(items)); }, py::arg("items"));
    m.def(
        "validate", [](const ItemList& items) { return issues_to_py(validate(to_catalogue(items))); },
        py::arg("items"));

    m.def(
        "catalogue_edit_distance",
        [](const ItemList& system, const ItemList& reference, double alpha,
           std::optional<std::vector<std::vector<double>>> costs) {
            auto a = to_catalogue(system);
            auto b = to_catalogue(reference);
            CostMatrix table;
            if (costs) {
                table = to_costs(*costs, a.size(), b.size());
            } else {
                CostConfig cfg{alpha};
                cfg.check();
                py::gil_scoped_release release;
                table = substitution_costs(a, b, LexicalProvider{}, cfg);
            }
            CedResult r;
            {
                py::gil_scoped_release release;
                r = catalogue_edit_distance(build_tree(a), build_tree(b), table);
            }
            py::list ops;
            for (const auto& op : r.trace.ops) {
                ops.append(py::make_tuple(std::string(to_string(op.kind)), op.a >= 0 ? py::object(py::int_(op.a)) : py::none(),
                                          op.b >= 0 ? py::object(py::int_(op.b)) : py::none(), op.cost));
            }
            py::dict out;
            out["ced"] = r.distance;
            out["ceds"] = ceds_from_distance(r.distance, a.size(), b.size());
            out["ops"] = ops;
            return out;
        },
        py::arg("system"), py::arg("reference"), py::arg("alpha") = 1.2, py::arg("costs") = py::none(),
        "CED, CEDS and the alignment trace under the lexical provider or an explicit cost table.");
    m.def(
        "ceds",
        [](const ItemList& system, const ItemList& reference, double alpha) {
            return ceds(to_catalogue(system), to_catalogue(reference), LexicalProvider{}, CostConfig{alpha});
        },
        py::arg("system"), py::arg("reference"), py::arg("alpha") = 1.2);

    m.def("lexical_f1", py::overload_cast<std::string_view, std::string_view>(&lexical_f1), py::arg("x"),
          py::arg("y"));
    m.def(
        "rouge_n",
        [](const std::string& candidate, const std::string& reference, int n, bool stem) {
            return rouge_to_py(rouge_n(tokenize(candidate), tokenize(reference), n, stem));
        },
        py::arg("candidate"), py::arg("reference"), py::arg("n") = 1, py::arg("stem") = false,
        "(precision, recall, f1) in [0, 1].");
    m.def(
        "rouge_l",
        [](const std::string& candidate, const std::string& reference, bool stem) {
            return rouge_to_py(rouge_l(tokenize(candidate), tokenize(reference), stem));
        },
        py::arg("candidate"), py::arg("reference"), py::arg("stem") = false);
    m.def(
        "cqe",
        [](const ItemList& items, const std::string& mode, std::optional<std::string> lexicon) {
            auto lex = lexicon ? TemplateLexicon::parse(*lexicon) : TemplateLexicon::builtin();
            return cqe(to_catalogue(items), lex, to_mode(mode));
        },
        py::arg("items"), py::arg("mode") = "tokens", py::arg("lexicon") = py::none(),
        "Template share in percent; `lexicon` is lexicon file text.");
    m.def("builtin_lexicon", [] { return TemplateLexicon::builtin().to_text(); });
    m.def(
        "novel_ngram_ratio",
        [](const std::string& source, const std::string& target, int n) {
            return novel_ngram_ratio(tokenize(source), tokenize(target), n);
        },
        py::arg("source"), py::arg("target"), py::arg("n"));

    m.def(
        "pearson",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            auto r = pearson(xs, ys);
            py::dict out;
            out["r"] = r.r;
            out["p"] = r.p;
            out["n"] = r.n;
            return out;
        },
        py::arg("xs"), py::arg("ys"));

    m.def(
        "score_pair",
        [](const ItemList& system, const ItemList& reference, double alpha, bool stem) {
            LexicalProvider provider;
            ScoringContext ctx;
            ctx.provider = &provider;
            ctx.cost.alpha = alpha;
            ctx.stem = stem;
            auto r = score_pair(to_catalogue(system), to_catalogue(reference), ctx, "pair");
            py::dict rouge;
            rouge["l1"] = triple_to_py(r.rouge[kL1]);
            rouge["l2"] = triple_to_py(r.rouge[kL2]);
            rouge["l3"] = triple_to_py(r.rouge[kL3]);
            rouge["total"] = triple_to_py(r.rouge[kTotal]);
            py::dict out;
            out["ceds"] = r.ceds;
            out["ced"] = r.ced;
            out["cqe"] = r.cqe;
            out["similarity_total"] = r.similarity_total;
            out["item_count_system"] = r.item_count_system;
            out["item_count_reference"] = r.item_count_reference;
            out["rouge"] = rouge;
            return out;
        },
        py::arg("system"), py::arg("reference"), py::arg("alpha") = 1.2, py::arg("stem") = false,
        "Full metric report for one catalogue pair with the lexical provider.");
}
