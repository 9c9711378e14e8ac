"""Hierarchical catalogue evaluation: CEDS, CQE, ROUGE and Pearson analysis."""

from ._catscore import (
    Error,
    InputError,
    ProviderError,
    builtin_lexicon,
    catalogue_edit_distance,
    ceds,
    cqe,
    lexical_f1,
    novel_ngram_ratio,
    parse_catalogue,
    pearson,
    porter_stem,
    rouge_l,
    rouge_n,
    score_pair,
    serialize,
    tokenize,
    validate,
)

__all__ = [
    "Error",
    "InputError",
    "ProviderError",
    "builtin_lexicon",
    "catalogue_edit_distance",
    "ceds",
    "cqe",
    "lexical_f1",
    "novel_ngram_ratio",
    "parse_catalogue",
    "pearson",
    "porter_stem",
    "rouge_l",
    "rouge_n",
    "score_pair",
    "serialize",
    "tokenize",
    "validate",
]
