#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace catscore {

using Tokens = std::vector<std::string>;

/// ASCII lowercase; bytes outside ASCII pass through untouched.
std::string to_lower(std::string_view text);

/// The tokenizer shared by every metric: lowercase, split on whitespace,
/// strip leading/trailing punctuation from each token. Internal punctuation
/// survives, so "fine-tuning" stays one token. Tokens that are pure
/// punctuation vanish.
Tokens tokenize(std::string_view text);

/// Tokens joined by single spaces. Used as the lookup key for embeddings.
std::string normalize(std::string_view text);

std::string join(const Tokens& tokens, std::string_view sep = " ");

/// Whitespace-split words, without any normalization.
std::vector<std::string_view> split_words(std::string_view text);

}  // namespace catscore
