#pragma once

#include <stdexcept>
#include <string>

namespace catscore {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable name (e.g. "MissingEmbedding") used by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Bad input data: malformed files, inconsistent ids, degenerate series.
class InputError : public Error {
public:
    using Error::Error;
};

/// Failure inside a similarity backend (embedding file or service).
class ProviderError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& message, std::size_t line)
        : InputError("ParseError", "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MissingEmbedding : public ProviderError {
public:
    explicit MissingEmbedding(const std::string& text)
        : ProviderError("MissingEmbedding", "no embedding for '" + text + "'"), text_(text) {}

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

class ServiceError : public ProviderError {
public:
    explicit ServiceError(const std::string& message) : ProviderError("ServiceError", message) {}
};

class EmptyText : public ProviderError {
public:
    EmptyText() : ProviderError("EmptyText", "cannot compare a text with zero tokens") {}
};

}  // namespace catscore
