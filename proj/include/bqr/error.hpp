#pragma once

#include <stdexcept>
#include <string>

namespace bqr {

// Base class for every error caused by bad input, configuration or data.
// Anything else escaping the library is an internal failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string raw = {})
        : Error(what), raw_(std::move(raw)) {}

    // Offending input (LLM response text, JSON line, ...) when available.
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

class OutOfVocabulary : public Error {
public:
    using Error::Error;
};

class ProviderError : public Error {
public:
    using Error::Error;
};

// Raised when a candidate-generation method cannot run for a topic, e.g.
// keyword prompting for a topic without keywords.
class InapplicableMethod : public Error {
public:
    using Error::Error;
};

}  // namespace bqr
