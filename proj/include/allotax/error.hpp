#ifndef ALLOTAX_ERROR_HPP
#define ALLOTAX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace allotax {

/// Base of every error raised while validating user-provided data.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed syntax; `record` is a 1-based line (CSV/TSV) or record (JSON) index.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t record)
        : Error(what), record_(record) {}
    std::size_t record() const noexcept { return record_; }

private:
    std::size_t record_;
};

class DuplicateLabelError : public Error {
public:
    explicit DuplicateLabelError(std::string label)
        : Error("duplicate type label \"" + label + "\""), label_(std::move(label)) {}
    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

/// Negative, non-finite or otherwise out-of-domain count or rank.
class ValueError : public Error {
public:
    ValueError(const std::string& what, std::string label)
        : Error(what), label_(std::move(label)) {}
    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

class SizeLimitError : public Error {
public:
    using Error::Error;
};

class AlphaParseError : public Error {
public:
    using Error::Error;
};

}  // namespace allotax

#endif
