#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace eap {

/// Raised by the proposer when a clip stream violates ordering or identity.
class StreamError : public std::runtime_error {
public:
    enum class Kind { Order, Identity };

    StreamError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Malformed input. `line` is 1-based; `file` may be empty for anonymous streams.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& message)
        : std::runtime_error(format(file, line, message)), file_(std::move(file)), line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    static std::string format(const std::string& file, std::size_t line, const std::string& message) {
        return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ": " + message;
    }

    std::string file_;
    std::size_t line_;
};

/// Recall is undefined when the corpus has no ground truth.
class UndefinedRecallError : public std::runtime_error {
public:
    UndefinedRecallError() : std::runtime_error("recall is undefined: ground-truth corpus is empty") {}
};

}  // namespace eap
