#ifndef KRONMIX_ERRORS_HPP
#define KRONMIX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kronmix {

/// Base of every error raised by the library. The category decides the CLI
/// exit code (config 2, parse 3, analysis 4).
class Error : public std::runtime_error {
public:
    enum class Category { Config, Parse, Analysis };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(Category::Parse, "ParseError: line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyGraph : public Error {
public:
    explicit EmptyGraph(const std::string& what)
        : Error(Category::Parse, "EmptyGraph: " + what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what)
        : Error(Category::Config, "ConfigError: " + what) {}
};

class SpecError : public Error {
public:
    explicit SpecError(const std::string& what)
        : Error(Category::Config, "SpecError: " + what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what)
        : Error(Category::Analysis, "DimensionMismatch: " + what) {}
};

class DanglingNode : public Error {
public:
    explicit DanglingNode(std::size_t node)
        : Error(Category::Analysis,
                "DanglingNode: node " + std::to_string(node) + " has out-degree 0"),
          node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class NotStochastic : public Error {
public:
    NotStochastic(std::size_t row, const std::string& what)
        : Error(Category::Analysis,
                "NotStochastic: row " + std::to_string(row) + ": " + what),
          row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class NotErgodic : public Error {
public:
    explicit NotErgodic(const std::string& what)
        : Error(Category::Analysis, "NotErgodic: " + what) {}
};

class TooLarge : public Error {
public:
    explicit TooLarge(const std::string& what)
        : Error(Category::Analysis, "TooLarge: " + what) {}
};

/// Inconsistent structure detected at run time, e.g. a singular (I - Z).
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& what)
        : Error(Category::Analysis, "StructuralError: " + what) {}
};

class FailedToConverge : public Error {
public:
    explicit FailedToConverge(const std::string& what)
        : Error(Category::Analysis, "FailedToConverge: " + what) {}
};

class AllTrialsCapped : public Error {
public:
    explicit AllTrialsCapped(const std::string& what)
        : Error(Category::Analysis, "AllTrialsCapped: " + what) {}
};

class NoUniqueFixedPoint : public Error {
public:
    explicit NoUniqueFixedPoint(const std::string& what)
        : Error(Category::Analysis, "NoUniqueFixedPoint: " + what) {}
};

class NonConvergent : public Error {
public:
    explicit NonConvergent(const std::string& what)
        : Error(Category::Analysis, "NonConvergent: " + what) {}
};

class OrderingError : public Error {
public:
    explicit OrderingError(const std::string& what)
        : Error(Category::Analysis, "OrderingError: " + what) {}
};

}  // namespace kronmix

#endif  // KRONMIX_ERRORS_HPP
