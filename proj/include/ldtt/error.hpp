#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ldtt {

/// Byte range in a source file plus the 1-based line/column of its start.
struct SourceSpan {
    std::string file;
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t line = 1;
    std::size_t col = 1;
};

enum class ErrorKind {
    // core-syntax
    OutOfScope,
    IllFormedNode,
    NegativeIndex,
    // parser
    LexError,
    ParseError,
    UnboundName,
    DuplicateLinearName,
    LinearVarInType,
    DuplicateName,
    // kernel
    SortMismatch,
    LinearViolation,
    ZoneMismatch,
    ModeError,
    TypeMismatch,
    CannotInfer,
    FeatureDisabled,
    // equality
    NonTermination,
    // linear algebra
    DimMismatch,
    ModulusMismatch,
    // models
    MissingBasis,
    SizeOverflow,
    SortError,
    BaseMismatch,
    NotAPullback,
    NotInvertibleComponent,
    InvalidStructure,
    Unsupported,
    // cli
    Usage,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<SourceSpan> span = std::nullopt)
        : std::runtime_error(what), kind_(kind), span_(std::move(span)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<SourceSpan>& span() const noexcept { return span_; }

private:
    ErrorKind kind_;
    std::optional<SourceSpan> span_;
};

}  // namespace ldtt
