#pragma once

#include <stdexcept>
#include <string>

namespace qam {

/// Location of a token in QASM source text (1-based line/column).
struct SourceSpan {
    int line = 0;
    int column = 0;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, SourceSpan span)
        : Error(what + " (line " + std::to_string(span.line) + ", column " +
                std::to_string(span.column) + ")"),
          span_(span) {}

    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

class UnsupportedConstruct : public Error {
public:
    using Error::Error;
    UnsupportedConstruct(const std::string& what, SourceSpan span)
        : Error(what + " (line " + std::to_string(span.line) + ", column " +
                std::to_string(span.column) + ")") {}
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
    IndexOutOfRange(const std::string& what, SourceSpan span)
        : Error(what + " (line " + std::to_string(span.line) + ", column " +
                std::to_string(span.column) + ")") {}
};

class NonUnitaryCircuit : public Error {
public:
    using Error::Error;
};

class ClbitCollision : public Error {
public:
    using Error::Error;
};

class ZeroNormCollapse : public Error {
public:
    using Error::Error;
};

class CapacityExceeded : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InsufficientShots : public Error {
public:
    using Error::Error;
};

class TooManyBins : public Error {
public:
    using Error::Error;
};

class TooFewQubits : public Error {
public:
    using Error::Error;
};

class EmptyCircuit : public Error {
public:
    using Error::Error;
};

class OverlapConflict : public Error {
public:
    using Error::Error;
};

class StrategyMismatch : public Error {
public:
    using Error::Error;
};

class InsufficientAssertions : public Error {
public:
    using Error::Error;
};

class UndetectableBug : public Error {
public:
    using Error::Error;
};

class UnknownBuiltin : public Error {
public:
    using Error::Error;
};

}  // namespace qam
