#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace augdem {

// Base for all toolkit errors. `kind()` is a stable machine-readable tag;
// `backend_fault()` separates transport/model failures (CLI exit code 2)
// from validation and usage errors (exit code 1).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }
    virtual bool backend_fault() const noexcept { return false; }

private:
    std::string kind_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t row = 0)
        : Error("ParseError", row ? "row " + std::to_string(row) + ": " + message : message),
          row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& message) : Error("DuplicateId", message) {}
};

class UnknownProposal : public Error {
public:
    explicit UnknownProposal(const std::string& message) : Error("UnknownProposal", message) {}
};

class UnknownParticipant : public Error {
public:
    explicit UnknownParticipant(const std::string& message) : Error("UnknownParticipant", message) {}
};

class MalformedDemographic : public Error {
public:
    explicit MalformedDemographic(const std::string& message)
        : Error("MalformedDemographic", message) {}
};

class UndefinedWinRate : public Error {
public:
    explicit UndefinedWinRate(const std::string& message) : Error("UndefinedWinRate", message) {}
};

class SizeTooLarge : public Error {
public:
    explicit SizeTooLarge(const std::string& message) : Error("SizeTooLarge", message) {}
};

class EmptyCategory : public Error {
public:
    explicit EmptyCategory(const std::string& message) : Error("EmptyCategory", message) {}
};

class TemplateError : public Error {
public:
    explicit TemplateError(const std::string& message) : Error("TemplateError", message) {}
};

class UnknownBackend : public Error {
public:
    explicit UnknownBackend(const std::string& message) : Error("UnknownBackend", message) {}
};

class EmptyInput : public Error {
public:
    explicit EmptyInput(const std::string& message) : Error("EmptyInput", message) {}
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& message) : Error("DegenerateInput", message) {}
};

class NotImplemented : public Error {
public:
    explicit NotImplemented(const std::string& message) : Error("NotImplemented", message) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

class BackendUnavailable : public Error {
public:
    explicit BackendUnavailable(const std::string& message)
        : Error("BackendUnavailable", message) {}
    bool backend_fault() const noexcept override { return true; }
};

class AuthError : public Error {
public:
    explicit AuthError(const std::string& message) : Error("AuthError", message) {}
    bool backend_fault() const noexcept override { return true; }
};

class UnparseableResponse : public Error {
public:
    explicit UnparseableResponse(const std::string& message)
        : Error("UnparseableResponse", message) {}
    bool backend_fault() const noexcept override { return true; }
};

}  // namespace augdem
