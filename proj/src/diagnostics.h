/**
 * @file diagnostics.h
 *
 * Source positions, diagnostics and the error types shared by all
 * compilation passes.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlc {

/** 1-based source location; line 0 means "no position". */
struct SourcePos {
    int line = 0;
    int column = 0;
};

struct Diagnostic {
    SourcePos pos;
    std::string code;
    std::string message;
};

/** Renders a diagnostic as `file:line:col: code: message`. */
inline std::string render(const Diagnostic& d, const std::string& file) {
    std::string out = file.empty() ? "<input>" : file;
    out += ":" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column);
    out += ": " + d.code + ": " + d.message;
    return out;
}

inline std::string render(const std::vector<Diagnostic>& ds, const std::string& file) {
    std::string out;
    for (const auto& d : ds) {
        out += render(d, file);
        out += "\n";
    }
    return out;
}

/** Fatal lexer/parser error; carries the offending position. */
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourcePos pos, std::string message)
            : std::runtime_error(message), diag_{pos, "SyntaxError", std::move(message)} {}

    const Diagnostic& diagnostic() const {
        return diag_;
    }

private:
    Diagnostic diag_;
};

/** A bug in the engine itself, never a user error. */
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& message) : std::logic_error(message) {}
};

}  // namespace dlc
