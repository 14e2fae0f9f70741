#pragma once

#include <stdexcept>
#include <string>

namespace hyperbpa {

// Base class for everything this library throws on contract violations.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two operands disagree on AP set or arity where they must match.
struct alphabet_mismatch_error : error {
    explicit alphabet_mismatch_error(const std::string& msg) : error(msg) {}
};

// A word/letter has the wrong arity for the requested operation.
struct arity_mismatch_error : error {
    explicit arity_mismatch_error(const std::string& msg) : error(msg) {}
};

// A target arity that must grow (or stay in range) does not.
struct bad_arity_error : error {
    explicit bad_arity_error(const std::string& msg) : error(msg) {}
};

struct too_many_traces_error : error {
    explicit too_many_traces_error(const std::string& msg) : error(msg) {}
};

struct ragged_traces_error : error {
    explicit ragged_traces_error(const std::string& msg) : error(msg) {}
};

// Text input rejected; carries position info for CLI diagnostics.
struct parse_error : error {
    int line;
    int column;
    parse_error(const std::string& msg, int line_, int column_)
        : error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

// Formula outside the supported safety fragment.
struct not_safe_error : error {
    explicit not_safe_error(const std::string& msg) : error(msg) {}
};

struct not_universally_safe_error : error {
    explicit not_universally_safe_error(const std::string& msg) : error(msg) {}
};

struct unbound_variable_error : error {
    explicit unbound_variable_error(const std::string& msg) : error(msg) {}
};

struct index_range_error : error {
    explicit index_range_error(const std::string& msg) : error(msg) {}
};

// Conjecture arity exceeds what a teacher can answer about.
struct arity_too_large_error : error {
    explicit arity_too_large_error(const std::string& msg) : error(msg) {}
};

// Observation table queried for a hypothesis while not closed/consistent.
struct table_not_ready_error : error {
    explicit table_not_ready_error(const std::string& msg) : error(msg) {}
};

struct unknown_word_error : error {
    explicit unknown_word_error(const std::string& msg) : error(msg) {}
};

}  // namespace hyperbpa
