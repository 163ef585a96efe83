#pragma once

#include <stdexcept>
#include <string>

namespace planshield {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input-side errors (PDDL text, JSON task files).
struct ParseError : Error {
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(col_) + ")"),
          line(line_),
          col(col_) {}
    int line;
    int col;
};

struct UnsupportedFeatureError : Error {
    explicit UnsupportedFeatureError(const std::string& construct_)
        : Error("unsupported construct: " + construct_), construct(construct_) {}
    std::string construct;
};

struct GroundingError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    SchemaError(const std::string& msg, std::string pointer_)
        : Error(msg + " at " + (pointer_.empty() ? std::string("/") : pointer_)),
          pointer(std::move(pointer_)) {}
    std::string pointer;
};

// Semantic errors.
struct InapplicableError : Error {
    using Error::Error;
};
struct RangeError : Error {
    using Error::Error;
};
// Exploration hit the configured state cap: verdict is unknown, not unsolvable.
struct ResourceLimitError : Error {
    using Error::Error;
};
struct UnshieldableError : Error {
    using Error::Error;
};
struct EmptyPlanSetError : Error {
    using Error::Error;
};
struct GenerationError : Error {
    using Error::Error;
};

// Wraps an error from one stage of the shielding pipeline.
struct StageError : Error {
    StageError(std::string stage_, const std::string& msg)
        : Error("[" + stage_ + "] " + msg), stage(std::move(stage_)) {}
    std::string stage;
};

}  // namespace planshield
