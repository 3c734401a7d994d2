#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idtrack {

/// Malformed input document (bad JSON, missing or mistyped field).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A well-formed value that breaks a domain invariant. The message names the rule.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// More detections than candidate labels. `category` is empty unless the
/// problem was solved per object type.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(std::size_t detections, std::size_t candidates, std::string category = {})
        : std::runtime_error(make_message(detections, candidates, category)),
          detections_(detections),
          candidates_(candidates),
          category_(std::move(category)) {}

    std::size_t detections() const noexcept { return detections_; }
    std::size_t candidates() const noexcept { return candidates_; }
    const std::string& category() const noexcept { return category_; }

private:
    static std::string make_message(std::size_t n, std::size_t m, const std::string& category) {
        std::string msg = "infeasible assignment: " + std::to_string(n) + " detections but only " +
                          std::to_string(m) + " candidate labels";
        if (!category.empty()) msg += " of type '" + category + "'";
        return msg;
    }

    std::size_t detections_;
    std::size_t candidates_;
    std::string category_;
};

/// Problem too large for the exhaustive oracle.
class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace idtrack
