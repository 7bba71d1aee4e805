#pragma once

#include <stdexcept>
#include <string>

namespace tabhash {

/// Raised when a hard post-condition check fails (a guarantee the library
/// promises was observed not to hold). Distinct from invalid input, which
/// uses std::invalid_argument / std::out_of_range.
class CheckFailure : public std::runtime_error {
public:
    explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tabhash
