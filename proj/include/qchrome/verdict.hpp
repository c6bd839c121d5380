#pragma once

#include <string>

namespace qchrome {

/// Outcome of a check; `detail` names the first violation.
struct Verdict {
    bool ok = false;
    std::string detail;
    explicit operator bool() const { return ok; }
};

}  // namespace qchrome
