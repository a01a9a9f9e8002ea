#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cstarmod {

/// One recorded counterexample from a sampling check.
struct Violation {
    std::string witness;
    double magnitude = 0.0;
};

/// Outcome of a single named check (an axiom, a clause, a condition).
/// Stored witnesses are capped; total_violations keeps the full count.
struct CheckResult {
    std::string id;
    bool applicable = true;
    std::size_t samples = 0;
    std::size_t total_violations = 0;
    std::vector<Violation> violations;
    std::string note;

    CheckResult() = default;
    explicit CheckResult(std::string id_) : id(std::move(id_)) {}

    static constexpr std::size_t kMaxStoredViolations = 16;

    void add_violation(std::string witness, double magnitude);
    bool passed() const { return !applicable || total_violations == 0; }
};

/// Bundle of checks for one subject (a metric, a function, a system).
struct Report {
    std::string subject;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* find(const std::string& id) const;
};

inline void CheckResult::add_violation(std::string witness, double magnitude) {
    ++total_violations;
    if (violations.size() < kMaxStoredViolations) {
        violations.push_back({std::move(witness), magnitude});
    }
}

inline bool Report::all_passed() const {
    for (const auto& c : checks) {
        if (!c.passed()) return false;
    }
    return true;
}

inline const CheckResult* Report::find(const std::string& id) const {
    for (const auto& c : checks) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

} // namespace cstarmod
