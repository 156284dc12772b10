#ifndef POLYDENS_VERIFY_HPP
#define POLYDENS_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "polydens/common.hpp"

namespace polydens {

struct CriterionResult {
    std::string id;     // stable identifier, AC1 .. AC11
    std::string title;
    bool pass = false;
    bool warn_only = false;  // diagnostic criterion: failure reports, does not gate
    std::string detail;      // key values, or the first counterexample
    double seconds = 0;
};

struct VerifyOptions {
    u64 seed = 42;
};

// All criterion ids in execution (dependency) order.
std::vector<std::string> criterion_ids();

CriterionResult run_criterion(const std::string& id, const VerifyOptions& opts = {});

// Runs every criterion in dependency order; each prints one
// [PASS]/[FAIL]/[WARN] line to `progress` (when non-null) as it finishes.
std::vector<CriterionResult> run_all_criteria(const VerifyOptions& opts = {},
                                              std::ostream* progress = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace polydens

#endif
