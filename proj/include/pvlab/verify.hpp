#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pvlab {

// One acceptance criterion outcome.  `measured` is the quantity compared
// against `threshold` in the direction given by `higher_is_better`.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    bool higher_is_better = false;
    std::string detail;
};

// Run the verification suite.  subset: "all" or "elliptic" (vacuum-solver
// criteria only).  Deterministic: fixed seeds, no wall-clock dependence.
std::vector<CriterionResult> run_acceptance(const std::string& subset = "all");

// One line per criterion ("PASS"/"FAIL", id, name, measured, threshold,
// detail); returns the number of failures.
int print_acceptance(std::ostream& os, const std::vector<CriterionResult>& rs);

} // namespace pvlab
