#ifndef CLUSTERDYN_VERIFY_HPP
#define CLUSTERDYN_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace clusterdyn {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs acceptance criteria 1 through 10. Each criterion is exception-safe:
// a thrown error becomes a failed result, never an aborted suite.
std::vector<CriterionResult> run_acceptance();

// One line per criterion: "[PASS] 03 equal periods ...".
void print_results(const std::vector<CriterionResult>& results, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace clusterdyn

#endif
