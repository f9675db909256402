#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rnm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::vector<int> only;         // empty: all of 1..12
    std::size_t workers = 0;       // 0: RNM_WORKERS or hardware concurrency
    std::ostream* progress = nullptr;
};

// Results in criterion order. Criterion 8 pulls in the solver runs of 9-11.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

// "criterion  N  PASS  name  (12.3 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace rnm
