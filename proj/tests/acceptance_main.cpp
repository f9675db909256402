// Runs acceptance criteria 1-12 and prints one line per criterion.
// Usage: rnm_acceptance [criterion ids...]

#include <cstdlib>
#include <iostream>
#include <string>

#include "rnm/acceptance.hpp"

int main(int argc, char** argv) {
    rnm::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
    opts.progress = &std::cerr;
    auto results = rnm::run_acceptance(opts);
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::cout << rnm::format_result(r) << std::endl;
        if (!r.pass) ++failed;
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
