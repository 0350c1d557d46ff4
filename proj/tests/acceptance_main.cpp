// One line per acceptance criterion; exits nonzero if any criterion fails.

#include <iostream>

#include "arithsurf/acceptance.hpp"

int main() {
    bool ok = true;
    for (const auto& r : arithsurf::acceptance::run_all()) {
        std::cout << r.line() << std::endl;
        ok = ok && r.passed;
    }
    std::cout << (ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    return ok ? 0 : 1;
}
