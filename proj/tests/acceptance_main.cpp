// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance_tests                 run everything
//   acceptance_tests --criterion N   run a single criterion
//   acceptance_tests --quick         fast subset
#include <cstring>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
    using namespace mbrlab_acceptance;
    int criterion = 0;
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            criterion = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        } else {
            std::cerr << "usage: acceptance_tests [--criterion N | --quick]\n";
            return 1;
        }
    }
    if (criterion > 0) return run_criterion(criterion, std::cout) ? 0 : 1;
    return run_suite(quick ? Scope::quick : Scope::full, std::cout) ? 0 : 1;
}
