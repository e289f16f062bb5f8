#include <iostream>

#include "visnf/selftest.hpp"

// Runs the full seeded verification suite and prints one line per
// criterion.  The exit status is the overall verdict, so this binary
// doubles as the acceptance gate under ctest.
int main() {
    const visnf::selftest::Report report = visnf::selftest::run(0);
    visnf::selftest::print(report, std::cout);
    return report.all_passed() ? 0 : 1;
}
