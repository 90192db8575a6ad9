// Release gate: runs every acceptance criterion at its pinned tolerance and
// prints one pass/fail line per criterion. Nonzero exit on any failure.
#include <cstring>
#include <iostream>

#include "hcn/acceptance.hpp"

int main(int argc, char** argv) {
    hcn::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--trials-scale") == 0 && i + 1 < argc)
            opts.trials_scale = std::atof(argv[++i]);
        else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
            opts.threads = std::atoi(argv[++i]);
    }
    const auto results = hcn::run_acceptance(opts, std::cout);
    bool ok = !results.empty();
    for (const auto& r : results) ok = ok && r.passed;
    std::cout << (ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " (" << results.size()
              << " criteria)" << std::endl;
    return ok ? 0 : 1;
}
