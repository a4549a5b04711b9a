// Acceptance battery runner: one pass/fail line per criterion, nonzero exit
// if any criterion fails. Pass the CLI binary path as argv[1] to include the
// end-to-end determinism checks.

#include <cstdio>

#include "cdt/verify.hpp"

int main(int argc, char** argv) {
    cdt::VerifyOptions opt;
    if (argc > 1) opt.cli_path = argv[1];
    const auto results = cdt::run_acceptance(opt);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s — %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: SOME CRITERIA FAILED");
    return all ? 0 : 1;
}
