#pragma once

#include <string>
#include <vector>

namespace cdt {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    /// Path of the command-line binary; when nonempty, determinism is also
    /// checked end to end by invoking it twice and comparing bytes.
    std::string cli_path;
};

/// Run the full acceptance battery (criteria 1..10). Each entry reports one
/// criterion with its measured numbers.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt = {});

}  // namespace cdt
