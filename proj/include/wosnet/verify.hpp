#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wosnet {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::string only;  // run only checks whose name starts with this
    std::uint64_t seed = 1;
    int threads = 1;
    // scales the asserted tolerance of the sqrt check; < 1 is a negative
    // control that must fail
    double sqrt_tolerance_scale = 1.0;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opt);

}  // namespace wosnet
