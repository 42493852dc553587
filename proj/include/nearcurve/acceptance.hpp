#pragma once

#include <string>
#include <vector>

namespace nearcurve {

struct AcceptanceReport {
    std::string suite;
    bool pass = false;
    std::vector<std::string> lines;
};

/// Registered suite names, in criterion order.
std::vector<std::string> acceptance_suites();

/// Runs one acceptance suite (or "all"); throws on unknown names.
AcceptanceReport run_acceptance(const std::string& suite, int workers = 1);

}  // namespace nearcurve
