// Runs every acceptance suite and prints one PASS/FAIL line per criterion.
#include "nearcurve/acceptance.hpp"

#include <cstdio>
#include <cstring>
#include <exception>
#include <thread>

int main(int argc, char** argv) {
    int workers = (int)std::max(1u, std::thread::hardware_concurrency());
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--workers") == 0) workers = std::atoi(argv[i + 1]);

    bool all_pass = true;
    for (const auto& suite : nearcurve::acceptance_suites()) {
        try {
            auto rep = nearcurve::run_acceptance(suite, workers);
            std::printf("%s %s\n", rep.pass ? "PASS" : "FAIL", suite.c_str());
            for (const auto& l : rep.lines) std::printf("    %s\n", l.c_str());
            all_pass = all_pass && rep.pass;
        } catch (const std::exception& e) {
            std::printf("FAIL %s (exception: %s)\n", suite.c_str(), e.what());
            all_pass = false;
        }
        std::fflush(stdout);
    }
    std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
    return all_pass ? 0 : 1;
}
