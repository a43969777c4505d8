#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tiltlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool correct = false;  // every check held
    double seconds = 0;
    double limit = 0;      // wall-clock limit in seconds
    std::string detail;
    bool pass() const { return correct && seconds <= limit; }
};

int acceptance_count();
std::string acceptance_name(int id);

// Runs one criterion (1-based). `log` receives per-case diagnostics.
CriterionResult run_criterion(int id, std::ostream* log = nullptr);

// "PASS  3 t-sharp-equals-p  0.12s/5s  ..." (FAIL when incorrect or too slow)
std::string format_line(const CriterionResult& r);

}  // namespace tiltlab
