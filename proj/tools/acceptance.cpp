#include "tiltlab/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

// Usage: tiltlab_acceptance [-v] [criterion ids...]
int main(int argc, char** argv) {
    bool verbose = false;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "-v") verbose = true;
        else ids.push_back(std::atoi(a.c_str()));
    }
    if (ids.empty())
        for (int i = 1; i <= tiltlab::acceptance_count(); ++i) ids.push_back(i);
    int failed = 0;
    for (int id : ids) {
        auto r = tiltlab::run_criterion(id, verbose ? &std::cerr : nullptr);
        std::cout << tiltlab::format_line(r) << std::endl;
        if (!r.pass()) ++failed;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
