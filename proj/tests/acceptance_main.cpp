#include <iostream>

#include "pvlab/verify.hpp"

int main() {
    const auto results = pvlab::run_acceptance("all");
    const int failures = pvlab::print_acceptance(std::cout, results);
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
