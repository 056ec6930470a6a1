#include <iostream>
#include <vector>

#include "fqm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fqm::run_cli(args, std::cout, std::cerr);
}
