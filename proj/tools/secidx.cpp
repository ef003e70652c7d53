#include <iostream>
#include <string>
#include <vector>

#include "secidx/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return secidx::run_cli(args, std::cout, std::cerr);
}
