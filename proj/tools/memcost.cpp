#include <iostream>
#include <string>
#include <vector>

#include "memcost/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return memcost::cli::run_cli(args, std::cout, std::cerr);
}
