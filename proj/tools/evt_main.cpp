#include <iostream>
#include <string>
#include <vector>

#include "evt/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return evt::cli::main(args, std::cout, std::cerr);
}
