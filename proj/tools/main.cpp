#include <iostream>
#include <string>
#include <vector>

#include "sosgap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sosgap::cli_dispatch(std::move(args), std::cout, std::cerr);
}
