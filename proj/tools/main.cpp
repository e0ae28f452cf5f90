#include <iostream>
#include <string>
#include <vector>

#include "wanewave/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wanewave::cli::dispatch(args, std::cout, std::cerr);
}
