#include <iostream>
#include <string>
#include <vector>

#include "hamvqe/cli.hpp"

int main(int argc, char **argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return hamvqe::run(args, std::cout, std::cerr);
}
