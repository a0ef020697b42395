#include <iostream>

#include "bimcheck/cli/cli.hpp"

int main(int argc, char** argv) {
    return bimcheck::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
