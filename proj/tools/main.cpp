#include <iostream>

#include "thaad/cli.hpp"

int main(int argc, char** argv) {
    return thaad::run_cli(argc, argv, std::cout, std::cerr);
}
