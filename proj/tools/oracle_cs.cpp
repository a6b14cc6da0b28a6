#include <iostream>

#include "oracle_cs/cli.hpp"

int main(int argc, char** argv) {
    return oracle_cs::cli::run(argc, argv, std::cout, std::cerr);
}
