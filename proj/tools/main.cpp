#include <iostream>

#include "hetmol/cli.hpp"

int main(int argc, char** argv) { return hetmol::cli::run(argc, argv, std::cout, std::cerr); }
