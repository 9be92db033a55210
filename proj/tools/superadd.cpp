#include <iostream>

#include "superadd/cli.hpp"

int main(int argc, char **argv) { return superadd::cli::run(argc, argv, std::cout, std::cerr); }
