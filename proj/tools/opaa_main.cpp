#include <iostream>

#include "opaa/cli.hpp"

int main(int argc, char** argv) { return opaa::cli::run(argc, argv, std::cout, std::cerr); }
