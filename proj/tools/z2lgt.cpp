#include <iostream>

#include "z2lgt/cli.hpp"

int main(int argc, char** argv) { return z2lgt::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
