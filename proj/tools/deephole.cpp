#include <iostream>

#include "deephole/cli.hpp"

int main(int argc, char** argv) { return deephole::cli::run(argc, argv, std::cout, std::cerr); }
