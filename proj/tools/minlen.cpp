#include <iostream>

#include "minlen/cli.hpp"

int main(int argc, char** argv) { return minlen::cli::run(argc, argv, std::cout, std::cerr); }
