#include <iostream>

#include "dary/cli.hpp"

int main(int argc, char** argv) { return dary::cli::run(argc, argv, std::cout, std::cerr); }
