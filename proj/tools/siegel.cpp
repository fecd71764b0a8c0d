#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return siegel::cli::run(argc, argv, std::cout, std::cerr); }
