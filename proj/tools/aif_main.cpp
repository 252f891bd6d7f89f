#include <iostream>

#include "aif/cli.hpp"

int main(int argc, char** argv) { return aif::cli::run_cli(argc, argv, std::cout, std::cerr); }
