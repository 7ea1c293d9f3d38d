#include <iostream>

#include "gaprel/cli.hpp"

int main(int argc, char** argv) { return gaprel::run_cli(argc, argv, std::cout, std::cerr); }
