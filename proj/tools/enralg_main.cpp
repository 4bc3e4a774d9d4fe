#include <iostream>

#include "enralg/cli.hpp"

int main(int argc, char** argv) { return enralg::run_cli(argc, argv, std::cout, std::cerr); }
