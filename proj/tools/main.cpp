#include <iostream>

#include "mkse/cli.hpp"

int main(int argc, char** argv) { return mkse::run_cli(argc, argv, std::cout, std::cerr); }
