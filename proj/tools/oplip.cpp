#include <iostream>

#include "oplip/cli.hpp"

int main(int argc, char** argv) { return oplip::run_cli(argc, argv, std::cout, std::cerr); }
