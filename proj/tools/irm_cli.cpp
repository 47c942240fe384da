#include "irm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return irm::run_cli(argc, argv, std::cout, std::cerr); }
