#include <iostream>

#include "optocool/cli.hpp"

int main(int argc, char** argv) { return optocool::run_cli(argc, argv, std::cout, std::cerr); }
