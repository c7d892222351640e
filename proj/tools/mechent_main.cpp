#include "mechent/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mechent::run_cli(argc, argv, std::cout, std::cerr); }
