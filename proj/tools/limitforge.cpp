#include <iostream>

#include "limitforge/cli.hpp"

int main(int argc, char** argv) { return limitforge::run_cli(argc, argv, std::cout, std::cerr); }
