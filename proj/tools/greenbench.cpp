#include <iostream>

#include "greenbench/commands.hpp"

int main(int argc, char** argv) { return greenbench::run_cli(argc, argv, std::cout, std::cerr); }
