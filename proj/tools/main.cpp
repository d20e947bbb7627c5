#include <iostream>

#include "fairrank/cli.hpp"

int main(int argc, char** argv) { return fairrank::cli::run(argc, argv, std::cout, std::cerr); }
