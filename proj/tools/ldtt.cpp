#include <iostream>

#include "ldtt/cli.hpp"

int main(int argc, char** argv) { return ldtt::cli::run_cli(argc, argv, std::cout, std::cerr); }
