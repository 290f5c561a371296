#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) { return ucpd::cli::run(argc, argv, std::cout, std::cerr); }
