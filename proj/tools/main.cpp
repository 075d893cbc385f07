#include "tvewd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tvewd::cli::run(argc, argv, std::cout, std::cerr); }
