#include <iostream>

#include "fmrlevy/cli.hpp"

int main(int argc, char** argv) { return fmrlevy::cli::run(argc, argv, std::cout, std::cerr); }
