#include <iostream>

#include "foel/cli.hpp"

int main(int argc, char** argv) { return foel::cli::main_entry(argc, argv, std::cout, std::cerr); }
