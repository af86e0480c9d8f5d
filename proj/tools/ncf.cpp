#include "ncfurst/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ncf::cli::main(argc, argv, std::cout, std::cerr); }
