#include <iostream>

#include "kerrfem_cli/cli.hpp"

int main(int argc, char** argv) { return kerrfem::cli::cli_main(argc, argv, std::cout, std::cerr); }
