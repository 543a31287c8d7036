#include <iostream>

#include "qdiv/cli.hpp"

int main(int argc, char** argv) { return qdiv::run_cli(argc, argv, std::cout, std::cerr); }
