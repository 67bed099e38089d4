#include <iostream>

#include "qdepth/commands.hpp"

int main(int argc, char** argv) { return qdepth::run_cli(argc, argv, std::cout, std::cerr); }
