#include <iostream>

#include "coalscope/cli.hpp"

int main(int argc, char** argv) { return coalscope::run_cli(argc, argv, std::cout, std::cerr); }
