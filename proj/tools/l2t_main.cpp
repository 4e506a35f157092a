#include <iostream>

#include "l2t/cli.hpp"

int main(int argc, char** argv) { return l2t::run_cli(argc, argv, std::cout, std::cerr); }
