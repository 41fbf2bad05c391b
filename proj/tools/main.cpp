#include <iostream>

#include "hardpair/cli.hpp"

int main(int argc, char** argv) { return hardpair::run(argc, argv, std::cout, std::cerr); }
