#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return pgtool::run(argc, argv, std::cout, std::cerr); }
