#include "reeb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return reeb::run(argc, argv, std::cout, std::cerr); }
