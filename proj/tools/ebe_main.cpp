#include <iostream>

#include "ebe/commands.hpp"

int main(int argc, char** argv) { return ebe::cli_main(argc, argv, std::cout, std::cerr); }
