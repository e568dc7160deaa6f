#include "mbasis/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return mbasis::cli::run(argc, argv, std::cout, std::cerr); }
