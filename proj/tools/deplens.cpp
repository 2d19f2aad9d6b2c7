#include <iostream>

#include "deplens/cli.hpp"

int main(int argc, char** argv) { return deplens::cli::run(argc, argv, std::cout, std::cerr); }
