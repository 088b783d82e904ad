#include <iostream>

#include "nhpump/cli.hpp"

int main(int argc, char** argv) { return nhpump::cli::run(argc, argv, std::cout, std::cerr); }
