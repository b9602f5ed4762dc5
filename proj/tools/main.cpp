#include <iostream>

#include "bitt/cli.hpp"

int main(int argc, char** argv) { return bitt::cli::run(argc, argv, std::cout, std::cerr); }
