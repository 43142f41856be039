#include "prodnet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return prodnet::cli::run(argc, argv, std::cout, std::cerr); }
