#include "vqt/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return vqt::cli::run(argc, argv, std::cout, std::cerr); }
